# Vehicle fleet maintenance scheduling: instances, encoding, decoding and evaluation.
