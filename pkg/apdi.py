#!/usr/bin/env python
# apdi.py

import os
import sys


def main_launcher():
    """
    Entry point for the experiment CLI.

    Puts the 'src' directory on the Python path so the flat modules import the same
    way here as in the tests, then hands over to src/main.py.
    """
    # --- Path Configuration ---
    project_root = os.path.dirname(os.path.abspath(__file__))
    src_path = os.path.join(project_root, "src")
    if src_path not in sys.path:
        sys.path.insert(0, src_path)

    # --- Run the Main Application ---
    from main import main

    sys.exit(main())


if __name__ == "__main__":
    main_launcher()
