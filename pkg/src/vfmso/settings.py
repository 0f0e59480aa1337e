# vfmso/settings.py

# Settings for the vehicle fleet maintenance scheduling domain

INSTANCE_FORMAT_VERSION = "vfmso-instance/1"

# --- Monte Carlo evaluation ---
DUE_DATE_SAMPLES = 1000
# Execution window half-width, in standard deviations of the RUL distribution.
WINDOW_SIGMAS = 2.0

# --- Fleet shape ---
# One engine, four springs, four brakes and four tires per car.
COMPONENT_KINDS = ("engine", "spring", "brake", "tire")
COMPONENTS_PER_CAR = ("engine",) + ("spring",) * 4 + ("brake",) * 4 + ("tire",) * 4

PRESETS = {
    "v1": {"n_cars": 20, "n_workshops": 3},
    "v2": {"n_cars": 30, "n_workshops": 5},
}

# --- Instance generator ranges (hours, money units) ---
RUL_MEAN_BANDS = {
    "engine": (6000.0, 8000.0),
    "spring": (4000.0, 7000.0),
    "brake": (2000.0, 4000.0),
    "tire": (2500.0, 5000.0),
}
RUL_STD_FRACTION = (0.05, 0.10)
# How long ago each component was last repaired.
PREVIOUS_REPAIR_AGE = (0.0, 2000.0)
PROCESSING_TIME = (1.0, 8.0)
MAINTENANCE_COST = (50.0, 400.0)
SETUP_TIME = (0.5, 2.0)
SETUP_COST = (20.0, 80.0)
TEAMS_PER_WORKSHOP = (1, 4)
# Chance that a workshop can repair a given component kind.
CAPABILITY_PROBABILITY = 0.6

# --- Variation ---
# One crossover cut per this many cars (at least one).
CARS_PER_CUT = 10
