# Simulator Configuration
import os

from dotenv import load_dotenv

load_dotenv()

# Unit conversions
SECONDS_PER_DAY = 86400.0
SECONDS_PER_YEAR = 3.1536e7

# Physical constants
GAS_CONSTANT = 8.314  # J/(mol K)
DEFAULT_TEMPERATURE = 303.0  # K
REFERENCE_PRESSURE = 1.0e6  # Pa, used to scale constraint rows

# Nonlinear solver
NONLINEAR_TOLERANCE = 1e-6
MAX_NEWTON_ITERATIONS = 20
SMOOTHING_REDUCTION = 0.1
SMOOTHING_FLOOR = 1e-14
INEXACT_LINEAR_TOLERANCE = 1e-8
MAX_DIVERGENT_ITERATIONS = 3  # consecutive residual increases
MAX_RESIDUAL_GROWTH = 1e5  # over the first residual of the step

# Linear solver
GMRES_RESTART = 30
GMRES_MAX_ITERATIONS = 600
GMRES_TOLERANCE = 1e-12
ILU_DROP_TOLERANCE = 1e-6
ILU_FILL_FACTOR = 20.0

# Time stepping heuristic
GROW_MAX_ITERATIONS = 10  # NS <= 10 doubles dt
HOLD_MAX_ITERATIONS = 15  # 11..15 keeps dt
GROW_FACTOR = 2.0
SHRINK_FACTOR = 0.5
DT_MIN_FRACTION = 1e-3  # of the initial dt
DT_MAX_FRACTION = 0.25  # of the end time

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("LOG_FILE", "logs/simulator.log")

# Results
OUTPUT_DIR = os.getenv("OUTPUT_DIR", "output")
