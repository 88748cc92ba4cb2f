"""Default configuration values for scramblesim."""

from typing import Tuple

# Sampling defaults
DEFAULT_SAMPLER = "chain_rule"
SUPPORTED_SAMPLERS = ["chain_rule", "dpp", "exact"]
DEFAULT_CHAIN_RULE_METHOD = "nullspace"
SUPPORTED_CHAIN_RULE_METHODS = ["nullspace", "naive"]
DEFAULT_NUM_SAMPLES = 15000
DEFAULT_THREADS = 1

# Disorder averaging (random product initial states)
DEFAULT_INITIAL_STATES = 10
SUPPORTED_INITIAL_STATES = ["ground", "random-product"]

# Estimator defaults
DEFAULT_JACKKNIFE_BLOCKS = 20
DEFAULT_MAX_SKIP_FRACTION = 1e-3
AMPLITUDE_FLOOR = 1e-300

# Long-time reference for Z(t)
DEFAULT_T_INFINITY = 1e6
DEFAULT_T_INFINITY_WINDOW: Tuple[float, float] = (1e5, 1e6)
DEFAULT_T_INFINITY_POINTS = 5

# Exact engine caps
DEFAULT_MAX_SECTOR_DIM = 20000
DEFAULT_EXACT_DISTRIBUTION_CAP = 10**6

# OTOC defaults
DEFAULT_BETA = 1.0
DEFAULT_OTOC_THRESHOLD = 1e-3
DEFAULT_LYAPUNOV_WINDOW: Tuple[float, float] = (1e-6, 1e-2)

# Fit defaults
FIT_MAX_ITERATIONS = 500
FIT_GRADIENT_TOL = 1e-8
FIT_MIN_ARCTAN_POINTS = 6
DEFAULT_LUTTINGER_POINTS = 4

# Output defaults
CSV_FLOAT_FORMAT = "%.17g"
SUPPORTED_OUTPUT_FORMATS = ["csv", "json"]

# Logging defaults
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_LOG_FORMAT = "console"
SUPPORTED_LOG_FORMATS = ["console", "json"]
SUPPORTED_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
