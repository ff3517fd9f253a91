#All the constant used in dirac-scattering-utilities

SYSLOG_IDENTIFIER = 'diracutil'

# Environment
WORKERS_ENV_VAR = 'DIRACUTIL_WORKERS'
LOG_LEVEL_ENV_VAR = 'DIRACUTIL_LOG_LEVEL'

# Exit codes
EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

# Fourier convention tag carried by every Spectrum
FACTOR_2_CONVENTION = 'factor-2 exponent'

# Chirp family
MIN_N = 16
DEFAULT_N_LIST = (16, 36, 64, 100, 144)
DEFAULT_IDENTITY_N = 36
T2_J0_FRACTION = 1.75
T3_J0_FRACTION = 1.5
DEFAULT_K_POINTS = 5
DEFAULT_WEAK_POINTS = 64

# Bump
BUMP_RADIUS = 0.25
BUMP_KIND_EXPONENTIAL = 'exponential'
BUMP_KIND_SHARP = 'sharp-exponential'
DEFAULT_BUMP_TOL = 1e-10
BUMP_QUADRATURE_NODES = 4097

# Frequency constant search
DEFAULT_XI_GRID_COUNT = 1024
DEFAULT_J_MAX = 256
A_SEARCH_START = 1.0
A_CEILING = 1024.0
A_CONDITION_MARGIN = 4.0
A_TAIL_LIMIT = 1e-12

# Sampling
PHASE_STEP = 0.2
DEFAULT_MEMORY_BUDGET = 2 * 1024 ** 3
PROFILE_BYTES_PER_POINT = 8 + 4 * 16

# Oracles
BRUTE_FORCE_SUPPORT_BUDGET = 32.0
BRUTE_FORCE_POINT_BUDGET = 2000
RIESZ_MIN_PAD = 4
RIESZ_EDGE_DECAY = 1e-6
SERIES_L1_LIMIT = 0.5
SERIES_MAX_ORDER = 6
CONSERVATION_FAILURE = 1e-6
TAIL_BUDGET = 0.01
WEAK_COUPLING_EPS = 0.1

# Output
CSV_HEADER = ('scenario', 'N', 'j0', 'k', 'x', 'value_re', 'value_im',
              'magnitude', 'ratio_log_n', 'walltime_ms')
REPORT_CSV_HEADER = ('check', 'passed', 'max_error', 'tolerance', 'detail')
FORMAT_CSV = 'csv'
FORMAT_JSON = 'json'
X_INFINITY = 'inf'
X_SUPREMUM = 'sup'
STDOUT_PATH = '-'
