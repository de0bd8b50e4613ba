SCHEMA_VERSION = 1

# Predicate tolerances
EXACT_TOL = 1e-6
SIMULATOR_TOL = 1e-4

# Integration
DEFAULT_DT = 1e-3
DEFAULT_T_FINAL = 100.0
DEFAULT_SAMPLE_STRIDE = 100
DEFAULT_MAX_NORM = 1e9
MAX_STEPS = 100_000_000
STALL_TOL = 1e-7
STALL_STEPS = 1000

# Matching extraction / settlement
DEFAULT_THRESHOLD = 0.25
SETTLEMENT_WINDOW = 0.1

# Oracle size guards
MATCHING_EDGE_LIMIT = 24
RELAXATION_EDGE_LIMIT = 14
BALANCED_EDGE_LIMIT = 16
