"""
Application constants
"""

# Convergence heuristic for numeric membership verdicts
SHRINK_FACTOR = 2.0
TAIL_THRESHOLD = 1e-6
DIVERGENCE_GROWTH = 1e3
INCREMENT_FLOOR = 1e-3
MIN_NUMERIC_LEVELS = 4

# Eigenvalues of D D^H or D^H D below PSD_NOISE_FACTOR * eps * size * lambda_max are zero
PSD_NOISE_FACTOR = 10.0

# Rank decisions closer than this fraction to the cutoff are flagged borderline
BORDERLINE_BAND = 0.10

# Slack allowed when comparing optimal bounds against predicted bounds
SANDWICH_SLACK = 1e-6

# Prefix-consistency checks of structured sequences
PREFIX_CHECK_LEVELS = (16, 256, 4096)

# Longest prefix scanned for a nonzero coordinate of a closed-form vector
NONZERO_SCAN = 64

# Input files
ALLOWED_FILE_TYPES = ['.json']
MAX_FILE_SIZE_MB = 10
