import math

# matrix_core
HERMITIAN_TOL = 1e-12  # relative, infinity norm
PD_TOL = 1e-10  # relative floor on lambda_min
SINGULAR_PIVOT = 1e-14  # relative to the spectral norm
CLUSTER_TOL = 1e-10  # eigenvalues closer than this (relative) share a basis

# range_radius
THETA_GRID = 2048
REFINE_BRACKETS = 3
REFINE_ITERS = 60
REFINE_XATOL = 1e-13
SECTOR_POINTS = 4096
CLASSIFY_POINTS = 512
HULL_TOL = 1e-9
PROBE_GRID = 512

ORACLE_SAMPLES = 100_000
ORACLE_RESTARTS = 8
ORACLE_ITERS = 300
ORACLE_BATCH = 20_000

# frac_power
DEFECTIVE_COND = 1e8
BRANCH_TOL = 1e-12
QUAD_NODES = 40
QUAD_PANELS = 8
QUAD_PANEL_WIDTH = 1.0
QUAD_TARGET_TOL = 1e-10
QUAD_MIN_TOL = 1e-14
QUAD_MAX_DOUBLINGS = 6
QUAD_T_MIN = 1e-3
QUAD_T_MAX = 1.0 - 1e-3

# verify
VIOLATION_TOL = 1e-8
P6_TOL = 1e-6
P8_MATCH_TOL = 1e-8  # multiplied by the condition number of A
EIG_FLOOR = 1e-3
SECTOR_BISECT_ITERS = 60
SECTOR_LOW_FRACTION = 0.9
DEFAULT_T_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_K_SET = (2, 3, 4)
DEFAULT_THETA_SET = (-math.pi / 3, math.pi / 4)
DEFAULT_S_SET = (0.1, 1.0, 10.0)

# hunt
HUNT_HALVE_AFTER = 50
HUNT_RESTART_AFTER = 500
HUNT_FLAG_THRESHOLD = 1e-4
HUNT_RECHECK_GRID = 10 * THETA_GRID
HUNT_RECHECK_TOL = 1e-12
HUNT_T_EDGE = 1e-9
