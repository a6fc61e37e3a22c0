"""
Description: Default values shared by the layout, search and rendering code.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

from fractions import Fraction

# height-opt
DEFAULT_MAX_ITERS = 100
DENOMINATOR_BOUND = 10 ** 9
IMPORT_TOLERANCE = Fraction(1, 10 ** 6)

# order-search
BRUTE_FORCE_CAP = 9
ANNEAL_COOLING = 0.995
ANNEAL_STEPS = 20_000
REVERSAL_CHECK_MAX_ROWS = 6

# reductions
BETWEENNESS_W = Fraction(60)
HAMPATH_W = Fraction(12)

# rendering
SMOOTHING_RADIUS = Fraction(1, 4)
DEFAULT_SCALE = 40.0
# Paul Tol's "muted" scheme extended with his "light" scheme, all colourblind-safe.
DEFAULT_PALETTE = (
    "#332288", "#88CCEE", "#44AA99", "#117733", "#999933", "#DDCC77",
    "#CC6677", "#882255", "#AA4499", "#77AADD", "#EE8866", "#BBCC33",
)
