"""Certified extensions of finite windows on the integer grid.

Two condition families live here: two-colorings with shift and pattern
witnesses (``mincolor``) and power-of-n periodic windows with one hole
(``gridperiod``). Builders grow a seed window step by step and record a
certificate that an independent verifier re-checks from scratch.
"""

from .errors import ResourceLimitError
from .geometry import Lattice, Rect
from .grid import HOLE, Config, PatternSet, flip, tile

__version__ = "0.1.0"

__all__ = [
    "Config",
    "HOLE",
    "Lattice",
    "PatternSet",
    "Rect",
    "ResourceLimitError",
    "flip",
    "tile",
    "__version__",
]
