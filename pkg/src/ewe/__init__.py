"""Extended word equations and termination of extended Nielsen transformations."""

__version__ = "0.1.0"

from .core import (Boundary, BoundaryOrder, ExtendedWordEquation, InvalidEquation, WordEquation,
                   canonical, dual, is_nontrivial, is_staggered, make_ewe, trivial)
from .syntax import EweSyntaxError, format_ewe, parse_ewe, read_ewe
