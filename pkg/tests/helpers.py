"""Shared fixtures data and cached instance lists for the test suite."""

from functools import lru_cache
from pathlib import Path

from ewe.core import make_ewe
from ewe.oracle import EnumerationSpec, enumerate_ewes
from ewe.syntax import parse_ewe, read_ewe

DATA = Path(__file__).parent / "data"


def data(name):
    return DATA / name


def load(name):
    return read_ewe(DATA / f"{name}.ewe")


def ewe(eq, order):
    left, right = eq.split("=")
    return parse_ewe(f"eq: {' '.join(left.strip())} = {' '.join(right.strip())}\norder: {order}\n")


XXY_ZWZ = make_ewe("XXY", "ZWZ", [[(2, 1)], [(1, 1)], [(2, 2)], [(1, 2)], [(1, 3), (2, 3)]])
XYZ_WYV = make_ewe("XYZ", "WYV", [[(1, 1)], [(2, 1)], [(2, 2)], [(1, 2)], [(1, 3), (2, 3)]])
XX_YY = make_ewe("XX", "YY", [[(1, 1), (2, 1)], [(1, 2), (2, 2)]])
XXY_YZZ = make_ewe("XXY", "YZZ", [[(2, 1)], [(1, 1)], [(2, 2)], [(1, 2)], [(1, 3), (2, 3)]])
ACYCLIC = make_ewe("XY", "ZW", [[(2, 1)], [(1, 1)], [(1, 2), (2, 2)]])
SELF_LOOP = make_ewe("XY", "ZX", [[(2, 1)], [(1, 1)], [(1, 2), (2, 2)]])
XY_ZX = make_ewe("XY", "ZX", [[(1, 1)], [(2, 1)], [(1, 2), (2, 2)]])
TRIVIAL = make_ewe("", "", [])


@lru_cache(maxsize=None)
def instances(max_total, max_vars):
    """``(ewe, coherent)`` for every enumerated instance, computed once per session."""
    return tuple(enumerate_ewes(EnumerationSpec(max_total, max_vars)))
