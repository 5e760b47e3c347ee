"""Brute-force reference implementations for cross-checking.

Nothing here reuses the transform or feasibility internals; only the core
value types are shared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .core import Boundary, BoundaryOrder, ExtendedWordEquation, canonical_name, dual


def enumerate_boundary_orders(u1, u2) -> list[BoundaryOrder]:
    """Every interleaving of the two boundary chains with the tops merged."""
    m, n = len(u1), len(u2)
    if m == 0 and n == 0:
        return [BoundaryOrder(())]
    if m == 0 or n == 0:
        return []
    out = []

    def go(i, j, acc):
        # i, j: boundaries already placed on each side
        if i == m - 1 and j == n - 1:
            out.append(BoundaryOrder(tuple(acc) + (frozenset({Boundary(1, m), Boundary(2, n)}),)))
            return
        if i < m - 1:
            go(i + 1, j, acc + [frozenset({Boundary(1, i + 1)})])
        if j < n - 1:
            go(i, j + 1, acc + [frozenset({Boundary(2, j + 1)})])
        if i < m - 1 and j < n - 1:
            go(i + 1, j + 1, acc + [frozenset({Boundary(1, i + 1), Boundary(2, j + 1)})])

    go(0, 0, [])
    return out


def delannoy(a: int, b: int) -> int:
    """Number of interleavings of chains of a and b free boundaries."""
    if a == 0 or b == 0:
        return 1
    return delannoy(a - 1, b) + delannoy(a, b - 1) + delannoy(a - 1, b - 1)


def _sign_matrix(e: ExtendedWordEquation):
    bs = [Boundary(1, 0), Boundary(2, 0)] + list(e.boundaries)
    r = np.array([e.order.rank(b) for b in bs])
    return bs, np.sign(r[:, None] - r[None, :])


def brute_coherence(e: ExtendedWordEquation, max_len: int) -> Optional[dict]:
    """Smallest (lexicographic) assignment in ``[1, max_len]^vars`` realising the order."""
    vars_ = sorted(e.variables)
    if not vars_:
        return {}
    bs, want = _sign_matrix(e)
    # prefix count matrix: boundaries x variables
    P = np.zeros((len(bs), len(vars_)), dtype=np.int64)
    col = {x: k for k, x in enumerate(vars_)}
    for r, b in enumerate(bs):
        for x in e.word(b.side)[: b.index]:
            P[r, col[x]] += 1
    grid = np.array(list(itertools.product(range(1, max_len + 1), repeat=len(vars_))), dtype=np.int64)
    for chunk in np.array_split(grid, max(1, len(grid) // 20000 + 1)):
        pos = chunk @ P.T
        got = np.sign(pos[:, :, None] - pos[:, None, :])
        ok = np.all(got == want[None], axis=(1, 2))
        hit = np.flatnonzero(ok)
        if hit.size:
            return {x: int(v) for x, v in zip(vars_, chunk[hit[0]])}
    return None


def check_assignment(e: ExtendedWordEquation, lengths: dict) -> bool:
    bs, want = _sign_matrix(e)
    pos = np.array([sum(lengths[x] for x in e.word(b.side)[: b.index]) for b in bs])
    return bool(np.all(np.sign(pos[:, None] - pos[None, :]) == want))


# -- successors by filtering all interleavings ---------------------------------------

def _nielsen_words(u1, u2, case):
    x, y = u1[0], u2[0]
    sub = {"I": {y: [x]}, "II": {x: [y, x]}, "III": {y: [x, y]}}[case]
    w1 = [t for v in u1 for t in sub.get(v, [v])][1:]
    w2 = [t for v in u2 for t in sub.get(v, [v])][1:]
    return tuple(w1), tuple(w2)


def _case(e):
    r11, r21 = e.order.rank((1, 1)), e.order.rank((2, 1))
    return "I" if r11 == r21 else ("II" if r11 > r21 else "III")


def _case_two_filter(e):
    head = e.u1[0]
    w1, w2 = _nielsen_words(e.u1, e.u2, "II")
    new = {1: w1, 2: w2}
    old_minus = [b for b in e.boundaries if b != (2, 1)]
    image = set()
    for i, j in old_minus:
        image.add((i, j + e.word(i)[:j].count(head) - 1))

    def nu(i, j):
        return j - new[i][:j].count(head) + 1

    keep = []
    for order in enumerate_boundary_orders(w1, w2):
        good = True
        for a, b in itertools.product(image, repeat=2):
            lhs = order.rank(a) < order.rank(b)
            rhs = e.order.rank((a[0], nu(*a))) < e.order.rank((b[0], nu(*b)))
            if lhs != rhs:
                good = False
                break
        if good:
            keep.append(ExtendedWordEquation(w1, w2, order))
    return keep


def oracle_successors(e: ExtendedWordEquation) -> list[ExtendedWordEquation]:
    """All extended Nielsen transformations, coherent or not, as a filter over interleavings."""
    if not e.u1 or not e.u2:
        return []
    case = _case(e)
    if case == "III":
        return [dual(s) for s in oracle_successors(dual(e))]
    if case == "II":
        return _case_two_filter(e)
    w1, w2 = _nielsen_words(e.u1, e.u2, "I")
    keep = []
    for order in enumerate_boundary_orders(w1, w2):
        s = ExtendedWordEquation(w1, w2, order)
        if all((order.rank(a) < order.rank(b)) == (e.order.rank((a[0], a[1] + 1)) < e.order.rank((b[0], b[1] + 1)))
               for a in s.boundaries for b in s.boundaries):
            keep.append(s)
    return keep


# -- instance enumeration ------------------------------------------------------------

@dataclass(frozen=True)
class EnumerationSpec:
    max_total_length: int
    max_variables: int
    sides_nonempty: bool = True

    def __post_init__(self):
        if self.max_total_length < 0 or self.max_variables < 1:
            raise ValueError("bounds must be positive")


def restricted_growth(length: int, max_letters: int) -> Iterator[tuple[int, ...]]:
    """Words where each new letter is the next unused one (canonical naming)."""
    def go(prefix, used):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for a in range(min(used + 1, max_letters)):
            yield from go(prefix + [a], max(used, a + 1))
    yield from go([], 0)


def enumerate_ewes(spec: EnumerationSpec, with_status: bool = True):
    """All EWEs within the bounds, canonically named, in a fixed order.

    Yields ``(ewe, coherent)`` pairs, or bare EWEs when ``with_status`` is false.
    """
    from .feasibility import is_coherent

    for total in range(0, spec.max_total_length + 1):
        if total == 0:
            if not spec.sides_nonempty:
                e = ExtendedWordEquation((), (), BoundaryOrder(()))
                yield (e, True) if with_status else e
            continue
        for m in range(1, total):
            n = total - m
            for word in restricted_growth(total, spec.max_variables):
                names = tuple(canonical_name(a) for a in word)
                u1, u2 = names[:m], names[m:]
                for order in enumerate_boundary_orders(u1, u2):
                    e = ExtendedWordEquation(u1, u2, order)
                    yield (e, is_coherent(e)) if with_status else e
