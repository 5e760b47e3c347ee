"""Nielsen transformations and extended Nielsen transformations.

Case II does the real work.  The order on the surviving boundaries B'^- is
transported from the source through ``nu``; each new boundary in B'^+ is then
placed anywhere strictly between its two same-side neighbours.  Case III is
always ``dual . case II . dual``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (Boundary, BoundaryOrder, ExtendedWordEquation, Variable, dual,
                   is_nontrivial, order_from_keys)
from .feasibility import coherence_witness, prefix_lengths


class NielsenCase(enum.Enum):
    I = "I"
    II = "II"
    III = "III"

    def __str__(self) -> str:
        return f"Case{self.value}"


class TransformError(ValueError):
    code = "TransformError"


class TrivialEquation(TransformError):
    code = "TrivialEquation"


class EmptySide(TransformError):
    code = "EmptySide"


class WrongCase(TransformError):
    code = "WrongCase"


class IncoherentInput(TransformError):
    code = "IncoherentInput"


class NotAdjacent(TransformError):
    code = "NotAdjacent"


def nielsen_case(e: ExtendedWordEquation) -> NielsenCase:
    if not is_nontrivial(e):
        raise TrivialEquation(f"no Nielsen transformation applies to {e.equation}")
    a, b = Boundary(1, 1), Boundary(2, 1)
    if e.equiv(a, b):
        return NielsenCase.I
    return NielsenCase.II if e.lt(b, a) else NielsenCase.III


def word_nielsen(u1: Sequence[Variable], u2: Sequence[Variable], case: NielsenCase
                 ) -> tuple[tuple[Variable, ...], tuple[Variable, ...]]:
    """Apply the endomorphism of ``case`` and drop the head of each side."""
    if not u1 or not u2:
        raise EmptySide("both sides must be nonempty")
    x, y = u1[0], u2[0]
    if x == y and case is not NielsenCase.I:
        raise WrongCase("equal heads force case I")
    if case is NielsenCase.I:
        image = {y: (x,)}
    elif case is NielsenCase.II:
        image = {x: (y, x)}
    else:
        image = {y: (x, y)}

    def apply(word):
        out = []
        for v in word:
            out.extend(image.get(v, (v,)))
        return tuple(out[1:])

    return apply(u1), apply(u2)


@dataclass(frozen=True)
class BoundaryMaps:
    """Index bookkeeping for one case II step.

    ``mu`` sends old boundaries in ``b_minus`` to new indices, ``nu`` sends
    every new boundary back to an old index.
    """

    u1: tuple[Variable, ...]
    u2: tuple[Variable, ...]
    mu: dict
    nu: dict
    b_minus: frozenset
    bp_minus: frozenset
    bp_plus: frozenset

    def mu_b(self, b) -> Boundary:
        return Boundary(b[0], self.mu[b])

    def nu_b(self, b) -> Boundary:
        return Boundary(b[0], self.nu[b])


def boundary_maps(e: ExtendedWordEquation) -> BoundaryMaps:
    if nielsen_case(e) is not NielsenCase.II:
        raise WrongCase("boundary maps are defined for case II; use the dual for case III")
    head = e.u1[0]
    u1p, u2p = word_nielsen(e.u1, e.u2, NielsenCase.II)
    mu, nu = {}, {}
    b_minus = set(e.boundaries) - {Boundary(2, 1)}
    for b in b_minus:
        hits = sum(1 for v in e.word(b.side)[: b.index] if v == head)
        mu[b] = b.index + hits - 1
    new_words = {1: u1p, 2: u2p}
    new_boundaries = [Boundary(s, j) for s in (1, 2) for j in range(1, len(new_words[s]) + 1)]
    for b in new_boundaries:
        hits = sum(1 for v in new_words[b.side][: b.index] if v == head)
        nu[b] = b.index - hits + 1
    bp_minus = {Boundary(b.side, mu[b]) for b in b_minus}
    bp_plus = set(new_boundaries) - bp_minus
    return BoundaryMaps(u1p, u2p, mu, nu, frozenset(b_minus), frozenset(bp_minus), frozenset(bp_plus))


def transported_order(e: ExtendedWordEquation, maps: BoundaryMaps) -> list[list[Boundary]]:
    """Rank classes of B'^- induced by the source order through ``nu``."""
    ranks = {}
    for b in maps.bp_minus:
        ranks.setdefault(e.order.rank(maps.nu_b(b)), []).append(b)
    return [sorted(ranks[r]) for r in sorted(ranks)]


def case_one_successor(e: ExtendedWordEquation) -> ExtendedWordEquation:
    u1p, u2p = word_nielsen(e.u1, e.u2, NielsenCase.I)
    ranks = []
    for cls in e.order.ranks:
        shifted = frozenset(Boundary(b.side, b.index - 1) for b in cls if b.index > 1)
        if shifted:
            ranks.append(shifted)
    return ExtendedWordEquation(u1p, u2p, BoundaryOrder(tuple(ranks)))


def _case_two_orders(e: ExtendedWordEquation, maps: BoundaryMaps) -> list[BoundaryOrder]:
    classes = transported_order(e, maps)
    K = len(classes)
    where = {b: k for k, cls in enumerate(classes) for b in cls}
    new = sorted(maps.bp_plus)

    # a placement is ("join", class) or ("gap", g): gap g sits below class g
    options = []
    for b in new:
        lo = where[b.prev] if b.index > 1 else -1
        hi = where[b.next]
        opts = [("gap", g) for g in range(lo + 1, hi + 1)]
        opts += [("join", c) for c in range(lo + 1, hi)]
        options.append(opts)

    orders = []
    for choice in itertools.product(*options):
        joined = [list(cls) for cls in classes]
        gaps: dict[int, list[Boundary]] = {}
        for b, (kind, k) in zip(new, choice):
            if kind == "join":
                joined[k].append(b)
            else:
                gaps.setdefault(k, []).append(b)
        # gap holding one new boundary per side: below, equal or above
        shared = sorted(g for g, bs in gaps.items() if len(bs) == 2)
        for arrangement in itertools.product(range(3), repeat=len(shared)):
            layout = dict(zip(shared, arrangement))
            ranks = []
            for g in range(K + 1):
                bs = sorted(gaps.get(g, ()))
                if len(bs) == 1:
                    ranks.append(frozenset(bs))
                elif len(bs) == 2:
                    lo_b, hi_b = bs
                    if layout[g] == 0:
                        ranks += [frozenset([lo_b]), frozenset([hi_b])]
                    elif layout[g] == 1:
                        ranks.append(frozenset(bs))
                    else:
                        ranks += [frozenset([hi_b]), frozenset([lo_b])]
                if g < K:
                    ranks.append(frozenset(joined[g]))
            orders.append(BoundaryOrder(tuple(ranks)))
    return orders


def raw_successors(e: ExtendedWordEquation) -> list[ExtendedWordEquation]:
    """Every extended Nielsen transformation of ``e``, coherent or not."""
    case = nielsen_case(e)
    if case is NielsenCase.I:
        return [case_one_successor(e)]
    if case is NielsenCase.III:
        return [dual(s) for s in raw_successors(dual(e))]
    maps = boundary_maps(e)
    seen, out = set(), []
    for order in _case_two_orders(e, maps):
        s = ExtendedWordEquation(maps.u1, maps.u2, order)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def successors(e: ExtendedWordEquation) -> list[tuple[ExtendedWordEquation, bool]]:
    """Successors of a nontrivial coherent equation, each with its coherence flag."""
    nielsen_case(e)
    if coherence_witness(e) is None:
        raise IncoherentInput("extended Nielsen transformations need a coherent input")
    return [(s, coherence_witness(s) is not None) for s in raw_successors(e)]


def coherent_successors(e: ExtendedWordEquation) -> list[ExtendedWordEquation]:
    return [s for s, ok in successors(e) if ok]


def coherent_successor(e: ExtendedWordEquation, lengths: Optional[dict] = None) -> ExtendedWordEquation:
    """One coherent successor, read off a transported length witness."""
    case = nielsen_case(e)
    if lengths is None:
        lengths = coherence_witness(e)
        if lengths is None:
            raise IncoherentInput("no coherence witness")
    if case is NielsenCase.III:
        return dual(coherent_successor(dual(e), lengths))
    if case is NielsenCase.I:
        return case_one_successor(e)
    head, short = e.u1[0], e.u2[0]
    updated = dict(lengths)
    updated[head] = lengths[head] - lengths[short]
    if updated[head] < 1:
        raise IncoherentInput("witness does not respect the case II comparison")
    u1p, u2p = word_nielsen(e.u1, e.u2, NielsenCase.II)
    shell = ExtendedWordEquation(u1p, u2p, BoundaryOrder(()))
    pos = prefix_lengths(shell, updated)
    return ExtendedWordEquation(u1p, u2p, order_from_keys(shell.boundaries, pos.__getitem__))


def adjacent_partners(e: ExtendedWordEquation, b: Boundary) -> list[Boundary]:
    """Opposite-side boundaries adjacent to ``b`` (singleton neighbouring classes)."""
    r = e.order.rank(b)
    ranks = e.order.ranks
    if len(ranks[r]) != 1:
        return []
    out = []
    for k in (r - 1, r + 1):
        if 0 <= k < len(ranks) and len(ranks[k]) == 1:
            (c,) = ranks[k]
            if c.side != b.side:
                out.append(c)
    return out


def swap(e: ExtendedWordEquation, b, other=None) -> ExtendedWordEquation:
    """Exchange ``b`` with an adjacent opposite-side boundary.

    When ``b`` has adjacent partners on both sides of it, ``other`` picks one.
    """
    b = Boundary(*b)
    partners = adjacent_partners(e, b)
    if other is not None:
        other = Boundary(*other)
        if other not in partners:
            raise NotAdjacent(f"{b} is not adjacent to {other}")
        partners = [other]
    if not partners:
        raise NotAdjacent(f"{b} has no adjacent opposite-side boundary")
    if len(partners) > 1:
        raise NotAdjacent(f"{b} is adjacent to both {partners[0]} and {partners[1]}; pass other=")
    c = partners[0]
    ranks = list(e.order.ranks)
    rb, rc = e.order.rank(b), e.order.rank(c)
    ranks[rb], ranks[rc] = ranks[rc], ranks[rb]
    return ExtendedWordEquation(e.u1, e.u2, BoundaryOrder(tuple(ranks)))
