"""Word equations, boundaries, boundary orders and extended word equations.

A boundary ``(i, j)`` is the right edge of the j-th variable instance on
side ``i``.  A boundary order is stored as a rank list: an ordered tuple of
disjoint classes of boundaries, lowest first.  Two boundaries are equivalent
iff they share a class, so the equivalence part of the strict weak order is
structural.  The virtual boundaries ``(1, 0)`` and ``(2, 0)`` are never
stored; comparisons place them together strictly below every real class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

Variable = str


class Boundary(NamedTuple):
    side: int
    index: int

    def __str__(self) -> str:
        return f"({self.side},{self.index})"

    @property
    def prev(self) -> "Boundary":
        return Boundary(self.side, self.index - 1)

    @property
    def next(self) -> "Boundary":
        return Boundary(self.side, self.index + 1)


def other_side(side: int) -> int:
    return 3 - side


@dataclass(frozen=True)
class WordEquation:
    u1: tuple[Variable, ...]
    u2: tuple[Variable, ...]

    def is_nontrivial(self) -> bool:
        return bool(self.u1) and bool(self.u2)

    def __str__(self) -> str:
        return f"{''.join(self.u1) or 'ε'} = {''.join(self.u2) or 'ε'}"


@dataclass(frozen=True)
class BoundaryOrder:
    """Strict weak order on boundaries, as a list of rank classes (ascending)."""

    ranks: tuple[frozenset[Boundary], ...]
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rank = {}
        for r, cls in enumerate(self.ranks):
            for b in cls:
                rank[b] = r
        object.__setattr__(self, "_rank", rank)

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable[Sequence[int]]]) -> "BoundaryOrder":
        return cls(tuple(frozenset(Boundary(*b) for b in c) for c in classes))

    def rank(self, b: Sequence[int]) -> int:
        if b[1] == 0:
            return -1
        return self._rank[b]

    def lt(self, a, b) -> bool:
        return self.rank(a) < self.rank(b)

    def le(self, a, b) -> bool:
        return self.rank(a) <= self.rank(b)

    def equiv(self, a, b) -> bool:
        return self.rank(a) == self.rank(b)

    def __contains__(self, b) -> bool:
        return b in self._rank

    def __len__(self) -> int:
        return len(self.ranks)

    def sorted_classes(self) -> list[list[Boundary]]:
        return [sorted(c) for c in self.ranks]

    def __str__(self) -> str:
        return " < ".join("~".join(map(str, c)) for c in self.sorted_classes())


@dataclass(frozen=True)
class ExtendedWordEquation:
    """A word equation together with a boundary order.

    Construct through :func:`make_ewe` to get validation; the bare
    constructor trusts its arguments.
    """

    u1: tuple[Variable, ...]
    u2: tuple[Variable, ...]
    order: BoundaryOrder

    @property
    def equation(self) -> WordEquation:
        return WordEquation(self.u1, self.u2)

    @property
    def m(self) -> int:
        return len(self.u1)

    @property
    def n(self) -> int:
        return len(self.u2)

    def word(self, side: int) -> tuple[Variable, ...]:
        return self.u1 if side == 1 else self.u2

    def length(self, side: int) -> int:
        return len(self.u1) if side == 1 else len(self.u2)

    def var(self, b: Sequence[int]) -> Variable:
        return self.word(b[0])[b[1] - 1]

    @property
    def boundaries(self) -> tuple[Boundary, ...]:
        return tuple(Boundary(1, j) for j in range(1, self.m + 1)) + tuple(
            Boundary(2, j) for j in range(1, self.n + 1)
        )

    @property
    def variables(self) -> frozenset[Variable]:
        return frozenset(self.u1) | frozenset(self.u2)

    def lt(self, a, b) -> bool:
        return self.order.lt(a, b)

    def le(self, a, b) -> bool:
        return self.order.le(a, b)

    def equiv(self, a, b) -> bool:
        return self.order.equiv(a, b)

    def is_nontrivial(self) -> bool:
        return is_nontrivial(self)

    def canonical(self) -> "ExtendedWordEquation":
        return canonical(self)[0]

    def __str__(self) -> str:
        return f"{self.equation} | {self.order}"


class Violation(NamedTuple):
    code: str
    detail: str


class InvalidEquation(ValueError):
    """Raised by :func:`make_ewe` with every violated invariant."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(f"{v.code}: {v.detail}" for v in violations))

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


def _as_boundary(b) -> Boundary:
    side, index = b
    return Boundary(int(side), int(index))


def order_violations(u1: Sequence[Variable], u2: Sequence[Variable], ranks) -> list[Violation]:
    m, n = len(u1), len(u2)
    expected = {Boundary(1, j) for j in range(1, m + 1)} | {Boundary(2, j) for j in range(1, n + 1)}
    out: list[Violation] = []
    if (m == 0) != (n == 0):
        if ranks:
            out.append(Violation("EmptySideWithNonemptyRanks",
                                 "one side is empty, so the two top boundaries cannot be equivalent"))
        else:
            out.append(Violation("MissingBoundary", "ranks are empty but one side is not"))
        return out

    rank: dict[Boundary, int] = {}
    for r, cls in enumerate(ranks):
        cls = list(cls)
        if not cls:
            out.append(Violation("EmptyRank", f"rank class {r} is empty"))
        for raw in cls:
            b = _as_boundary(raw)
            if b not in expected:
                out.append(Violation("UnknownBoundary", f"{b} is not a boundary of the equation"))
                continue
            if b in rank:
                out.append(Violation("DuplicateBoundary", f"{b} appears more than once"))
                continue
            rank[b] = r
    for b in sorted(expected - rank.keys()):
        out.append(Violation("MissingBoundary", f"{b} is not ranked"))

    for side, length in ((1, m), (2, n)):
        for j in range(1, length):
            a, b = Boundary(side, j), Boundary(side, j + 1)
            if a in rank and b in rank and rank[a] >= rank[b]:
                out.append(Violation("SideOrderViolated", f"{a} must be strictly below {b}"))
    if m and n:
        t1, t2 = Boundary(1, m), Boundary(2, n)
        if t1 in rank and t2 in rank and rank[t1] != rank[t2]:
            out.append(Violation("TopBoundariesNotEquivalent", f"{t1} and {t2} must share a rank"))
    return out


def make_ewe(u1: Sequence[Variable], u2: Sequence[Variable], ranks) -> ExtendedWordEquation:
    """Validate and build an extended word equation.

    ``ranks`` is a sequence of classes, each an iterable of ``(side, index)``
    pairs, listed from lowest to highest.
    """
    u1, u2 = tuple(u1), tuple(u2)
    violations = order_violations(u1, u2, [list(c) for c in ranks])
    if violations:
        raise InvalidEquation(violations)
    return ExtendedWordEquation(u1, u2, BoundaryOrder.from_classes(ranks))


def trivial() -> ExtendedWordEquation:
    return ExtendedWordEquation((), (), BoundaryOrder(()))


def _swap_sides(cls) -> frozenset[Boundary]:
    return frozenset(Boundary(3 - b.side, b.index) for b in cls)


def dual(e: ExtendedWordEquation) -> ExtendedWordEquation:
    return ExtendedWordEquation(e.u2, e.u1, BoundaryOrder(tuple(_swap_sides(c) for c in e.order.ranks)))


def is_nontrivial(e) -> bool:
    return bool(e.u1) and bool(e.u2)


def is_staggered(e: ExtendedWordEquation) -> bool:
    top = {Boundary(1, e.m), Boundary(2, e.n)}
    for cls in e.order.ranks:
        if len({b.side for b in cls}) > 1 and not set(cls) <= top:
            return False
    return True


def canonical_name(k: int) -> str:
    return chr(ord("A") + k) if k < 26 else f"V{k}"


def canonical(e: ExtendedWordEquation) -> tuple[ExtendedWordEquation, dict[Variable, Variable]]:
    """Rename variables to first-occurrence order over ``u1`` then ``u2``."""
    mapping: dict[Variable, Variable] = {}
    for x in e.u1 + e.u2:
        if x not in mapping:
            mapping[x] = canonical_name(len(mapping))
    renamed = ExtendedWordEquation(
        tuple(mapping[x] for x in e.u1), tuple(mapping[x] for x in e.u2), e.order
    )
    return renamed, mapping


def order_from_keys(boundaries: Iterable[Boundary], key) -> BoundaryOrder:
    """Rank list induced by a numeric key (equal keys share a class)."""
    groups: dict = {}
    for b in boundaries:
        groups.setdefault(key(b), set()).add(b)
    return BoundaryOrder(tuple(frozenset(groups[k]) for k in sorted(groups)))
