"""Exact positivity-feasibility of homogeneous inequality systems over N[X].

Systems have the form ``{a_i <= b_i} ∪ {c_i < d_i}`` where every side is a
term of the free commutative monoid over the variables.  A solution is an
assignment of positive integers to variables.  Strictness is handled with a
single shared slack ``eps`` (``c + eps <= d``, ``eps <= L(x)``), maximised by
an exact rational simplex: the system is feasible iff the optimum is positive.

Covers, tight covers and incoherent cores give the certificate side of the
alternative: a weighted sum of the inequalities whose right-hand sides are
included in the left-hand sides.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .core import Boundary, ExtendedWordEquation, Variable

LengthAssignment = dict


class BoundExhausted(Exception):
    """No certificate with multipliers inside the bound; raise the bound."""


@dataclass(frozen=True)
class MonoidTerm:
    """Element of N[X]: sorted ``(variable, coefficient)`` pairs, no zeros."""

    coefficients: tuple[tuple[Variable, int], ...] = ()

    @classmethod
    def of(cls, variables: Iterable[Variable]) -> "MonoidTerm":
        return cls.from_counts(Counter(variables))

    @classmethod
    def from_counts(cls, counts: Mapping[Variable, int]) -> "MonoidTerm":
        return cls(tuple(sorted((x, c) for x, c in counts.items() if c)))

    def counts(self) -> Counter:
        return Counter(dict(self.coefficients))

    def __add__(self, other: "MonoidTerm") -> "MonoidTerm":
        return MonoidTerm.from_counts(self.counts() + other.counts())

    def scale(self, k: int) -> "MonoidTerm":
        return MonoidTerm(tuple((x, c * k) for x, c in self.coefficients if k))

    def included_in(self, other: "MonoidTerm") -> bool:
        """``self ⊆ other``: some c with other = self + c."""
        theirs = dict(other.coefficients)
        return all(theirs.get(x, 0) >= c for x, c in self.coefficients)

    def evaluate(self, lengths: Mapping[Variable, int]) -> int:
        return sum(c * lengths[x] for x, c in self.coefficients)

    @property
    def variables(self) -> frozenset[Variable]:
        return frozenset(x for x, _ in self.coefficients)

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(x if c == 1 else f"{c}{x}" for x, c in self.coefficients)


@dataclass(frozen=True)
class InequalitySystem:
    weak: tuple[tuple[MonoidTerm, MonoidTerm], ...] = ()
    strict: tuple[tuple[MonoidTerm, MonoidTerm], ...] = ()

    @property
    def variables(self) -> frozenset[Variable]:
        out: frozenset = frozenset()
        for a, b in self.weak + self.strict:
            out |= a.variables | b.variables
        return out

    def rows(self) -> list[tuple[MonoidTerm, MonoidTerm, bool]]:
        return [(a, b, False) for a, b in self.weak] + [(c, d, True) for c, d in self.strict]

    def satisfied_by(self, lengths: Mapping[Variable, int]) -> bool:
        if any(v < 1 for v in lengths.values()):
            return False
        return all(a.evaluate(lengths) <= b.evaluate(lengths) for a, b in self.weak) and all(
            c.evaluate(lengths) < d.evaluate(lengths) for c, d in self.strict
        )


# -- exact simplex -----------------------------------------------------------

def simplex_max(A: Sequence[Sequence], b: Sequence, c: Sequence) -> tuple[Fraction, list[Fraction]]:
    """Maximise ``c.x`` subject to ``A x <= b``, ``x >= 0`` with ``b >= 0``.

    Exact arithmetic, slack basis start, Bland's rule.  Raises ValueError on an
    unbounded objective.
    """
    m, n = len(A), len(c)
    width = n + m
    T = []
    for i in range(m):
        if b[i] < 0:
            raise ValueError("simplex_max needs a nonnegative right-hand side")
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        T.append(row)
    z = [Fraction(-v) for v in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]

    while True:
        enter = next((j for j in range(width) if z[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise ValueError("unbounded objective")
        prow = T[leave]
        piv = prow[enter]
        if piv != 1:
            prow = [v / piv for v in prow]
            T[leave] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f:
                    row = T[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        f = z[enter]
        for j in nz:
            z[j] -= f * prow[j]
        basis[leave] = enter

    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = T[i][-1]
    return z[-1], x


def _integerise(values: Sequence[Fraction]) -> list[int]:
    denom = 1
    for v in values:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    ints = [int(v * denom) for v in values]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints


def solve_positive(system: InequalitySystem, universe: Iterable[Variable] = ()) -> Optional[LengthAssignment]:
    """Positive-integer solution of ``system`` or None when infeasible."""
    universe = set(universe)
    missing = system.variables - universe
    if universe and missing:
        raise ValueError(f"variables outside the universe: {sorted(missing)}")
    names = sorted(universe | system.variables)
    if not names:
        # only constant rows left; 0 < 0 is the one way to fail
        return None if system.strict else {}
    col = {x: k for k, x in enumerate(names)}
    eps = len(names)
    A, b = [], []

    def diff_row(lhs: MonoidTerm, rhs: MonoidTerm) -> list[int]:
        row = [0] * (len(names) + 1)
        for x, k in lhs.coefficients:
            row[col[x]] += k
        for x, k in rhs.coefficients:
            row[col[x]] -= k
        return row

    for lhs, rhs in system.weak:
        row = diff_row(lhs, rhs)
        if any(row):
            A.append(row)
            b.append(0)
    for lhs, rhs in system.strict:
        row = diff_row(lhs, rhs)
        row[eps] = 1
        A.append(row)
        b.append(0)
    for x in names:
        row = [0] * (len(names) + 1)
        row[col[x]] = -1
        row[eps] = 1
        A.append(row)
        b.append(0)
    cap = [0] * (len(names) + 1)
    cap[eps] = 1
    A.append(cap)
    b.append(1)
    objective = [0] * len(names) + [1]

    best, x = simplex_max(A, b, objective)
    if best <= 0:
        return None
    lengths = dict(zip(names, _integerise(x[:eps])))
    assert system.satisfied_by(lengths), "simplex returned a non-solution"
    return lengths


# -- coherence ---------------------------------------------------------------

def prefix_term(e: ExtendedWordEquation, b: Sequence[int]) -> MonoidTerm:
    return MonoidTerm.of(e.word(b[0])[: b[1]])


def coherence_system(e: ExtendedWordEquation) -> InequalitySystem:
    """Consecutive-rank constraints: equal prefix sums inside a class, strict
    increase between representatives of adjacent classes."""
    weak, strict = [], []
    reps = []
    for cls in e.order.ranks:
        members = sorted(cls)
        first = prefix_term(e, members[0])
        for other in members[1:]:
            t = prefix_term(e, other)
            weak.append((first, t))
            weak.append((t, first))
        reps.append(first)
    for lo, hi in zip(reps, reps[1:]):
        strict.append((lo, hi))
    return InequalitySystem(tuple(weak), tuple(strict))


def prefix_lengths(e: ExtendedWordEquation, lengths: Mapping[Variable, int]) -> dict[Boundary, int]:
    out = {}
    for side in (1, 2):
        total = 0
        for j, x in enumerate(e.word(side), start=1):
            total += lengths[x]
            out[Boundary(side, j)] = total
    return out


def is_witness(e: ExtendedWordEquation, lengths: Mapping[Variable, int]) -> bool:
    """Full biconditional over all boundary pairs, virtual boundaries included."""
    if any(lengths.get(x, 0) < 1 for x in e.variables):
        return False
    pos = prefix_lengths(e, lengths)
    pts = list(e.boundaries) + [Boundary(1, 0), Boundary(2, 0)]
    pos[Boundary(1, 0)] = pos[Boundary(2, 0)] = 0
    for a in pts:
        for b in pts:
            if e.lt(a, b) != (pos[a] < pos[b]):
                return False
    return True


def coherence_witness(e: ExtendedWordEquation) -> Optional[LengthAssignment]:
    lengths = solve_positive(coherence_system(e), e.variables)
    if lengths is None:
        return None
    if not is_witness(e, lengths):
        raise AssertionError(f"coherence witness {lengths} fails the pairwise check on {e}")
    return lengths


def is_coherent(e: ExtendedWordEquation) -> bool:
    return coherence_witness(e) is not None


# -- covers and incoherent cores ---------------------------------------------

class Cover(NamedTuple):
    """``(<a_side,[a_lo,a_hi]>, <b_side,[b_lo,b_hi]>)``; the B interval dominates."""

    a_side: int
    a_lo: int
    a_hi: int
    b_side: int
    b_lo: int
    b_hi: int
    strict: bool

    @property
    def a(self) -> tuple[Boundary, ...]:
        return tuple(Boundary(self.a_side, j) for j in range(self.a_lo, self.a_hi + 1))

    @property
    def b(self) -> tuple[Boundary, ...]:
        return tuple(Boundary(self.b_side, j) for j in range(self.b_lo, self.b_hi + 1))

    def a_term(self, e: ExtendedWordEquation) -> MonoidTerm:
        return MonoidTerm.of(e.word(self.a_side)[self.a_lo - 1: self.a_hi])

    def b_term(self, e: ExtendedWordEquation) -> MonoidTerm:
        return MonoidTerm.of(e.word(self.b_side)[self.b_lo - 1: self.b_hi])

    def __str__(self) -> str:
        tag = " strict" if self.strict else ""
        return (f"(<{self.a_side},[{self.a_lo},{self.a_hi}]>, "
                f"<{self.b_side},[{self.b_lo},{self.b_hi}]>){tag}")


def cover_strictness(e: ExtendedWordEquation, a_side: int, a_lo: int, a_hi: int,
                     b_side: int, b_lo: int, b_hi: int) -> Optional[bool]:
    """None if not a cover, else whether it is strict."""
    if a_side == b_side:
        return None
    if not (a_hi >= a_lo - 1 and b_hi >= b_lo - 1):
        return None
    if not (1 <= a_lo and a_hi <= e.length(a_side) and 1 <= b_lo and b_hi <= e.length(b_side)):
        return None
    start_b, start_a = Boundary(b_side, b_lo - 1), Boundary(a_side, a_lo - 1)
    end_a, end_b = Boundary(a_side, a_hi), Boundary(b_side, b_hi)
    if not (e.le(start_b, start_a) and e.le(end_a, end_b)):
        return None
    return e.lt(start_b, start_a) or e.lt(end_a, end_b)


def is_tight(e: ExtendedWordEquation, c: Cover) -> bool:
    args = (c.a_side, c.a_lo, c.a_hi, c.b_side)
    return (cover_strictness(e, *args, c.b_lo + 1, c.b_hi) is None
            and cover_strictness(e, *args, c.b_lo, c.b_hi - 1) is None)


def enumerate_covers(e: ExtendedWordEquation) -> list[Cover]:
    """Every cover with a nonempty A interval (empty-A covers weigh nothing)."""
    out = []
    for a_side in (1, 2):
        b_side = 3 - a_side
        la, lb = e.length(a_side), e.length(b_side)
        for a_lo in range(1, la + 1):
            for a_hi in range(a_lo, la + 1):
                for b_lo in range(1, lb + 2):
                    for b_hi in range(b_lo - 1, lb + 1):
                        s = cover_strictness(e, a_side, a_lo, a_hi, b_side, b_lo, b_hi)
                        if s is not None:
                            out.append(Cover(a_side, a_lo, a_hi, b_side, b_lo, b_hi, s))
    return out


def enumerate_tight_covers(e: ExtendedWordEquation) -> list[Cover]:
    return [c for c in enumerate_covers(e) if is_tight(e, c)]


def _certifies(rows, y) -> bool:
    lhs, rhs = Counter(), Counter()
    strict_used = False
    for (a, b, strict), k in zip(rows, y):
        if k:
            for x, c in a.coefficients:
                lhs[x] += k * c
            for x, c in b.coefficients:
                rhs[x] += k * c
            strict_used = strict_used or strict
    if any(rhs[x] > lhs[x] for x in rhs):
        return False
    return strict_used or lhs != rhs


def certificate_lp(rows: Sequence[tuple[MonoidTerm, MonoidTerm, bool]]) -> Optional[list[int]]:
    """Exact LP search for multipliers certifying infeasibility."""
    if not rows:
        return None
    names = sorted(set().union(*(a.variables | b.variables for a, b, _ in rows)))
    r = len(rows)
    A, b = [], []
    gain = [0] * r
    for x in names:
        row = [b_.counts()[x] - a_.counts()[x] for a_, b_, _ in rows]
        A.append(row)
        b.append(0)
        for k in range(r):
            gain[k] -= row[k]
    for k, (_, _, strict) in enumerate(rows):
        if strict:
            gain[k] += 1
    A.append([1] * r)
    b.append(1)
    best, y = simplex_max(A, b, gain)
    if best <= 0:
        return None
    return _integerise(y)


def find_certificate(rows: Sequence[tuple[MonoidTerm, MonoidTerm, bool]], bound: int,
                     max_checks: int = 200_000) -> Optional[list[int]]:
    """Multipliers ``y <= bound`` with ``sum y*rhs ⊆ sum y*lhs`` and strictness.

    Each row ``(lhs, rhs, strict)`` stands for ``lhs <= rhs`` (``<`` if strict).
    Brute force over supports of increasing size, then an exact LP vertex as a
    last resort.  Returns None only when no certificate exists at any bound;
    raises BoundExhausted when one exists but none was found within ``bound``.
    """
    rows = list(rows)
    r = len(rows)
    checks = 0
    for size in range(1, r + 1):
        for support in itertools.combinations(range(r), size):
            for ys in itertools.product(range(1, bound + 1), repeat=size):
                checks += 1
                if checks > max_checks:
                    break
                y = [0] * r
                for k, v in zip(support, ys):
                    y[k] = v
                if _certifies(rows, y):
                    return y
            if checks > max_checks:
                break
        if checks > max_checks:
            break
    y = certificate_lp(rows)
    if y is None:
        return None
    assert _certifies(rows, y), "LP certificate fails the inclusion check"
    if max(y) <= bound:
        return y
    raise BoundExhausted(f"certificate needs multiplier {max(y)} > {bound}")


def cover_rows(e: ExtendedWordEquation, covers: Sequence[Cover]):
    return [(c.a_term(e), c.b_term(e), c.strict) for c in covers]


def find_incoherent_core(e: ExtendedWordEquation, coefficient_bound: int = 3
                         ) -> Optional[tuple[list[Cover], list[int]]]:
    """Tight covers plus positive multipliers certifying incoherence.

    None for coherent inputs.  BoundExhausted if incoherent but no certificate
    with multipliers ``<= coefficient_bound`` turned up.
    """
    if coherence_witness(e) is not None:
        return None
    covers = enumerate_tight_covers(e)
    y = find_certificate(cover_rows(e, covers), coefficient_bound)
    if y is None:
        raise BoundExhausted("incoherent but tight covers admit no certificate")
    chosen = [(c, k) for c, k in zip(covers, y) if k]
    return [c for c, _ in chosen], [k for _, k in chosen]


def core_is_valid(e: ExtendedWordEquation, covers: Sequence[Cover], multipliers: Sequence[int]) -> bool:
    """Re-check a core: every member is a cover and the inclusion holds."""
    for c in covers:
        if cover_strictness(e, c.a_side, c.a_lo, c.a_hi, c.b_side, c.b_lo, c.b_hi) != c.strict:
            return False
    return _certifies(cover_rows(e, covers), multipliers)
