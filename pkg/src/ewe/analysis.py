"""Termination verdicts: the measure certificate, bounded exploration of the
transformation graph, hereditary staggeredness and the cycle-preserving run.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .core import (Boundary, ExtendedWordEquation, canonical, dual, is_nontrivial, is_staggered,
                   order_from_keys)
from .cutgraph import cut_graph, is_cyclic, measure, pointed_min_cycle
from .feasibility import coherence_witness
from .syntax import format_ewe
from .transform import (IncoherentInput, NielsenCase, adjacent_partners, boundary_maps, nielsen_case,
                        raw_successors, swap)

DEFAULT_MAX_STATES = 10_000


# -- cached primitives -------------------------------------------------------

@lru_cache(maxsize=200_000)
def _coherent(e: ExtendedWordEquation) -> bool:
    return coherence_witness(e) is not None


@lru_cache(maxsize=100_000)
def _raw(e: ExtendedWordEquation) -> tuple:
    if not is_nontrivial(e):
        return ()
    return tuple(raw_successors(e))


def coherent_successor_indices(e: ExtendedWordEquation) -> list[tuple[int, ExtendedWordEquation]]:
    """``(index into raw_successors, successor)`` for every coherent successor."""
    return [(k, s) for k, s in enumerate(_raw(e)) if _coherent(s)]


def clear_caches():
    _coherent.cache_clear()
    _raw.cache_clear()


def _canon(e):
    return canonical(e)[0]


# -- certificates --------------------------------------------------------------

class Status(str, enum.Enum):
    TERMINATING = "Terminating"
    NONTERMINATING = "NonTerminating"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class MeasureCertificate:
    measure: int
    bound: int
    kind: str = "MeasureCertificate"

    def to_json(self):
        return {"kind": self.kind, "measure": self.measure, "bound": self.bound}


@dataclass(frozen=True)
class ExhaustedGraph:
    states: int
    longest_run: int
    kind: str = "ExhaustedGraph"

    def to_json(self):
        return {"kind": self.kind, "states": self.states, "longest_run": self.longest_run}


@dataclass(frozen=True)
class LassoWitness:
    """Successor choices from the root: ``stem`` reaches the cycle, ``loop`` closes it."""

    stem: tuple[int, ...]
    loop: tuple[int, ...]
    states: tuple[ExtendedWordEquation, ...]  # canonical, stem then loop, first loop state repeated
    kind: str = "LassoWitness"

    def to_json(self):
        return {"kind": self.kind, "stem": list(self.stem), "loop": list(self.loop),
                "states": [format_ewe(s) for s in self.states]}


@dataclass(frozen=True)
class StepReport:
    rule: str
    staggered: bool
    coherent: bool
    cyclic: bool

    @property
    def ok(self) -> bool:
        return self.staggered and self.coherent and self.cyclic

    def to_json(self):
        return {"rule": self.rule, "staggered": self.staggered, "coherent": self.coherent,
                "cyclic": self.cyclic}


@dataclass(frozen=True)
class CyclicRunPrefix:
    steps: tuple[tuple[ExtendedWordEquation, StepReport], ...]
    closed_region: bool  # True when hereditary staggeredness was proved on a finite region
    kind: str = "CyclicRunPrefix"

    def to_json(self):
        return {"kind": self.kind, "closed_region": self.closed_region,
                "steps": [{"ewe": format_ewe(s), **r.to_json()} for s, r in self.steps]}


@dataclass(frozen=True)
class BudgetReport:
    reason: str
    kind: str = "BudgetReport"

    def to_json(self):
        return {"kind": self.kind, "reason": self.reason}


Certificate = Union[MeasureCertificate, ExhaustedGraph, LassoWitness, CyclicRunPrefix, BudgetReport]


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Certificate

    def __post_init__(self):
        allowed = {
            Status.TERMINATING: (MeasureCertificate, ExhaustedGraph),
            Status.NONTERMINATING: (LassoWitness, CyclicRunPrefix),
            Status.UNKNOWN: (BudgetReport,),
        }[self.status]
        if not isinstance(self.certificate, allowed):
            raise TypeError(f"{self.status.value} cannot carry {type(self.certificate).__name__}")

    def to_json(self):
        return {"status": self.status.value, "certificate": self.certificate.to_json()}


@dataclass(frozen=True)
class Budget:
    max_states: int = DEFAULT_MAX_STATES
    max_side_length: Optional[int] = None  # None: 4x the input total length

    def side_limit(self, e: ExtendedWordEquation) -> int:
        if self.max_side_length is not None:
            return self.max_side_length
        return max(4 * (e.m + e.n), 1)


# -- exploration -----------------------------------------------------------------

class Outcome(str, enum.Enum):
    COMPLETE = "Complete"
    CYCLE_FOUND = "CycleFound"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass
class ExplorationGraph:
    root: ExtendedWordEquation
    states: list = field(default_factory=list)  # canonical EWEs, index = state id
    index: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)  # (src id, successor index, dst id)

    def add(self, e) -> tuple[int, bool]:
        if e in self.index:
            return self.index[e], False
        self.index[e] = len(self.states)
        self.states.append(e)
        return self.index[e], True

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj = {k: [] for k in range(len(self.states))}
        for a, lab, b in self.edges:
            adj[a].append((lab, b))
        return adj

    def longest_path(self) -> int:
        """Longest path length in edges; only meaningful when acyclic."""
        adj = self.adjacency()
        memo: dict[int, int] = {}
        order = _postorder(adj, 0) if self.states else []
        for v in order:
            memo[v] = max((1 + memo[b] for _, b in adj[v]), default=0)
        return memo.get(0, 0)

    def to_json(self):
        return {"root": format_ewe(self.root),
                "states": [format_ewe(s) for s in self.states],
                "edges": [list(t) for t in self.edges]}

    def to_dot(self, name: str = "exploration") -> str:
        lines = [f"digraph {name} {{"]
        for k, s in enumerate(self.states):
            label = str(s).replace('"', '\\"')
            lines.append(f'  s{k} [label="{label}"];')
        for a, lab, b in sorted(self.edges):
            lines.append(f'  s{a} -> s{b} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _postorder(adj, root):
    out, seen = [], {root}
    stack = [(root, iter(adj[root]))]
    while stack:
        v, it = stack[-1]
        for _, b in it:
            if b not in seen:
                seen.add(b)
                stack.append((b, iter(adj[b])))
                break
        else:
            stack.pop()
            out.append(v)
    return out


@dataclass
class Exploration:
    graph: ExplorationGraph
    outcome: Outcome
    lasso: Optional[LassoWitness] = None
    reason: str = ""


def _require_coherent(e):
    if not _coherent(e):
        raise IncoherentInput("input is not coherent")


def explore(e: ExtendedWordEquation, budget: Optional[Budget] = None) -> Exploration:
    """Depth-first expansion of the coherent-successor graph from ``e``."""
    budget = budget or Budget()
    _require_coherent(e)
    limit = budget.side_limit(e)
    g = ExplorationGraph(e)
    root = _canon(e)
    g.add(root)
    if max(e.m, e.n) > limit:
        return Exploration(g, Outcome.BUDGET_EXCEEDED, reason=f"input side length exceeds {limit}")

    on_stack = {0}
    done = set()
    # frame: (state id, pending successor list, label of edge into this state)
    stack = [(0, iter(coherent_successor_indices(root)), None)]
    while stack:
        v, it, _ = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            on_stack.discard(v)
            done.add(v)
            continue
        lab, succ = step
        succ = _canon(succ)
        w, fresh = g.add(succ)
        g.edges.append((v, lab, w))
        if w in on_stack:
            labels = [fr[2] for fr in stack[1:]] + [lab]
            ids = [fr[0] for fr in stack]
            cut = ids.index(w)
            path_states = [g.states[k] for k in ids] + [succ]
            lasso = LassoWitness(tuple(labels[:cut]), tuple(labels[cut:]), tuple(path_states))
            return Exploration(g, Outcome.CYCLE_FOUND, lasso=lasso)
        if not fresh:
            continue
        if len(g.states) > budget.max_states:
            return Exploration(g, Outcome.BUDGET_EXCEEDED,
                               reason=f"more than {budget.max_states} states")
        if max(succ.m, succ.n) > limit:
            return Exploration(g, Outcome.BUDGET_EXCEEDED, reason=f"side length exceeds {limit}")
        on_stack.add(w)
        stack.append((w, iter(coherent_successor_indices(succ)), lab))
    return Exploration(g, Outcome.COMPLETE)


def replay_lasso(root: ExtendedWordEquation, lasso: LassoWitness) -> list[ExtendedWordEquation]:
    """Re-apply the recorded successor choices, canonicalising after every step."""
    cur = _canon(root)
    out = [cur]
    for lab in lasso.stem + lasso.loop:
        cur = _canon(_raw(cur)[lab])
        out.append(cur)
    return out


# -- hereditary staggeredness ------------------------------------------------------

class Heredity(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


def _staggered_successors(e):
    return [_canon(s) for _, s in coherent_successor_indices(e) if is_staggered(s)]


def staggered_region(e: ExtendedWordEquation, budget: Optional[Budget] = None):
    """States reachable through staggered coherent successors, or None past budget."""
    budget = budget or Budget()
    limit = budget.side_limit(e)
    root = _canon(e)
    region = {root: _staggered_successors(root)}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for s in region[v]:
            if s in region:
                continue
            if len(region) >= budget.max_states or max(s.m, s.n) > limit:
                return None
            region[s] = _staggered_successors(s)
            queue.append(s)
    return region


def hereditarily_staggered(e: ExtendedWordEquation, budget: Optional[Budget] = None) -> Heredity:
    if not is_staggered(e) or not _coherent(e):
        return Heredity.NO
    region = staggered_region(e, budget)
    if region is None:
        return Heredity.UNKNOWN
    alive = set(region)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            succ = region[v]
            if (is_nontrivial(v) and not succ) or any(s not in alive for s in succ):
                alive.discard(v)
                changed = True
    return Heredity.YES if _canon(e) in alive else Heredity.NO


# -- the cycle-preserving run -----------------------------------------------------

class PreconditionFailed(ValueError):
    code = "PreconditionFailed"


class ConstructionFailed(RuntimeError):
    code = "ConstructionFailed"

    def __init__(self, step: int, reason: str):
        self.step, self.reason = step, reason
        super().__init__(f"step {step}: {reason}")


def _orient_minimum_cycle(e, v, w):
    """Reverse a segment so the witness sitting at ``v2`` is not below ``w2``.

    ``v`` and ``w`` are the cycle vertices and their cut witnesses (0-based).
    """
    n = len(v)
    hits = [k for k in range(n) if w[k] == v[1]]
    if not hits:
        return v, w
    k = hits[0]
    if not e.lt(v[k], w[1]):
        return v, w
    # cuts and mirrors are symmetric, so the segment v2 .. v_k can be walked backwards
    nv = [v[0], v[1]] + [w[t] for t in range(k - 1, 1, -1)] + v[k + 1:]
    nw = [w[0], v[k]] + [v[t] for t in range(k - 1, 1, -1)] + w[k + 1:]
    return nv, nw


def _keys_from_transport(e, maps):
    where = {}
    for b in maps.bp_minus:
        where[b] = Fraction(e.order.rank(maps.nu_b(b)))
    return where


def _rank_of(keys, b):
    return Fraction(-1) if b.index == 0 else keys[b]


def _candidate(e, maps, pointed):
    """The successor order the construction prescribes, as a rank list."""
    keys = _keys_from_transport(e, maps)
    cycle, aux = pointed
    v, w = cycle[:-1], aux[1::2]
    special = None
    rule = "not-minimum"
    if v[0] == Boundary(2, 1):
        v, w = _orient_minimum_cycle(e, v, w)
        p = Boundary(v[1].side, maps.mu[v[1]] - 1)
        if Boundary(2, 1) in w or v[1] not in w:
            rule = "minimum-case-2" if Boundary(2, 1) in w else "minimum-case-1"
            special = (p, _rank_of(keys, Boundary(p.side, p.index + 1)) - Fraction(1, 3))
        else:
            rule = "minimum-case-3"
            q = Boundary(w[1].side, maps.mu[w[1]] - 1)
            r = Boundary(w[1].side, maps.mu[w[1]])
            lo = max(_rank_of(keys, q), _rank_of(keys, p.prev))
            hi = min(_rank_of(keys, r), _rank_of(keys, p.next))
            if not lo < hi:
                return None, rule
            special = (p, lo + (hi - lo) / 2)
    for b in sorted(maps.bp_plus):
        if special and b == special[0]:
            keys[b] = special[1]
        else:
            keys[b] = _rank_of(keys, b.prev) + Fraction(1, 3)
    succ = ExtendedWordEquation(maps.u1, maps.u2, order_from_keys(keys, keys.__getitem__))
    return succ, rule


def _fallback(start: ExtendedWordEquation, plus, max_nodes: int = 5000):
    """Walk swaps from an incoherent staggered order to a coherent one with a cyclic cut graph."""
    seen = {start}
    queue = deque([start])
    while queue and len(seen) < max_nodes:
        cur = queue.popleft()
        for b in sorted(plus):
            for c in adjacent_partners(cur, b):
                nxt = swap(cur, b, c)
                if nxt in seen or not is_staggered(nxt):
                    continue
                seen.add(nxt)
                if _coherent(nxt):
                    if is_cyclic(cut_graph(nxt)):
                        return nxt
                    continue
                queue.append(nxt)
    return None


def run_step(e: ExtendedWordEquation) -> tuple[ExtendedWordEquation, StepReport]:
    """One cycle-preserving coherent step from a staggered coherent cyclic ``e``."""
    case = nielsen_case(e)
    if case is NielsenCase.III:
        nxt, rep = run_step(dual(e))
        return dual(nxt), rep
    if case is NielsenCase.I:
        raise ConstructionFailed(0, "case I step on a staggered equation with a cyclic cut graph")
    pointed = pointed_min_cycle(e)
    if pointed is None:
        raise ConstructionFailed(0, "cut graph is acyclic")
    maps = boundary_maps(e)
    cand, rule = _candidate(e, maps, pointed)
    if cand is None:
        raise ConstructionFailed(0, f"{rule}: no room for the special boundary")
    if not is_staggered(cand):
        raise ConstructionFailed(0, f"{rule}: prescribed successor is not staggered")
    if not _coherent(cand):
        alt = _fallback(cand, maps.bp_plus)
        if alt is None:
            raise ConstructionFailed(0, f"{rule}: prescribed successor incoherent and no swap "
                                        "neighbour is coherent with a cyclic cut graph")
        cand, rule = alt, rule + "+fallback"
    report = StepReport(rule, is_staggered(cand), _coherent(cand), is_cyclic(cut_graph(cand)))
    return cand, report


def nonterminating_run(e: ExtendedWordEquation, steps: int) -> list[tuple[ExtendedWordEquation, StepReport]]:
    if steps <= 0:
        return []
    if not is_staggered(e):
        raise PreconditionFailed("input is not staggered")
    if not _coherent(e):
        raise PreconditionFailed("input is not coherent")
    if not is_cyclic(cut_graph(e)):
        raise PreconditionFailed("cut graph is acyclic")
    out = []
    cur = e
    for k in range(1, steps + 1):
        try:
            nxt, rep = run_step(cur)
        except ConstructionFailed as exc:
            raise ConstructionFailed(k, exc.reason) from None
        if not rep.ok:
            failed = [n for n in ("staggered", "coherent", "cyclic") if not getattr(rep, n)]
            raise ConstructionFailed(k, f"{rep.rule}: check failed: {', '.join(failed)}")
        out.append((nxt, rep))
        cur = nxt
    return out


# -- top level ------------------------------------------------------------------------

def analyze(e: ExtendedWordEquation, budget: Optional[Budget] = None, run_steps: int = 50) -> Verdict:
    budget = budget or Budget()
    _require_coherent(e)
    g = cut_graph(e)
    if not is_cyclic(g):
        return Verdict(Status.TERMINATING, MeasureCertificate(measure(e, g), 2 ** (e.m + e.n)))
    ex = explore(e, budget)
    if ex.outcome is Outcome.CYCLE_FOUND:
        return Verdict(Status.NONTERMINATING, ex.lasso)
    if ex.outcome is Outcome.COMPLETE:
        return Verdict(Status.TERMINATING, ExhaustedGraph(len(ex.graph.states), ex.graph.longest_path()))
    if hereditarily_staggered(e, budget) is Heredity.YES:
        try:
            run = nonterminating_run(e, run_steps)
        except ConstructionFailed as exc:
            return Verdict(Status.UNKNOWN, BudgetReport(f"{ex.reason}; run construction failed: {exc}"))
        return Verdict(Status.NONTERMINATING, CyclicRunPrefix(tuple(run), True))
    return Verdict(Status.UNKNOWN, BudgetReport(ex.reason))
