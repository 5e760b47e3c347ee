"""Cuts, mirrors, the cut graph and the fecundity measure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import Boundary, ExtendedWordEquation


class CyclicCutGraph(ValueError):
    code = "CyclicCutGraph"


def cuts(e: ExtendedWordEquation, a, b) -> bool:
    a, b = Boundary(*a), Boundary(*b)
    return a != b and e.lt(a.prev, b) and e.lt(b.prev, a)


def mirrors(e: ExtendedWordEquation, a, b) -> bool:
    a, b = Boundary(*a), Boundary(*b)
    if e.var(a) != e.var(b):
        return False
    return not e.equiv(a, b) or not e.equiv(a.prev, b.prev)


@dataclass(frozen=True)
class CutGraph:
    vertices: tuple[Boundary, ...]
    edges: frozenset
    witnesses: dict  # edge -> sorted boundaries b with a cuts b, b mirrors c

    def successors(self, v) -> list[Boundary]:
        return sorted(c for a, c in self.edges if a == v)

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for a, c in sorted(self.edges):
            adj[a].append(c)
        return adj

    def sorted_edges(self) -> list[tuple[Boundary, Boundary]]:
        return sorted(self.edges)

    def swap_sides(self) -> "CutGraph":
        flip = lambda b: Boundary(3 - b.side, b.index)  # noqa: E731
        return CutGraph(
            tuple(sorted(flip(v) for v in self.vertices)),
            frozenset((flip(a), flip(c)) for a, c in self.edges),
            {(flip(a), flip(c)): sorted(flip(w) for w in ws) for (a, c), ws in self.witnesses.items()},
        )


def cut_graph(e: ExtendedWordEquation) -> CutGraph:
    B = e.boundaries
    cut = {a: [b for b in B if cuts(e, a, b)] for a in B}
    mir = {b: [c for c in B if mirrors(e, b, c)] for b in B}
    witnesses: dict = {}
    for a in B:
        for b in cut[a]:
            for c in mir[b]:
                witnesses.setdefault((a, c), []).append(b)
    return CutGraph(tuple(sorted(B)), frozenset(witnesses), {k: sorted(v) for k, v in witnesses.items()})


def topological_order(g: CutGraph) -> Optional[list[Boundary]]:
    """Vertices with every edge pointing forward, or None if cyclic."""
    adj = g.adjacency()
    indeg = {v: 0 for v in g.vertices}
    for _, c in g.edges:
        indeg[c] += 1
    ready = sorted(v for v, d in indeg.items() if d == 0)
    out = []
    while ready:
        v = ready.pop(0)
        out.append(v)
        for c in adj[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
        ready.sort()
    return out if len(out) == len(g.vertices) else None


def is_cyclic(g: CutGraph) -> bool:
    return topological_order(g) is None


def fecundity(e: ExtendedWordEquation, g: Optional[CutGraph] = None) -> dict[Boundary, int]:
    g = g or cut_graph(e)
    topo = topological_order(g)
    if topo is None:
        raise CyclicCutGraph("fecundity needs an acyclic cut graph")
    B = e.boundaries
    f: dict[Boundary, int] = {}
    for a in reversed(topo):
        targets = [b for b in B if cuts(e, a, b)]
        if not targets:
            raise AssertionError(f"{a} cuts nothing; the order violates the interleaving axioms")
        f[a] = 1 + max(sum(f[c] for c in B if mirrors(e, b, c)) for b in targets)
    return f


def measure(e: ExtendedWordEquation, g: Optional[CutGraph] = None) -> int:
    return sum(fecundity(e, g).values())


def walk_counts(g: CutGraph) -> dict[Boundary, int]:
    """Number of walks starting at each vertex (acyclic graphs only)."""
    topo = topological_order(g)
    if topo is None:
        raise CyclicCutGraph("infinitely many walks in a cyclic graph")
    adj = g.adjacency()
    out: dict[Boundary, int] = {}
    for v in reversed(topo):
        out[v] = 1 + sum(out[c] for c in adj[v])
    return out


def min_cycle_length(g: CutGraph) -> Optional[int]:
    adj = g.adjacency()
    best = None
    for s in g.vertices:
        dist = {s: 0}
        frontier = [s]
        found = None
        while frontier and found is None:
            nxt = []
            for v in frontier:
                for c in adj[v]:
                    if c == s:
                        found = dist[v] + 1
                        break
                    if c not in dist:
                        dist[c] = dist[v] + 1
                        nxt.append(c)
                if found is not None:
                    break
            frontier = nxt
        if found is not None and (best is None or found < best):
            best = found
    return best


def closed_walks(g: CutGraph, length: int):
    """Closed walks ``(v1, ..., v_length, v1)`` in lexicographic order."""
    adj = g.adjacency()

    def extend(path):
        if len(path) == length:
            if path[0] in adj[path[-1]]:
                yield path + [path[0]]
            return
        for c in adj[path[-1]]:
            yield from extend(path + [c])

    for s in g.vertices:
        yield from extend([s])


def pointed_min_cycle(e: ExtendedWordEquation, g: Optional[CutGraph] = None
                      ) -> Optional[tuple[list[Boundary], list[Boundary]]]:
    """A minimum-length cycle whose first vertex is minimal in its auxiliary set.

    Returns ``(cycle, auxiliary)`` with ``cycle = [v1, ..., v_k, v1]`` and
    ``auxiliary = [v1, w1, ..., v_k, w_k]`` where ``v_i`` cuts ``w_i`` and
    ``w_i`` mirrors ``v_{i+1}``.  None when the cut graph is acyclic.
    """
    g = g or cut_graph(e)
    k = min_cycle_length(g)
    if k is None:
        return None
    for walk in closed_walks(g, k):
        head = walk[0]
        if any(e.lt(v, head) for v in walk):
            continue
        aux = []
        for v, nxt in zip(walk, walk[1:]):
            ok = [w for w in g.witnesses[(v, nxt)] if not e.lt(w, head)]
            if not ok:
                break
            aux += [v, ok[0]]
        else:
            return walk, aux
    raise AssertionError("no pointed minimum-length cycle; contradicts the rotation argument")


def check_auxiliary(e: ExtendedWordEquation, cycle, aux) -> bool:
    """``aux = [v1, w1, ...]`` witnesses every edge of ``cycle``."""
    vs = cycle[:-1]
    if cycle[0] != cycle[-1] or len(aux) != 2 * len(vs):
        return False
    for k, v in enumerate(vs):
        w, nxt = aux[2 * k + 1], cycle[k + 1]
        if aux[2 * k] != v or not cuts(e, v, w) or not mirrors(e, w, nxt):
            return False
    return True


def is_pointed(e: ExtendedWordEquation, cycle, aux) -> bool:
    return check_auxiliary(e, cycle, aux) and not any(e.lt(x, cycle[0]) for x in aux)


def cut_graph_dot(g: CutGraph, name: str = "cutgraph") -> str:
    lines = [f"digraph {name} {{"]
    for v in sorted(g.vertices):
        lines.append(f'  "{v}";')
    for a, c in g.sorted_edges():
        lines.append(f'  "{a}" -> "{c}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def count_walks_brute(g: CutGraph) -> int:
    """Total walks by explicit enumeration; only sensible for tiny DAGs."""
    adj = g.adjacency()
    total = 0
    stack = [[v] for v in g.vertices]
    while stack:
        path = stack.pop()
        total += 1
        stack.extend(path + [c] for c in adj[path[-1]])
    return total


__all__ = [
    "CutGraph", "CyclicCutGraph", "cuts", "mirrors", "cut_graph", "is_cyclic", "fecundity",
    "measure", "walk_counts", "pointed_min_cycle", "cut_graph_dot", "topological_order",
    "min_cycle_length", "check_auxiliary", "is_pointed", "closed_walks", "count_walks_brute",
]
