"""Undirected multigraph substrate, exact conductance at desk scale, and
expander-family generators.

Edges carry stable integer ids (their position in the edge list); parallel
edges are allowed, self-loops are not.  Conductance is computed exactly as a
rational by enumerating all cuts with a Gray-code walk, so it is only
available below a configurable vertex cap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .hypergraph import CapExceeded, Caps, DEFAULT_CAPS

FAMILIES = ("complete", "hypercube", "random-regular", "ring-of-cliques")


class MultiGraph:
    """Immutable undirected multigraph with stable edge ids."""

    def __init__(self, num_vertices: int, edges: Iterable[tuple[int, int]]):
        self.num_vertices = num_vertices
        self.edges: tuple[tuple[int, int], ...] = tuple(
            (int(u), int(v)) for u, v in edges)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(num_vertices)]
        pair_count: dict[tuple[int, int], int] = {}
        for eid, (u, v) in enumerate(self.edges):
            if u == v:
                raise ValueError(f"edge {eid}: self-loop at {u}")
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge {eid}: endpoint out of range")
            adj[u].append((v, eid))
            adj[v].append((u, eid))
            key = (min(u, v), max(u, v))
            pair_count[key] = pair_count.get(key, 0) + 1
        self.adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(lst)) for lst in adj)
        self._pair_count = pair_count

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def min_degree(self) -> int:
        if self.num_vertices == 0:
            return 0
        return min(self.degree(v) for v in range(self.num_vertices))

    @property
    def volume(self) -> int:
        return 2 * self.num_edges

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self.edges[eid]

    def pair_count(self, u: int, v: int) -> int:
        """Number of parallel edges between u and v."""
        return self._pair_count.get((min(u, v), max(u, v)), 0)

    def neighbors(self, v: int) -> Iterator[tuple[int, int]]:
        return iter(self.adjacency[v])

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.num_vertices}, m={self.num_edges})"


class MultiGraphView:
    """Logical-deletion view sharing the base graph's storage.

    Adjacency iteration skips deleted edge ids; one view belongs to one
    routing run and is never shared.
    """

    def __init__(self, base: MultiGraph, deleted: Iterable[int] = ()):
        self.base = base
        self.deleted: set[int] = set(deleted)

    @property
    def num_vertices(self) -> int:
        return self.base.num_vertices

    def delete(self, eid: int) -> None:
        self.deleted.add(eid)

    def delete_many(self, eids: Iterable[int]) -> None:
        self.deleted.update(eids)

    def is_deleted(self, eid: int) -> bool:
        return eid in self.deleted

    def neighbors(self, v: int) -> Iterator[tuple[int, int]]:
        for nbr, eid in self.base.adjacency[v]:
            if eid not in self.deleted:
                yield nbr, eid

    def degree(self, v: int) -> int:
        return sum(1 for _ in self.neighbors(v))


def remove_edges(g: MultiGraph, edge_ids: Iterable[int]) -> MultiGraphView:
    """Deletion view of g without the given edges."""
    ids = set(edge_ids)
    for eid in ids:
        if not 0 <= eid < g.num_edges:
            raise ValueError(f"unknown edge id {eid}")
    return MultiGraphView(g, ids)


def bfs_distances(gv, source: int,
                  cutoff: Optional[int] = None) -> dict[int, int]:
    """Unweighted distances from source on a graph or view."""
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            du = dist[u]
            if cutoff is not None and du >= cutoff:
                continue
            for v, _eid in gv.neighbors(u):
                if v not in dist:
                    dist[v] = du + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def connected_component(g: MultiGraph, start: int = 0) -> frozenset[int]:
    return frozenset(bfs_distances(g, start))


def is_connected(g: MultiGraph) -> bool:
    if g.num_vertices <= 1:
        return True
    return len(connected_component(g, 0)) == g.num_vertices


@dataclass(frozen=True)
class CutReport:
    """One cut: subset, boundary size, both volumes, exact conductance."""

    subset: tuple[int, ...]
    boundary: int
    vol_inside: int
    vol_outside: int
    conductance: Fraction


def cut_report(g: MultiGraph, subset: Iterable[int]) -> CutReport:
    s = frozenset(subset)
    if not s or len(s) >= g.num_vertices:
        raise ValueError("subset must be nonempty and proper")
    boundary = 0
    vol_inside = 0
    for v in s:
        vol_inside += g.degree(v)
        for nbr, _eid in g.neighbors(v):
            if nbr not in s:
                boundary += 1
    vol_outside = g.volume - vol_inside
    denom = min(vol_inside, vol_outside)
    phi = Fraction(boundary, denom) if denom else Fraction(0)
    return CutReport(tuple(sorted(s)), boundary, vol_inside, vol_outside, phi)


def conductance_exact(g: MultiGraph,
                      caps: Caps = DEFAULT_CAPS) -> tuple[Fraction, CutReport]:
    """Exact graph conductance with a minimizing cut witness.

    Enumerates all cuts containing vertex 0 by a Gray-code walk with
    incremental boundary and volume updates.  A disconnected graph reports
    conductance 0 with a component witness.
    """
    n = g.num_vertices
    if n < 2:
        raise ValueError("conductance needs at least two vertices")
    if n > caps.conductance_n:
        raise CapExceeded(f"n={n} exceeds conductance cap {caps.conductance_n}")
    if not is_connected(g):
        comp = connected_component(g, 0)
        report = cut_report(g, comp)
        return Fraction(0), report

    in_s = [False] * n
    in_s[0] = True
    members = {0}
    boundary = g.degree(0)
    vol_inside = g.degree(0)
    total = g.volume
    best_phi = Fraction(boundary, min(vol_inside, total - vol_inside))
    best_set = (0,)

    def consider():
        nonlocal best_phi, best_set
        denom = min(vol_inside, total - vol_inside)
        phi = Fraction(boundary, denom)
        if phi < best_phi:
            best_phi = phi
            best_set = tuple(sorted(members))

    # Gray-code walk over subsets of vertices 1..n-1 joining/leaving S.
    for i in range(1, 1 << (n - 1)):
        v = 1 + ((i & -i).bit_length() - 1)
        inside = sum(1 for nbr, _eid in g.neighbors(v) if in_s[nbr])
        if in_s[v]:
            in_s[v] = False
            members.discard(v)
            # v's own membership does not affect counting its neighbors
            boundary += 2 * inside - g.degree(v)
            vol_inside -= g.degree(v)
        else:
            in_s[v] = True
            members.add(v)
            boundary += g.degree(v) - 2 * inside
            vol_inside += g.degree(v)
        if len(members) < n:
            consider()
    report = cut_report(g, best_set)
    return best_phi, report


# -- generators ---------------------------------------------------------------

def generate(family: str, n: int, d: Optional[int] = None,
             seed: Optional[int] = None, c: Optional[int] = None,
             s: Optional[int] = None, max_tries: int = 1000) -> MultiGraph:
    """Deterministic test-instance supply.

    random-regular uses the pairing model with whole-pairing rejection of
    loops and duplicate edges; edge ids are the sorted edge order, so equal
    seeds give byte-identical graphs.
    """
    if family == "complete":
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
        return MultiGraph(n, edges)
    if family == "hypercube":
        dim = n.bit_length() - 1
        if n <= 0 or 1 << dim != n:
            raise ValueError("hypercube size must be a power of two")
        edges = sorted((min(v, v ^ (1 << b)), max(v, v ^ (1 << b)))
                       for v in range(n) for b in range(dim))
        edges = sorted(set(edges))
        return MultiGraph(n, edges)
    if family == "random-regular":
        if d is None or d < 1 or d >= n:
            raise ValueError("random-regular needs 1 <= d < n")
        if (d * n) % 2:
            raise ValueError("d*n must be even")
        rng = random.Random(seed)
        for _ in range(max_tries):
            stubs = [v for v in range(n) for _ in range(d)]
            rng.shuffle(stubs)
            pairs = [(min(stubs[i], stubs[i + 1]), max(stubs[i], stubs[i + 1]))
                     for i in range(0, len(stubs), 2)]
            if any(u == v for u, v in pairs):
                continue
            if len(set(pairs)) != len(pairs):
                continue
            return MultiGraph(n, sorted(pairs))
        raise ValueError(f"pairing model failed after {max_tries} tries")
    if family == "ring-of-cliques":
        if c is None:
            raise ValueError("ring-of-cliques needs c")
        if s is None:
            if n % c:
                raise ValueError("n must be divisible by c")
            s = n // c
        if c * s != n or c < 2 or s < 1:
            raise ValueError("need n == c*s with c >= 2, s >= 1")
        edges = []
        for i in range(c):
            base = i * s
            edges.extend((base + a, base + b)
                         for a in range(s) for b in range(a + 1, s))
        for i in range(c):
            u = i * s + (s - 1)
            v = ((i + 1) % c) * s
            edges.append((min(u, v), max(u, v)))
        return MultiGraph(n, sorted(edges))
    raise ValueError(f"unknown family {family!r}")


# -- text format --------------------------------------------------------------

def dumps_graph(g: MultiGraph) -> str:
    """Line 1 ``n m``; then one ``u v`` per edge; ids equal line order."""
    lines = [f"{g.num_vertices} {g.num_edges}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> MultiGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty graph file")
    try:
        n, m = map(int, lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad graph header: {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        u, v = map(int, ln.split())
        edges.append((u, v))
    return MultiGraph(n, edges)
