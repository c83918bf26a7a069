"""Explicit bipartite hypergraphs: validity, matchings, blocking edges, and
exact strong-Haxell verification.

A bipartite hypergraph has vertex parts A and B; every hyperedge contains
exactly one A-vertex and between 1 and r distinct B-vertices (r is the rank
bound).  A matching is a set of pairwise vertex-disjoint hyperedges; it is
perfect when it covers all of A.

All threshold comparisons use exact rationals (fractions.Fraction), never
floats.  Exhaustive operations are guarded by configurable caps and raise
CapExceeded instead of silently approximating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class CapExceeded(Exception):
    """An exhaustive operation was asked to run beyond its configured cap."""


@dataclass(frozen=True)
class Caps:
    """Size caps for the exhaustive verification routines.

    Exceeding a cap is an explicit error, never a silent approximation.
    """

    tau_b: int = 24          # max |B(E_S)| for exact hitting-set search
    haxell_a: int = 16       # max |A| for strong-Haxell subset enumeration
    matching_a: int = 12     # max |A| for brute-force perfect matching
    halflayer_edges: int = 20  # max |E| for exhaustive half-layer search
    conductance_n: int = 20  # max n for exact conductance (graph module)


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class Hyperedge:
    """One hyperedge: a single A-vertex and a sorted tuple of B-vertices."""

    a: int
    b: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.b)

    @property
    def size(self) -> int:
        # |e| counts the A-vertex too.
        return 1 + len(self.b)


class BipartiteHypergraph:
    """Immutable bipartite hypergraph with stable integer edge ids.

    Edge ids are list positions; B-sets are stored sorted.  Construction does
    not validate (invalid instances must be expressible so ``validate`` can
    report them); all other operations assume a valid instance.
    """

    def __init__(self, num_a: int, num_b: int, rank_bound: int,
                 edges: Iterable[tuple[int, Iterable[int]]]):
        self.num_a = num_a
        self.num_b = num_b
        self.rank_bound = rank_bound
        self.edges: tuple[Hyperedge, ...] = tuple(
            Hyperedge(a, tuple(sorted(bs))) for a, bs in edges)
        self._bsets: tuple[frozenset[int], ...] = tuple(
            frozenset(e.b) for e in self.edges)
        by_a: list[list[int]] = [[] for _ in range(num_a)]
        for eid, e in enumerate(self.edges):
            if 0 <= e.a < num_a:
                by_a[e.a].append(eid)
        self._edges_of_a: tuple[tuple[int, ...], ...] = tuple(
            tuple(ids) for ids in by_a)

    # -- basic accessors used throughout the engine ------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def volume(self) -> int:
        """Total volume p, the sum of |e| over all edges."""
        return sum(e.size for e in self.edges)

    @property
    def n_value(self) -> int:
        """|A| + |B|, the vertex count used in depth and iteration bounds."""
        return self.num_a + self.num_b

    def edge_a(self, eid: int) -> int:
        return self.edges[eid].a

    def edge_b(self, eid: int) -> frozenset[int]:
        return self._bsets[eid]

    def edges_of_a(self, a: int) -> tuple[int, ...]:
        return self._edges_of_a[a]

    def all_a(self) -> range:
        return range(self.num_a)

    def __repr__(self) -> str:
        return (f"BipartiteHypergraph(num_a={self.num_a}, num_b={self.num_b}, "
                f"rank_bound={self.rank_bound}, m={self.num_edges})")


def validate(h: BipartiteHypergraph) -> Optional[str]:
    """Check all type invariants; return None or a message naming the first
    violating edge."""
    if h.num_a < 0 or h.num_b < 0:
        return "negative part size"
    if h.rank_bound < 1:
        return "rank bound must be at least 1"
    for eid, e in enumerate(h.edges):
        if not 0 <= e.a < h.num_a:
            return f"edge {eid}: A-vertex {e.a} out of range"
        if len(e.b) == 0:
            return f"edge {eid}: empty B-part"
        if len(e.b) > h.rank_bound:
            return f"edge {eid}: rank exceeds bound ({len(e.b)} > {h.rank_bound})"
        if len(set(e.b)) != len(e.b):
            return f"edge {eid}: duplicate B-vertex"
        if e.b[0] < 0 or e.b[-1] >= h.num_b:
            return f"edge {eid}: B-vertex out of range"
    return None


def _check_edge_ids(h: BipartiteHypergraph, edge_ids: Iterable[int]) -> None:
    for eid in edge_ids:
        if not 0 <= eid < h.num_edges:
            raise ValueError(f"unknown edge id {eid}")


def is_matching(h: BipartiteHypergraph, edge_ids: Iterable[int]) -> bool:
    """True iff the edges are pairwise vertex-disjoint in both parts."""
    ids = list(edge_ids)
    _check_edge_ids(h, ids)
    seen_a: set[int] = set()
    seen_b: set[int] = set()
    for eid in ids:
        e = h.edges[eid]
        if e.a in seen_a or any(b in seen_b for b in e.b):
            return False
        seen_a.add(e.a)
        seen_b.update(e.b)
    return True


def is_perfect_matching(h: BipartiteHypergraph, edge_ids: Iterable[int]) -> bool:
    """True iff the edge set is a matching covering every A-vertex."""
    ids = list(edge_ids)
    if not is_matching(h, ids):
        return False
    return {h.edges[eid].a for eid in ids} == set(range(h.num_a))


def blocking_edges(h: BipartiteHypergraph, eid: int,
                   matching: Iterable[int]) -> frozenset[int]:
    """Matching edges intersecting edge ``eid`` inside B.

    Intersections in the A part are deliberately not considered.
    """
    _check_edge_ids(h, [eid])
    bset = h.edge_b(eid)
    out = set()
    for f in matching:
        if bset & h.edge_b(f):
            out.add(f)
    return frozenset(out)


# -- exact hitting-set computation (tau) -----------------------------------

def _greedy_cover_size(bsets: list[frozenset[int]]) -> int:
    """Greedy hitting-set upper bound: repeatedly pick the B-vertex covering
    the most uncovered edges (lowest id on ties)."""
    uncovered = list(range(len(bsets)))
    size = 0
    while uncovered:
        counts: dict[int, int] = {}
        for i in uncovered:
            for b in bsets[i]:
                counts[b] = counts.get(b, 0) + 1
        best_b = min(counts, key=lambda b: (-counts[b], b))
        uncovered = [i for i in uncovered if best_b not in bsets[i]]
        size += 1
    return size


def _greedy_packing_size(bsets: list[frozenset[int]],
                         order: Optional[list[int]] = None) -> int:
    """Greedy pairwise-disjoint edge packing: a lower bound on the hitting
    number, since disjoint edges need distinct hitters."""
    used: set[int] = set()
    size = 0
    for i in (order if order is not None else range(len(bsets))):
        if not (bsets[i] & used):
            used.update(bsets[i])
            size += 1
    return size


def hitting_bounds(h: BipartiteHypergraph,
                   a_subset: Iterable[int]) -> tuple[int, int]:
    """(lower, upper) bounds on tau(E_S) from greedy packing and covering."""
    a_set = set(a_subset)
    bsets = [h.edge_b(eid) for eid, e in enumerate(h.edges) if e.a in a_set]
    if not bsets:
        return 0, 0
    order = sorted(range(len(bsets)), key=lambda i: (len(bsets[i]), i))
    return _greedy_packing_size(bsets, order), _greedy_cover_size(bsets)


def min_hitting_set_size(h: BipartiteHypergraph, a_subset: Iterable[int],
                         caps: Caps = DEFAULT_CAPS) -> int:
    """Exact tau(E_S): the minimum number of B-vertices hitting every edge
    incident to the given A-vertices.

    Branch and bound: branch on the first unhit edge, trying each of its B
    vertices; prune with a greedy disjoint-edge packing lower bound.  An
    empty E_S has tau 0.
    """
    a_set = set(a_subset)
    bsets = [h.edge_b(eid) for eid, e in enumerate(h.edges) if e.a in a_set]
    if not bsets:
        return 0
    universe = set().union(*bsets)
    if len(universe) > caps.tau_b:
        raise CapExceeded(
            f"too large for exact tau: |B(E_S)|={len(universe)} > {caps.tau_b}")
    order = sorted(range(len(bsets)), key=lambda i: (len(bsets[i]), i))
    lower = _greedy_packing_size(bsets, order)
    best = _greedy_cover_size(bsets)
    if lower == best:
        return best

    def packing(uncovered: list[frozenset[int]]) -> int:
        return _greedy_packing_size(uncovered)

    def search(hit: set[int], uncovered: list[frozenset[int]]) -> None:
        nonlocal best
        if not uncovered:
            best = min(best, len(hit))
            return
        if len(hit) + packing(uncovered) >= best:
            return
        target = min(uncovered, key=lambda s: (len(s), sorted(s)))
        for b in sorted(target):
            hit.add(b)
            search(hit, [s for s in uncovered if b not in s])
            hit.discard(b)

    search(set(), bsets)
    return best


def verify_strong_haxell(h: BipartiteHypergraph, phi: Fraction,
                         caps: Caps = DEFAULT_CAPS) -> bool:
    """Exhaustively check tau(E_S) >= phi*|S| for every nonempty S within A.

    Greedy packing/cover bounds settle most subsets; exact tau is computed
    only when the bounds straddle the threshold.  An A-vertex with no
    incident edges has tau 0, failing any phi > 0.
    """
    if h.num_a > caps.haxell_a:
        raise CapExceeded(
            f"|A|={h.num_a} exceeds Haxell enumeration cap {caps.haxell_a}")
    phi = Fraction(phi)
    for size in range(1, h.num_a + 1):
        for subset in itertools.combinations(range(h.num_a), size):
            needed = phi * size
            lower, upper = hitting_bounds(h, subset)
            if lower >= needed:
                continue
            if upper < needed:
                return False
            if min_hitting_set_size(h, subset, caps) < needed:
                return False
    return True


def brute_force_perfect_matching(h: BipartiteHypergraph,
                                 caps: Caps = DEFAULT_CAPS
                                 ) -> Optional[frozenset[int]]:
    """Backtracking search for any perfect matching (testing oracle).

    A-vertices are processed in ascending order, candidate edges in ascending
    id order, so the first matching found is deterministic.
    """
    if h.num_a > caps.matching_a:
        raise CapExceeded(
            f"|A|={h.num_a} exceeds brute-force matching cap {caps.matching_a}")
    chosen: list[int] = []
    used_b: set[int] = set()

    def extend(a: int) -> bool:
        if a == h.num_a:
            return True
        for eid in h.edges_of_a(a):
            bset = h.edge_b(eid)
            if bset & used_b:
                continue
            chosen.append(eid)
            used_b.update(bset)
            if extend(a + 1):
                return True
            chosen.pop()
            used_b.difference_update(bset)
        return False

    return frozenset(chosen) if extend(0) else None


# -- text formats -----------------------------------------------------------

def dumps_hypergraph(h: BipartiteHypergraph) -> str:
    """Serialize: line 1 ``nA nB mE r``; then one ``a k b1 .. bk`` per edge."""
    lines = [f"{h.num_a} {h.num_b} {h.num_edges} {h.rank_bound}"]
    for e in h.edges:
        lines.append(" ".join([str(e.a), str(len(e.b)), *map(str, e.b)]))
    return "\n".join(lines) + "\n"


def loads_hypergraph(text: str) -> BipartiteHypergraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty hypergraph file")
    try:
        num_a, num_b, m, r = map(int, lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad hypergraph header: {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = list(map(int, ln.split()))
        a, k, bs = parts[0], parts[1], parts[2:]
        if len(bs) != k:
            raise ValueError(f"edge line arity mismatch: {ln!r}")
        edges.append((a, bs))
    return BipartiteHypergraph(num_a, num_b, r, edges)


def dumps_matching(edge_ids: Iterable[int]) -> str:
    return "".join(f"{eid}\n" for eid in sorted(edge_ids))


def loads_matching(text: str) -> frozenset[int]:
    return frozenset(int(ln) for ln in text.splitlines() if ln.strip())
