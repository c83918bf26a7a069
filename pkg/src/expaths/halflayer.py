"""Half layers: the unit by which the matching engine grows its forest.

A half layer Z for a state (A', B', M) with degree parameter Delta is a set
of non-matching hyperedges such that

  1. every edge of Z has its A-vertex in A', and each A-vertex carries at
     most Delta edges of Z;
  2. every edge of Z avoids the forbidden B-vertices B', and the edges of Z
     are pairwise disjoint inside B;
  3. each matching edge B-intersects at most one edge of Z.

Z is r'-maximal when no further edge of rank at most r' can be added.  The
greedy constructor realizes condition 3 implicitly: accepting an edge adds
its B-set to the forbidden set, and for every matching edge it touches, that
whole matching edge's B-set as well.  A single ascending-id pass is maximal
because acceptance only ever shrinks the candidate pool.

Functions here operate on any host exposing ``edge_a``/``edge_b``; they are
used both for explicit hypergraphs and (via materialization in the tests)
for implicit demand-path hypergraphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .hypergraph import BipartiteHypergraph, CapExceeded, Caps, DEFAULT_CAPS

ORACLE_KINDS = ("explicit-greedy", "graph-bfs", "graph-blocking-flow",
                "throttled-test")


@dataclass(frozen=True)
class HalfLayerState:
    """The (A', B', M) triple plus the degree parameter Delta."""

    active_a: frozenset[int]
    forbidden_b: frozenset[int]
    matching: frozenset[int]
    delta: int

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("delta must be positive")


@dataclass(frozen=True)
class Layer:
    """A half layer X together with its exact blocking set Y inside M."""

    x: frozenset[int]
    y: frozenset[int]


@dataclass(frozen=True)
class HalfLayerOracleSpec:
    """Which half-layer constructor the engine should use, and its declared
    quality.

    ``rank_limit`` of None means the host's rank bound.  ``approx_alpha`` is
    the declared approximation ratio; the throttled-test oracle keeps a
    1/approx_alpha prefix of the greedy acceptance sequence, so its measured
    ratio stays within the declared one on non-adversarial instances.
    """

    kind: str = "explicit-greedy"
    rank_limit: Optional[int] = None
    approx_alpha: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ORACLE_KINDS:
            raise ValueError(f"unknown oracle kind {self.kind!r}")
        if Fraction(self.approx_alpha) < 1:
            raise ValueError("approx_alpha must be >= 1")
        if self.rank_limit is not None and self.rank_limit < 1:
            raise ValueError("rank_limit must be positive")


@dataclass
class TouchCounter:
    """Instrumentation for the greedy constructor's work bound."""

    touches: int = 0

    def bump(self, n: int = 1) -> None:
        self.touches += n


@dataclass
class OracleContext:
    """Everything a half-layer oracle may consult while extending a layer.

    ``capacities`` maps each active A-vertex to its remaining degree budget
    (entries are positive).  ``forbidden`` is owned by the oracle and may be
    mutated; ``matched_b`` maps each matched B-vertex to its matching edge
    and is read-only.  Callers rebuild a fresh context per call and consume
    only the returned edge list.
    """

    capacities: dict[int, int]
    forbidden: set[int]
    matched_b: dict[int, int]
    matching: frozenset[int]
    rank_limit: int


def run_greedy_scan(h, ctx: OracleContext,
                    counter: Optional[TouchCounter] = None) -> list[int]:
    """One ascending-id pass accepting every edge that currently fits.

    Accepting an edge forbids its B-set; touching a matched edge forbids that
    matching edge's whole B-set, which enforces condition 3 without per-edge
    counters.  Rejections are final because constraints only tighten, so a
    single pass yields a maximal half layer extension.
    """
    accepted: list[int] = []
    expanded: set[int] = set()
    for eid in range(h.num_edges):
        if counter:
            counter.bump()
        if eid in ctx.matching:
            continue
        a = h.edge_a(eid)
        cap = ctx.capacities.get(a, 0)
        if cap <= 0:
            continue
        bset = h.edge_b(eid)
        if counter:
            counter.bump(len(bset))
        if len(bset) > ctx.rank_limit or bset & ctx.forbidden:
            continue
        accepted.append(eid)
        ctx.capacities[a] = cap - 1
        ctx.forbidden.update(bset)
        for b in sorted(bset):
            f = ctx.matched_b.get(b)
            if f is not None and f not in expanded:
                expanded.add(f)
                ctx.forbidden.update(h.edge_b(f))
                if counter:
                    counter.bump(len(h.edge_b(f)))
    return accepted


def matched_b_index(h, matching: Iterable[int]) -> dict[int, int]:
    """B-vertex to matching-edge lookup for a vertex-disjoint edge set."""
    out: dict[int, int] = {}
    for f in matching:
        for b in h.edge_b(f):
            out[b] = f
    return out


def is_half_layer(h, z: Iterable[int], state: HalfLayerState) -> bool:
    """Check the three half-layer conditions for edge set ``z``."""
    z = list(z)
    if len(set(z)) != len(z):
        return False
    per_a: dict[int, int] = {}
    used_b: set[int] = set()
    for eid in z:
        if eid in state.matching:
            return False
        a = h.edge_a(eid)
        if a not in state.active_a:
            return False
        per_a[a] = per_a.get(a, 0) + 1
        if per_a[a] > state.delta:
            return False
        bset = h.edge_b(eid)
        if bset & state.forbidden_b or bset & used_b:
            return False
        used_b.update(bset)
    blocked: set[int] = set()
    for eid in z:
        bset = h.edge_b(eid)
        for f in state.matching:
            if bset & h.edge_b(f):
                if f in blocked:
                    return False
                blocked.add(f)
    return True


def _blocked_matching_edges(h, z: Iterable[int],
                            matching: Iterable[int]) -> set[int]:
    out = set()
    for eid in z:
        bset = h.edge_b(eid)
        for f in matching:
            if bset & h.edge_b(f):
                out.add(f)
    return out


def addable_into(h, z: Iterable[int], state: HalfLayerState, eid: int) -> bool:
    """Would z + {eid} still be a half layer for ``state``?"""
    z = list(z)
    if eid in z or eid in state.matching:
        return False
    a = h.edge_a(eid)
    if a not in state.active_a:
        return False
    if sum(1 for other in z if h.edge_a(other) == a) >= state.delta:
        return False
    bset = h.edge_b(eid)
    if bset & state.forbidden_b:
        return False
    for other in z:
        if bset & h.edge_b(other):
            return False
    blocked = _blocked_matching_edges(h, z, state.matching)
    for f in state.matching:
        if bset & h.edge_b(f) and f in blocked:
            return False
    return True


def is_r_maximal(h, z: Iterable[int], state: HalfLayerState,
                 r_prime: int) -> bool:
    """True iff no edge of rank <= r_prime outside z can be added.

    Precondition: z is a half layer for the state (raises otherwise).
    Requires a host with enumerable edges (explicit hypergraphs).
    """
    z = list(z)
    if not is_half_layer(h, z, state):
        raise ValueError("z is not a half layer for the given state")
    zset = set(z)
    per_a: dict[int, int] = {}
    used_b: set[int] = set(state.forbidden_b)
    for eid in z:
        a = h.edge_a(eid)
        per_a[a] = per_a.get(a, 0) + 1
        used_b.update(h.edge_b(eid))
    blocked = _blocked_matching_edges(h, z, state.matching)
    matched_b: dict[int, int] = {}
    for f in state.matching:
        for b in h.edge_b(f):
            matched_b[b] = f
    for eid in range(h.num_edges):
        if eid in zset or eid in state.matching:
            continue
        a = h.edge_a(eid)
        if a not in state.active_a or per_a.get(a, 0) >= state.delta:
            continue
        bset = h.edge_b(eid)
        if len(bset) > r_prime or bset & used_b:
            continue
        if any(matched_b.get(b) in blocked for b in bset):
            continue
        return False
    return True


def greedy_maximal_half_layer(h, state: HalfLayerState, r_prime: int,
                              counter: Optional[TouchCounter] = None) -> Layer:
    """Single-pass greedy construction of an r'-maximal half layer.

    Runs the ascending-id scan over a fresh context built from the state and
    pairs the accepted edges with their exact blocking set.
    """
    matched_b = matched_b_index(h, state.matching)
    if counter:
        counter.bump(sum(1 + len(h.edge_b(f)) for f in state.matching))
    ctx = OracleContext(
        capacities={a: state.delta for a in state.active_a},
        forbidden=set(state.forbidden_b),
        matched_b=matched_b,
        matching=state.matching,
        rank_limit=r_prime,
    )
    accepted = run_greedy_scan(h, ctx, counter)
    blockers: set[int] = set()
    for eid in accepted:
        for b in h.edge_b(eid):
            f = matched_b.get(b)
            if f is not None:
                blockers.add(f)
    return Layer(x=frozenset(accepted), y=frozenset(blockers))


def best_half_layer_size(h, state: HalfLayerState, r_prime: int,
                         caps: Caps = DEFAULT_CAPS) -> int:
    """Maximum size of a rank-<=r' half layer, by pruned backtracking."""
    if h.num_edges > caps.halflayer_edges:
        raise CapExceeded(
            f"|E|={h.num_edges} exceeds half-layer search cap "
            f"{caps.halflayer_edges}")
    candidates = []
    for eid in range(h.num_edges):
        if eid in state.matching:
            continue
        if h.edge_a(eid) not in state.active_a:
            continue
        bset = h.edge_b(eid)
        if len(bset) > r_prime or bset & state.forbidden_b:
            continue
        candidates.append(eid)
    best = 0

    def search(idx: int, chosen: list[int], per_a: dict[int, int],
               used_b: set[int], blocked: set[int]) -> None:
        nonlocal best
        best = max(best, len(chosen))
        if len(chosen) + (len(candidates) - idx) <= best:
            return
        for j in range(idx, len(candidates)):
            eid = candidates[j]
            a = h.edge_a(eid)
            if per_a.get(a, 0) >= state.delta:
                continue
            bset = h.edge_b(eid)
            if bset & used_b:
                continue
            new_blocked = _blocked_matching_edges(h, [eid], state.matching)
            if new_blocked & blocked:
                continue
            per_a[a] = per_a.get(a, 0) + 1
            chosen.append(eid)
            search(j + 1, chosen, per_a, used_b | bset,
                   blocked | new_blocked)
            chosen.pop()
            per_a[a] -= 1

    search(0, [], {}, set(), set())
    return best


def check_approx_ratio(h, z: Iterable[int], state: HalfLayerState,
                       r_prime: int,
                       caps: Caps = DEFAULT_CAPS) -> Union[Fraction, float]:
    """Realized approximation ratio of ``z``: best rank-<=r' half-layer size
    divided by |z|.

    Convention: 0/0 is 1 (a vacuous state should not fail approximation
    assertions); a nonempty best against an empty z is math.inf.
    """
    z = list(z)
    if not is_half_layer(h, z, state):
        raise ValueError("z is not a half layer for the given state")
    best = best_half_layer_size(h, state, r_prime, caps)
    if not z:
        return Fraction(1) if best == 0 else math.inf
    return Fraction(best, len(z))


def dumps_layer(layer: Layer) -> str:
    """Two-line debugging dump: sorted X ids then sorted Y ids."""
    return (" ".join(map(str, sorted(layer.x))) + "\n"
            + " ".join(map(str, sorted(layer.y))) + "\n")
