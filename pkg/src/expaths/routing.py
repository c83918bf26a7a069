"""Edge-disjoint path routing via the implicit demand-path hypergraph.

Demands are (s, t) vertex pairs; the implicit bipartite hypergraph has one
A-vertex per demand index, one B-vertex per graph edge id, and one hyperedge
per (demand, simple path of length <= r) incidence.  The hypergraph is never
materialized: hyperedges are discovered by graph oracles and registered with
stable discovery-order ids, and the matching engine runs on top of that
registry exactly as it does on explicit instances.

Two half-layer oracles answer the engine's build requests on the graph with
the forbidden edges removed:

* bfs: per active demand, repeatedly claim a shortest path by BFS;
* blocking-flow: per source vertex, claim blocking sets of shortest paths
  phase by phase against a super-terminal of per-demand capacity.

Either way, claiming a path removes its edges and, for every matched path it
touches, that whole path's edges as well; this makes each matched path
intersect at most one claimed path, so oracle outputs are genuine half
layers of the implicit hypergraph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional

from .engine import (
    EngineConfig,
    EngineResult,
    NoProgressError,
    run_engine,
)
from .graph import MultiGraph, MultiGraphView, bfs_distances, conductance_exact
from .halflayer import (
    HalfLayerOracleSpec,
    HalfLayerState,
    Layer,
    OracleContext,
    matched_b_index,
)
from .hypergraph import CapExceeded, Caps, DEFAULT_CAPS

GRAPH_ORACLES = ("graph-bfs", "graph-blocking-flow")


class RoutingError(Exception):
    """Routing did not finish within the engine's iteration bound; expected
    exactly when the instance does not satisfy the Haxell-strength
    hypothesis.  Carries the hypothesis report when one was computed."""

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis


@dataclass(frozen=True)
class RoutingInstance:
    """Graph, demand pairs and routing parameters.

    ``k`` bounds per-vertex demand multiplicity.  ``r`` (max path length in
    edges) and ``delta`` (per-demand path budget inside one half layer)
    default to the conductance-derived values at route time when unset.
    """

    graph: MultiGraph
    demands: tuple[tuple[int, int], ...]
    k: int
    r: Optional[int] = None
    delta: Optional[int] = None


def demand_multiplicity(demands: Iterable[tuple[int, int]]) -> dict[int, int]:
    mult: dict[int, int] = {}
    for s, t in demands:
        mult[s] = mult.get(s, 0) + 1
        mult[t] = mult.get(t, 0) + 1
    return mult


def routing_instance(graph: MultiGraph,
                     demands: Iterable[tuple[int, int]],
                     k: Optional[int] = None,
                     r: Optional[int] = None,
                     delta: Optional[int] = None) -> RoutingInstance:
    """Build and validate an instance; k defaults to the realized maximum
    per-vertex multiplicity."""
    demands = tuple((int(s), int(t)) for s, t in demands)
    mult = demand_multiplicity(demands)
    realized = max(mult.values(), default=0)
    inst = RoutingInstance(graph, demands, k if k is not None else max(1, realized),
                           r, delta)
    problem = validate_instance(inst)
    if problem:
        raise ValueError(problem)
    return inst


def validate_instance(inst: RoutingInstance) -> Optional[str]:
    n = inst.graph.num_vertices
    for i, (s, t) in enumerate(inst.demands):
        if s == t:
            return f"demand {i}: endpoints equal (zero-length paths rejected)"
        if not (0 <= s < n and 0 <= t < n):
            return f"demand {i}: vertex out of range"
    mult = demand_multiplicity(inst.demands)
    worst = max(mult.values(), default=0)
    if worst > inst.k:
        heavy = min(v for v, c in mult.items() if c == worst)
        return (f"vertex {heavy} appears in {worst} demand pairs, "
                f"exceeding k={inst.k}")
    if inst.r is not None and inst.r < 1:
        return "r must be at least 1"
    if inst.delta is not None and inst.delta < 1:
        return "delta must be at least 1"
    return None


class DemandPathHypergraph:
    """Registry-backed implicit demand-path hypergraph.

    Satisfies the same host protocol as explicit hypergraphs for everything
    the engine touches (edge_a, edge_b, all_a, n_value, rank_bound); edge
    enumeration only covers discovered hyperedges.
    """

    def __init__(self, graph: MultiGraph, demands: tuple[tuple[int, int], ...],
                 r: int):
        if r < 1:
            raise ValueError("r must be at least 1")
        self.graph = graph
        self.demands = demands
        self.rank_bound = r
        self._paths: list[tuple[int, tuple[int, ...], tuple[int, ...]]] = []
        self._bsets: list[frozenset[int]] = []
        self._by_key: dict[tuple[int, frozenset[int]], int] = {}

    @property
    def num_a(self) -> int:
        return len(self.demands)

    @property
    def n_value(self) -> int:
        return self.num_a + self.graph.num_edges

    @property
    def num_edges(self) -> int:
        return len(self._paths)

    def all_a(self) -> range:
        return range(self.num_a)

    def edge_a(self, eid: int) -> int:
        return self._paths[eid][0]

    def edge_b(self, eid: int) -> frozenset[int]:
        return self._bsets[eid]

    def edge_vertices(self, eid: int) -> tuple[int, ...]:
        return self._paths[eid][1]

    def edge_graph_edges(self, eid: int) -> tuple[int, ...]:
        return self._paths[eid][2]

    def add_path(self, demand: int, vertices: tuple[int, ...],
                 edge_ids: tuple[int, ...]) -> int:
        key = (demand, frozenset(edge_ids))
        found = self._by_key.get(key)
        if found is not None:
            return found
        eid = len(self._paths)
        self._paths.append((demand, tuple(vertices), tuple(edge_ids)))
        self._bsets.append(key[1])
        self._by_key[key] = eid
        return eid

    def make_path_oracle(self, spec: HalfLayerOracleSpec):
        if spec.kind == "graph-bfs":
            return BfsPathOracle(self)
        if spec.kind == "graph-blocking-flow":
            return BlockingFlowPathOracle(self)
        raise ValueError(
            f"oracle kind {spec.kind!r} cannot run on an implicit hypergraph")


def state_to_forbidden_edges(h: DemandPathHypergraph,
                             state: HalfLayerState) -> frozenset[int]:
    """Graph edges unusable once every matched path is off limits: the union
    of all matched paths' edges and the edges named by the forbidden
    B-vertices."""
    out = set(state.forbidden_b)
    for f in state.matching:
        out |= h.edge_b(f)
    return frozenset(out)


def _check_state_reachable(h: DemandPathHypergraph, ctx: OracleContext) -> None:
    # A graph oracle cannot express "skip exactly the matched path" during a
    # search, so an active demand's own matched path must already be
    # forbidden.  Engine states always satisfy this (the matched edges of
    # active vertices sit in forest Y-layers).
    matched_of: dict[int, int] = {h.edge_a(f): f for f in ctx.matching}
    for a in ctx.capacities:
        f = matched_of.get(a)
        if f is not None and not h.edge_b(f) <= ctx.forbidden:
            raise ValueError(
                f"active demand {a} has a matched path outside the forbidden "
                f"set; state is not oracle-reachable")


def _shortest_path(view: MultiGraphView, s: int, t: int, max_len: int
                   ) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Deterministic BFS (lowest neighbor first); None if dist(s,t) > max_len."""
    parent: dict[int, tuple[int, int]] = {}
    dist = {s: 0}
    frontier = [s]
    while frontier and t not in dist:
        nxt = []
        for u in frontier:
            du = dist[u]
            if du >= max_len:
                continue
            for v, eid in view.neighbors(u):
                if v not in dist:
                    dist[v] = du + 1
                    parent[v] = (u, eid)
                    nxt.append(v)
        frontier = nxt
    if t not in dist:
        return None
    verts = [t]
    eids = []
    while verts[-1] != s:
        u, eid = parent[verts[-1]]
        verts.append(u)
        eids.append(eid)
    return tuple(reversed(verts)), tuple(reversed(eids))


def _claim_expansion(h: DemandPathHypergraph, ctx: OracleContext,
                     view: MultiGraphView, edge_ids: Iterable[int]) -> None:
    view.delete_many(edge_ids)
    for b in edge_ids:
        f = ctx.matched_b.get(b)
        if f is not None:
            view.delete_many(h.edge_b(f))


class BfsPathOracle:
    """Greedy maximal half layer on the graph: per active demand, claim up to
    its budget of shortest surviving paths."""

    def __init__(self, host: DemandPathHypergraph):
        self.host = host

    def extend(self, ctx: OracleContext) -> list[int]:
        h = self.host
        _check_state_reachable(h, ctx)
        r_eff = min(ctx.rank_limit, h.rank_bound)
        view = MultiGraphView(h.graph, ctx.forbidden)
        out: list[int] = []
        for a in sorted(ctx.capacities):
            cap = ctx.capacities[a]
            s, t = h.demands[a]
            while cap > 0:
                found = _shortest_path(view, s, t, r_eff)
                if found is None:
                    break
                verts, eids = found
                out.append(h.add_path(a, verts, eids))
                cap -= 1
                _claim_expansion(h, ctx, view, eids)
        return out


class BlockingFlowPathOracle:
    """Maximal half layer by level-graph phases, one source at a time.

    Per source: BFS levels, then a restarting DFS on the level graph that
    claims each path reaching an open target at the current shortest
    distance; backtracked arcs die for the rest of the phase.  Distances
    strictly increase across phases, so at most r phases run per source.
    """

    def __init__(self, host: DemandPathHypergraph, phase_log: Optional[list] = None):
        self.host = host
        self.phase_log = phase_log

    def extend(self, ctx: OracleContext) -> list[int]:
        h = self.host
        _check_state_reachable(h, ctx)
        r_eff = min(ctx.rank_limit, h.rank_bound)
        view = MultiGraphView(h.graph, ctx.forbidden)
        cap = dict(ctx.capacities)
        out: list[int] = []
        by_source: dict[int, list[int]] = {}
        for a in sorted(cap):
            by_source.setdefault(h.demands[a][0], []).append(a)
        for s in sorted(by_source):
            self._route_source(s, by_source[s], cap, ctx, view, r_eff, out)
        return out

    def _route_source(self, s: int, demand_idxs: list[int], cap: dict[int, int],
                      ctx: OracleContext, view: MultiGraphView, r_eff: int,
                      out: list[int]) -> None:
        h = self.host
        while True:
            dist = bfs_distances(view, s, cutoff=r_eff)
            open_targets: dict[int, list[int]] = {}
            for a in demand_idxs:
                if cap[a] > 0:
                    open_targets.setdefault(h.demands[a][1], []).append(a)
            reachable = [t for t in open_targets if t in dist and t != s]
            if not reachable:
                return
            d = min(dist[t] for t in reachable)
            self._phase(s, d, dist, open_targets, cap, ctx, view, out)

    def _phase(self, s: int, d: int, dist: dict[int, int],
               open_targets: dict[int, list[int]], cap: dict[int, int],
               ctx: OracleContext, view: MultiGraphView,
               out: list[int]) -> None:
        h = self.host
        dead: set[tuple[int, int]] = set()
        targets = {t for t in open_targets if dist.get(t) == d}
        while targets:
            claim = self._dfs_once(s, d, dist, targets, dead, view)
            if claim is None:
                return
            verts, eids = claim
            t = verts[-1]
            a = min(i for i in open_targets[t] if cap[i] > 0)
            if self.phase_log is not None:
                self.phase_log.append((s, d, a, eids))
            out.append(h.add_path(a, verts, eids))
            cap[a] -= 1
            _claim_expansion(h, ctx, view, eids)
            if not any(cap[i] > 0 for i in open_targets[t]):
                targets.discard(t)

    def _dfs_once(self, s: int, d: int, dist: dict[int, int],
                  targets: set[int], dead: set[tuple[int, int]],
                  view: MultiGraphView
                  ) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
        stack: list[tuple[int, Iterable]] = [(s, iter(view.neighbors(s)))]
        path_v = [s]
        path_e: list[int] = []
        while stack:
            u, arcs = stack[-1]
            moved = False
            for v, eid in arcs:
                if (u, eid) in dead:
                    continue
                lv = dist[u] + 1
                if lv > d or dist.get(v) != lv:
                    continue
                stack.append((v, iter(view.neighbors(v))))
                path_v.append(v)
                path_e.append(eid)
                if lv == d and v in targets:
                    return tuple(path_v), tuple(path_e)
                moved = True
                break
            if not moved:
                stack.pop()
                if stack:
                    dead.add((stack[-1][0], path_e.pop()))
                    path_v.pop()
        return None


def _oracle_for(h: DemandPathHypergraph, spec: HalfLayerOracleSpec,
                phase_log: Optional[list] = None):
    if spec.kind == "graph-blocking-flow" and phase_log is not None:
        return BlockingFlowPathOracle(h, phase_log=phase_log)
    return h.make_path_oracle(spec)


def _half_layer_call(h: DemandPathHypergraph, state: HalfLayerState,
                     kind: str, phase_log: Optional[list] = None) -> Layer:
    spec = HalfLayerOracleSpec(kind=kind, rank_limit=h.rank_bound)
    oracle = _oracle_for(h, spec, phase_log)
    matched_b = matched_b_index(h, state.matching)
    ctx = OracleContext(
        capacities={a: state.delta for a in sorted(state.active_a)},
        forbidden=set(state.forbidden_b),
        matched_b=matched_b,
        matching=state.matching,
        rank_limit=h.rank_bound,
    )
    accepted = oracle.extend(ctx)
    blockers: set[int] = set()
    for eid in accepted:
        for b in h.edge_b(eid):
            f = matched_b.get(b)
            if f is not None:
                blockers.add(f)
    return Layer(x=frozenset(accepted), y=frozenset(blockers))


def bfs_half_layer(h: DemandPathHypergraph, state: HalfLayerState) -> Layer:
    """Maximal half layer of the implicit hypergraph via repeated BFS."""
    return _half_layer_call(h, state, "graph-bfs")


def blocking_flow_half_layer(h: DemandPathHypergraph, state: HalfLayerState,
                             phase_log: Optional[list] = None) -> Layer:
    """Maximal half layer via blocking sets of shortest paths."""
    return _half_layer_call(h, state, "graph-blocking-flow", phase_log)


# -- end-to-end routing -------------------------------------------------------

@dataclass(frozen=True)
class PathSolution:
    """One vertex sequence per demand; edge id sequences when known (a
    solution loaded from a file has ids reassigned during verification)."""

    paths: tuple[tuple[int, ...], ...]
    edge_ids: Optional[tuple[tuple[int, ...], ...]] = None


@dataclass(frozen=True)
class HypothesisReport:
    """The routing theorem's hypothesis phi^3*delta >= (35 log2 n)^3 * k,
    reported but never used as a gate: its constants are unreachable at desk
    scale.  ``haxell_phi`` is the Haxell strength phi*delta/(32k) that the
    demand-path hypergraph provably enjoys."""

    phi: Fraction
    min_degree: int
    k: int
    n: int
    lhs: float
    rhs: float
    satisfied: bool
    haxell_phi: Fraction


def theorem_hypothesis_report(graph: MultiGraph, k: int,
                              phi: Fraction) -> HypothesisReport:
    n = graph.num_vertices
    delta_min = graph.min_degree
    lhs = float(phi) ** 3 * delta_min
    rhs = (35 * math.log2(n)) ** 3 * k
    haxell = Fraction(phi) * delta_min / (32 * k)
    return HypothesisReport(Fraction(phi), delta_min, k, n, lhs, rhs,
                            lhs >= rhs, haxell)


@dataclass(frozen=True)
class RouteResult:
    solution: PathSolution
    engine: EngineResult
    r: int
    delta: int
    hypothesis: Optional[HypothesisReport]


def resolve_parameters(inst: RoutingInstance, caps: Caps = DEFAULT_CAPS
                       ) -> tuple[int, int, Optional[Fraction]]:
    """(r, delta, phi): instance overrides win; defaults are
    r = floor(18 log2 n / phi) and delta = ceil(4 log2 n), with phi computed
    exactly (only possible under the conductance cap)."""
    n = inst.graph.num_vertices
    phi: Optional[Fraction] = None
    r = inst.r
    if r is None:
        try:
            phi, _ = conductance_exact(inst.graph, caps)
        except CapExceeded as exc:
            raise ValueError(
                "graph too large for the conductance-derived default r; "
                "pass r explicitly (relaxed mode)") from exc
        if phi == 0:
            raise ValueError("graph is disconnected; routing is infeasible")
        r = max(1, math.floor(18 * math.log2(n) / float(phi)))
    delta = inst.delta
    if delta is None:
        delta = max(1, math.ceil(4 * math.log2(n)))
    return r, delta, phi


def route_full(inst: RoutingInstance, cfg: Optional[EngineConfig] = None,
               caps: Caps = DEFAULT_CAPS, trace_cb=None) -> RouteResult:
    """Run the matching engine over the implicit demand-path hypergraph and
    translate the perfect matching into edge-disjoint paths.

    The instance's r and delta take precedence over cfg; cfg contributes the
    oracle kind, mu, the iteration cap and strict mode.  The returned
    solution is re-verified before it leaves this function.
    """
    problem = validate_instance(inst)
    if problem:
        raise ValueError(problem)
    r, delta, phi = resolve_parameters(inst, caps)
    if cfg is None:
        cfg = EngineConfig(delta=delta,
                           oracle=HalfLayerOracleSpec(kind="graph-bfs"))
    if cfg.oracle.kind not in GRAPH_ORACLES:
        raise ValueError(f"routing needs a graph oracle, got {cfg.oracle.kind!r}")
    cfg = replace(cfg, delta=delta,
                  oracle=replace(cfg.oracle, rank_limit=r))
    host = DemandPathHypergraph(inst.graph, inst.demands, r)
    hypothesis = None
    if phi is None and inst.graph.num_vertices >= 2:
        try:
            phi, _ = conductance_exact(inst.graph, caps)
        except CapExceeded:
            phi = None
    if phi is not None:
        hypothesis = theorem_hypothesis_report(inst.graph, inst.k, phi)
    try:
        result = run_engine(host, cfg, trace_cb=trace_cb)
    except NoProgressError as exc:
        raise RoutingError(
            f"routing failed within iteration bound ({exc})",
            hypothesis=hypothesis) from exc
    by_demand: dict[int, int] = {}
    for eid in result.matching:
        by_demand[host.edge_a(eid)] = eid
    paths = tuple(host.edge_vertices(by_demand[a]) for a in range(host.num_a))
    ids = tuple(host.edge_graph_edges(by_demand[a]) for a in range(host.num_a))
    solution = PathSolution(paths=paths, edge_ids=ids)
    problem = verify_solution(inst, solution, r=r)
    if problem:
        raise RoutingError(f"engine produced an invalid solution: {problem}",
                           hypothesis=hypothesis)
    return RouteResult(solution, result, r, delta, hypothesis)


def route(inst: RoutingInstance, cfg: Optional[EngineConfig] = None,
          caps: Caps = DEFAULT_CAPS) -> PathSolution:
    return route_full(inst, cfg, caps).solution


def verify_solution(inst: RoutingInstance, sol: PathSolution,
                    r: Optional[int] = None) -> Optional[str]:
    """Total check of endpoints, simplicity, adjacency, the length bound and
    pairwise edge-disjointness; returns the first violation found.

    Edge-disjointness for vertex-sequence solutions counts the hops used per
    vertex pair against the available parallel edges, which is exact because
    parallel edges are interchangeable.
    """
    g = inst.graph
    bound = r if r is not None else inst.r
    if len(sol.paths) != len(inst.demands):
        return (f"solution has {len(sol.paths)} paths for "
                f"{len(inst.demands)} demands")
    hops: dict[tuple[int, int], int] = {}
    for i, path in enumerate(sol.paths):
        s, t = inst.demands[i]
        if len(path) < 2:
            return f"demand {i}: degenerate path"
        if {path[0], path[-1]} != {s, t}:
            return f"demand {i}: endpoint mismatch"
        if len(set(path)) != len(path):
            return f"demand {i}: path is not simple"
        if bound is not None and len(path) - 1 > bound:
            return (f"demand {i}: length bound exceeded "
                    f"({len(path) - 1} > {bound})")
        for u, v in zip(path, path[1:]):
            if g.pair_count(u, v) == 0:
                return f"demand {i}: no edge between {u} and {v}"
            key = (min(u, v), max(u, v))
            hops[key] = hops.get(key, 0) + 1
    for (u, v), used in sorted(hops.items()):
        if used > g.pair_count(u, v):
            return (f"edge reuse between {u} and {v}: {used} paths over "
                    f"{g.pair_count(u, v)} parallel edges")
    if sol.edge_ids is not None:
        if len(sol.edge_ids) != len(sol.paths):
            return "edge id sequences do not match path count"
        seen: set[int] = set()
        for i, (path, ids) in enumerate(zip(sol.paths, sol.edge_ids)):
            if len(ids) != len(path) - 1:
                return f"demand {i}: edge id arity mismatch"
            for (u, v), eid in zip(zip(path, path[1:]), ids):
                eu, ev = g.endpoints(eid)
                if {u, v} != {eu, ev}:
                    return f"demand {i}: edge id {eid} does not join {u},{v}"
                if eid in seen:
                    return f"edge reuse (id {eid})"
                seen.add(eid)
    return None


def vertex_disjoint_subset(demands: Iterable[tuple[int, int]],
                           k: int) -> tuple[int, ...]:
    """Greedy vertex-disjoint sub-collection; size at least |D|/(2k)."""
    taken: list[int] = []
    used: set[int] = set()
    for i, (s, t) in enumerate(demands):
        if s not in used and t not in used:
            taken.append(i)
            used.update((s, t))
    return tuple(taken)


# -- text formats -------------------------------------------------------------

def dumps_demands(demands: Iterable[tuple[int, int]]) -> str:
    return "".join(f"{s} {t}\n" for s, t in demands)


def loads_demands(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        s, t = map(int, ln.split())
        out.append((s, t))
    return tuple(out)


def dumps_solution(sol: PathSolution) -> str:
    return "".join(" ".join(map(str, path)) + "\n" for path in sol.paths)


def loads_solution(text: str) -> PathSolution:
    paths = []
    for ln in text.splitlines():
        if ln.strip():
            paths.append(tuple(map(int, ln.split())))
    return PathSolution(paths=tuple(paths), edge_ids=None)
