"""Alternating-forest engine for hypergraph perfect matching.

The forest is a stack of layers (L_0, ..., L_ell): L_0 holds the unmatched
A-vertices, and each L_t = (X_t, Y_t) pairs a half layer X_t with its exact
blocking set Y_t inside the current matching.  One main-loop iteration builds
a new maximal (or oracle-approximate) top layer and then collapses the forest
while the top layer holds more than mu*|X_ell| immediately addable edges:
those are swapped against their parents' blockers (growing the matching when
ell is 1), the top layer is dropped, and the layer below is rebuilt in place
when that enlarges it by a (1+mu) factor.

Termination is certified by a per-forest signature vector that decreases
strictly lexicographically every iteration while the strong Haxell condition
holds; a configurable iteration cap converts the absence of that guarantee
into an explicit error.

Two implementations coexist deliberately: the Engine class keeps incremental
counters, while the module-level ``build_layer``/``collapse_forest``
functions recompute everything from scratch.  The test suite replays full
runs on both and diffs their traces.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .halflayer import (
    HalfLayerOracleSpec,
    HalfLayerState,
    Layer,
    OracleContext,
    is_half_layer,
    matched_b_index,
    run_greedy_scan,
)

EVENTS = ("grow", "swap", "superpose", "collapse")


class NoProgressError(Exception):
    """The engine could not certify progress within its iteration bound.

    Raised on a reached iteration cap and on a provable stall (an empty layer
    was built and nothing collapsed, which repeats forever).  Either way the
    strong Haxell hypothesis most likely fails for the instance.  Carries the
    last signature for diagnosis.
    """

    def __init__(self, message, signature, iterations):
        super().__init__(message)
        self.signature = signature
        self.iterations = iterations


class EngineInvariantError(Exception):
    """A strict-mode re-validation of the forest failed (internal bug or a
    run on an instance violating its declared hypothesis)."""


@dataclass(frozen=True)
class EngineConfig:
    """Engine parameters.

    ``delta`` is the per-vertex degree budget of every layer; ``mu`` the
    collapse threshold (1/10 throughout).  ``iteration_cap`` of None selects
    a concrete instantiation of the asymptotic iteration bound.
    """

    delta: int
    mu: Fraction = Fraction(1, 10)
    iteration_cap: Optional[int] = None
    oracle: HalfLayerOracleSpec = field(default_factory=HalfLayerOracleSpec)
    strict_mode: bool = False

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("delta must be positive")
        if not 0 < Fraction(self.mu) < 1:
            raise ValueError("mu must lie strictly between 0 and 1")
        if self.iteration_cap is not None and self.iteration_cap < 1:
            raise ValueError("iteration_cap must be positive")


@dataclass(frozen=True)
class AlternatingForest:
    """Immutable snapshot of the forest: unmatched A-vertices (the L_0
    payload) plus the layers L_1..L_ell."""

    unmatched_a: frozenset[int]
    layers: tuple[Layer, ...]

    @property
    def ell(self) -> int:
        return len(self.layers)


# -- signature vector --------------------------------------------------------

_INF_PAIR = (math.inf,)


def floor_log_1p01(n: int) -> int:
    """Exact floor of log base 1.01 of a positive integer, by comparing
    integer powers of 101 against n times powers of 100."""
    if n < 1:
        raise ValueError("positive integer required")
    if n == 1:
        return 0
    hi = 1
    while 101 ** hi <= n * 100 ** hi:
        hi *= 2
    lo = hi // 2 if hi > 1 else 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if 101 ** mid <= n * 100 ** mid:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class Signature:
    """Per-layer potential pairs with a trailing infinity sentinel; ordered
    lexicographically.  Strict decrease per iteration is the engine's
    termination certificate."""

    psi: tuple[tuple[int, int], ...]

    def key(self):
        return self.psi + (_INF_PAIR,)

    def __lt__(self, other: "Signature") -> bool:
        return self.key() < other.key()

    def __le__(self, other: "Signature") -> bool:
        return self.key() <= other.key()

    def canonical(self) -> str:
        return ";".join(f"{p},{q}" for p, q in self.psi) + ";INF"

    def hash12(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:12]


def _psi(t: int, x_count: int, y_count: int) -> tuple[int, int]:
    # log 0 is defined as 0.
    first = -floor_log_1p01(5 ** (2 * t) * x_count) if x_count else 0
    second = floor_log_1p01(5 ** (2 * t + 1) * y_count) if y_count else 0
    return (first, second)


def signature(forest: AlternatingForest) -> Signature:
    """Signature vector of the forest (X_0 is empty by definition)."""
    pairs = [_psi(0, 0, len(forest.unmatched_a))]
    for t, layer in enumerate(forest.layers, start=1):
        pairs.append(_psi(t, len(layer.x), len(layer.y)))
    return Signature(tuple(pairs))


def classify_event(passes: int, superposed: int, grew: bool) -> str:
    """Single event label for a main-loop iteration, by fixed priority:
    no collapse pass means grow; an accepted superpose-build wins over a
    matching-growing swap, which wins over a plain collapse."""
    if passes == 0:
        return "grow"
    if superposed:
        return "superpose"
    if grew:
        return "swap"
    return "collapse"


def default_iteration_cap(n_value: int, delta: int) -> int:
    """Concrete instantiation of the iteration bound
    4 * 2**ceil(sqrt(lmax^2 + lmax*log2 n)) with lmax = ceil(9 log2 n / log2 delta)."""
    n = max(2, n_value)
    d = max(2, delta)
    lmax = math.ceil(9 * math.log2(n) / math.log2(d))
    return 4 * 2 ** math.ceil(math.sqrt(lmax * lmax + lmax * math.log2(n)))


# -- oracles ------------------------------------------------------------------

class GreedyScanOracle:
    """Maximal half-layer extension by the ascending-id greedy scan."""

    def __init__(self, host):
        self.host = host

    def extend(self, ctx: OracleContext) -> list[int]:
        return run_greedy_scan(self.host, ctx)


class ThrottledOracle:
    """Test oracle returning only a prefix of the greedy acceptance sequence.

    Keeps ceil(keep * accepted) edges, so on interference-free instances the
    realized approximation ratio stays at most 1/keep.  Exists to exercise
    the engine with a genuinely non-maximal oracle.
    """

    def __init__(self, host, keep: Fraction):
        if not 0 < Fraction(keep) <= 1:
            raise ValueError("keep fraction must lie in (0, 1]")
        self.host = host
        self.keep = Fraction(keep)

    def extend(self, ctx: OracleContext) -> list[int]:
        full = run_greedy_scan(self.host, ctx)
        return full[: math.ceil(self.keep * len(full))]


def resolve_rank_limit(host, spec: HalfLayerOracleSpec) -> int:
    limit = spec.rank_limit if spec.rank_limit is not None else host.rank_bound
    if limit > host.rank_bound:
        raise ValueError(
            f"rank_limit {limit} exceeds host rank bound {host.rank_bound}")
    return limit


def make_oracle(host, spec: HalfLayerOracleSpec):
    """Resolve an oracle spec against a host.  Graph-backed kinds are
    provided by demand-path hosts through ``make_path_oracle``."""
    if spec.kind == "explicit-greedy":
        return GreedyScanOracle(host)
    if spec.kind == "throttled-test":
        return ThrottledOracle(host, keep=1 / Fraction(spec.approx_alpha))
    factory = getattr(host, "make_path_oracle", None)
    if factory is None:
        raise ValueError(
            f"oracle kind {spec.kind!r} requires a demand-path host")
    return factory(spec)


# -- functional operations (recompute-from-scratch flavor) -------------------

def addable_edge(h, forest: AlternatingForest, x_acc: Iterable[int],
                 y_acc: Iterable[int], a: int, cfg: EngineConfig
                 ) -> Optional[int]:
    """Lowest-id edge of ``a`` that is delta-addable with respect to the
    forest and the partial layer (x_acc, y_acc), or None.

    Addability: a carries fewer than delta edges in x_acc and the edge's
    B-set avoids every B-vertex of the forest and the partial layer.
    """
    x_acc = list(x_acc)
    if sum(1 for eid in x_acc if h.edge_a(eid) == a) >= cfg.delta:
        return None
    forbidden: set[int] = set()
    for layer in forest.layers:
        for eid in layer.x:
            forbidden |= h.edge_b(eid)
        for eid in layer.y:
            forbidden |= h.edge_b(eid)
    for eid in x_acc:
        forbidden |= h.edge_b(eid)
    for eid in y_acc:
        forbidden |= h.edge_b(eid)
    for eid in range(h.num_edges):
        if h.edge_a(eid) != a or eid in x_acc:
            continue
        if not h.edge_b(eid) & forbidden:
            return eid
    return None


def _layer_context(h, forest: AlternatingForest, x0: Iterable[int],
                   y0: Iterable[int], cfg: EngineConfig,
                   matching: frozenset[int]) -> OracleContext:
    if forest.ell == 0:
        active = sorted(forest.unmatched_a)
    else:
        active = sorted({h.edge_a(f) for f in forest.layers[-1].y})
    seed_deg: dict[int, int] = {}
    for eid in x0:
        a = h.edge_a(eid)
        seed_deg[a] = seed_deg.get(a, 0) + 1
    capacities = {}
    for a in active:
        rem = cfg.delta - seed_deg.get(a, 0)
        if rem > 0:
            capacities[a] = rem
    forbidden: set[int] = set()
    for layer in forest.layers:
        for eid in layer.x:
            forbidden |= h.edge_b(eid)
        for eid in layer.y:
            forbidden |= h.edge_b(eid)
    for eid in x0:
        forbidden |= h.edge_b(eid)
    for eid in y0:
        forbidden |= h.edge_b(eid)
    return OracleContext(
        capacities=capacities,
        forbidden=forbidden,
        matched_b=matched_b_index(h, matching),
        matching=frozenset(matching),
        rank_limit=resolve_rank_limit(h, cfg.oracle),
    )


def build_layer(h, forest: AlternatingForest, x0: Iterable[int],
                y0: Iterable[int], cfg: EngineConfig,
                matching: Iterable[int], oracle=None) -> Layer:
    """Extend the seed layer (x0, y0) to a maximal (or oracle-approximate)
    layer for the forest's top state.

    Candidate generation is delegated to the configured oracle; blockers of
    every accepted edge join the Y side, so the result is again a layer.
    """
    matching = frozenset(matching)
    oracle = oracle if oracle is not None else make_oracle(h, cfg.oracle)
    ctx = _layer_context(h, forest, x0, y0, cfg, matching)
    matched_b = ctx.matched_b
    new_ids = oracle.extend(ctx)
    x = set(x0) | set(new_ids)
    y = set(y0)
    for eid in new_ids:
        for b in h.edge_b(eid):
            f = matched_b.get(b)
            if f is not None:
                y.add(f)
    return Layer(x=frozenset(x), y=frozenset(y))


@dataclass(frozen=True)
class CollapseResult:
    forest: AlternatingForest
    matching: frozenset[int]
    passes: int
    superpose_accepted: int
    matching_grew: bool


def collapse_forest(h, forest: AlternatingForest, matching: Iterable[int],
                    cfg: EngineConfig, oracle=None) -> CollapseResult:
    """Run the collapse loop on the forest top until it is non-collapsible.

    Each pass freezes the set of immediately addable top edges, swaps them
    against their parents' blockers in ascending id order (the witness per
    parent is the lowest-id one), discards the top layer, and attempts one
    superpose-build of the layer below, keeping it only on a (1+mu) size
    gain.  At ell=1 the swaps grow the matching instead.
    """
    matching = set(matching)
    unmatched = set(forest.unmatched_a)
    layers: list[tuple[set[int], set[int]]] = [
        (set(layer.x), set(layer.y)) for layer in forest.layers]
    passes = 0
    superposed = 0
    grew = False
    while layers:
        x_top, y_top = layers[-1]
        matched_b = matched_b_index(h, matching)
        frozen_ia = [eid for eid in sorted(x_top)
                     if not any(b in matched_b for b in h.edge_b(eid))]
        if not Fraction(len(frozen_ia)) > Fraction(cfg.mu) * len(x_top):
            break
        passes += 1
        ia_by_a: dict[int, list[int]] = {}
        for eid in frozen_ia:
            ia_by_a.setdefault(h.edge_a(eid), []).append(eid)
        if len(layers) == 1:
            for a in sorted(unmatched):
                cands = ia_by_a.get(a)
                if not cands:
                    continue
                matching.add(cands[0])
                unmatched.discard(a)
                grew = True
        else:
            _, y_prev = layers[-2]
            for f in sorted(y_prev):
                cands = ia_by_a.get(h.edge_a(f))
                if not cands:
                    continue
                matching.discard(f)
                matching.add(cands[0])
                y_prev.discard(f)
        layers.pop()
        if layers:
            seed_x, seed_y = layers[-1]
            prefix = AlternatingForest(
                unmatched_a=frozenset(unmatched),
                layers=tuple(Layer(frozenset(px), frozenset(py))
                             for px, py in layers[:-1]))
            rebuilt = build_layer(h, prefix, frozenset(seed_x),
                                  frozenset(seed_y), cfg,
                                  frozenset(matching), oracle=oracle)
            if Fraction(len(rebuilt.x)) >= (1 + Fraction(cfg.mu)) * len(seed_x):
                layers[-1] = (set(rebuilt.x), set(rebuilt.y))
                superposed += 1
    out = AlternatingForest(
        unmatched_a=frozenset(unmatched),
        layers=tuple(Layer(frozenset(px), frozenset(py))
                     for px, py in layers))
    return CollapseResult(out, frozenset(matching), passes, superposed, grew)


# -- forest re-validation -----------------------------------------------------

def _generic_is_matching(h, matching: Iterable[int]) -> bool:
    seen_a: set[int] = set()
    seen_b: set[int] = set()
    for eid in matching:
        a = h.edge_a(eid)
        bset = h.edge_b(eid)
        if a in seen_a or bset & seen_b:
            return False
        seen_a.add(a)
        seen_b.update(bset)
    return True


def validate_forest(h, forest: AlternatingForest, matching: frozenset[int],
                    delta: int, mu: Fraction) -> list[str]:
    """Recompute every forest invariant from scratch; return violations.

    Checked: L_0 is exactly the unmatched A-set, the matching is vertex
    disjoint, every layer is a layer for its state with Y precisely the
    blocker set, layers are pairwise B-disjoint, every layer is
    non-collapsible, and |Y_t| >= (1-mu)|X_t|.
    """
    problems: list[str] = []
    if not _generic_is_matching(h, matching):
        problems.append("matching is not vertex-disjoint")
    matched_a = {h.edge_a(f) for f in matching}
    expect_unmatched = set(h.all_a()) - matched_a
    if set(forest.unmatched_a) != expect_unmatched:
        problems.append("L_0 does not hold exactly the unmatched A-vertices")
    matched_b = matched_b_index(h, matching)
    forbidden: set[int] = set()
    prev_active = forest.unmatched_a
    layer_bs: list[set[int]] = []
    for t, layer in enumerate(forest.layers, start=1):
        state = HalfLayerState(
            active_a=frozenset(prev_active),
            forbidden_b=frozenset(forbidden),
            matching=matching,
            delta=delta,
        )
        if not is_half_layer(h, layer.x, state):
            problems.append(f"layer {t}: X is not a half layer for its state")
        blockers: set[int] = set()
        for eid in layer.x:
            for b in h.edge_b(eid):
                f = matched_b.get(b)
                if f is not None:
                    blockers.add(f)
        if blockers != set(layer.y):
            problems.append(f"layer {t}: Y is not exactly the blocking set")
        ia = [eid for eid in layer.x
              if not any(b in matched_b for b in h.edge_b(eid))]
        if Fraction(len(ia)) > Fraction(mu) * len(layer.x):
            problems.append(f"layer {t}: collapsible at main-loop start")
        if Fraction(len(layer.y)) < (1 - Fraction(mu)) * len(layer.x):
            problems.append(f"layer {t}: |Y| < (1-mu)|X|")
        this_b: set[int] = set()
        for eid in set(layer.x) | set(layer.y):
            this_b |= h.edge_b(eid)
        for s, other in enumerate(layer_bs, start=1):
            if this_b & other:
                problems.append(f"layers {s} and {t}: B-sets intersect")
        layer_bs.append(this_b)
        forbidden |= this_b
        prev_active = {h.edge_a(f) for f in layer.y}
    return problems


# -- the incremental engine ---------------------------------------------------

class _LayerRec:
    __slots__ = ("x", "y", "adeg")

    def __init__(self):
        self.x: list[int] = []
        self.y: set[int] = set()
        self.adeg: dict[int, int] = {}


@dataclass(frozen=True)
class EngineResult:
    matching: frozenset[int]
    iterations: int
    collapse_passes: int
    max_ell: int
    signatures: tuple[Signature, ...]
    trace: tuple[str, ...]


class Engine:
    """Incremental-state implementation of the matching main loop."""

    def __init__(self, host, cfg: EngineConfig, oracle=None):
        self.host = host
        self.cfg = cfg
        self.oracle = oracle if oracle is not None else make_oracle(host, cfg.oracle)
        self.rank_limit = resolve_rank_limit(host, cfg.oracle)
        self.cap = (cfg.iteration_cap if cfg.iteration_cap is not None
                    else default_iteration_cap(host.n_value, cfg.delta))
        self.matching: set[int] = set()
        self.matched_a: dict[int, int] = {}
        self.matched_b: dict[int, int] = {}
        self.unmatched: set[int] = set(host.all_a())
        self.layers: list[_LayerRec] = []
        self.fb_count: dict[int, int] = {}
        self.iterations = 0
        self.collapse_passes = 0
        self.max_ell = 0
        self.signatures: list[Signature] = []
        self.trace: list[str] = []

    # forbidden-B reference counting (layers overlap inside one layer only)

    def _forbid(self, eid: int) -> None:
        for b in self.host.edge_b(eid):
            self.fb_count[b] = self.fb_count.get(b, 0) + 1

    def _unforbid(self, eid: int) -> None:
        for b in self.host.edge_b(eid):
            c = self.fb_count[b] - 1
            if c:
                self.fb_count[b] = c
            else:
                del self.fb_count[b]

    def _match(self, eid: int) -> None:
        self.matching.add(eid)
        self.matched_a[self.host.edge_a(eid)] = eid
        for b in self.host.edge_b(eid):
            self.matched_b[b] = eid

    def _unmatch(self, eid: int) -> None:
        self.matching.discard(eid)
        del self.matched_a[self.host.edge_a(eid)]
        for b in self.host.edge_b(eid):
            del self.matched_b[b]

    def _unblocked(self, eid: int) -> bool:
        return not any(b in self.matched_b for b in self.host.edge_b(eid))

    def _active_for(self, idx: int) -> list[int]:
        """A(Y) of the layer below index ``idx`` (L_0 when idx is 0)."""
        if idx == 0:
            return sorted(self.unmatched)
        return sorted({self.host.edge_a(f) for f in self.layers[idx - 1].y})

    def _extend(self, rec: _LayerRec, active: list[int]):
        capacities = {}
        for a in active:
            rem = self.cfg.delta - rec.adeg.get(a, 0)
            if rem > 0:
                capacities[a] = rem
        ctx = OracleContext(
            capacities=capacities,
            forbidden={b for b in self.fb_count},
            matched_b=self.matched_b,
            matching=frozenset(self.matching),
            rank_limit=self.rank_limit,
        )
        new_ids = self.oracle.extend(ctx)
        added = []
        for eid in new_ids:
            a = self.host.edge_a(eid)
            rec.x.append(eid)
            rec.adeg[a] = rec.adeg.get(a, 0) + 1
            self._forbid(eid)
            new_blockers = []
            for b in sorted(self.host.edge_b(eid)):
                f = self.matched_b.get(b)
                if f is not None and f not in rec.y:
                    rec.y.add(f)
                    self._forbid(f)
                    new_blockers.append(f)
            added.append((eid, new_blockers))
        return added

    def _rollback(self, rec: _LayerRec, added) -> None:
        for eid, new_blockers in reversed(added):
            for f in reversed(new_blockers):
                rec.y.discard(f)
                self._unforbid(f)
            rec.x.pop()
            a = self.host.edge_a(eid)
            rec.adeg[a] -= 1
            if not rec.adeg[a]:
                del rec.adeg[a]
            self._unforbid(eid)

    def snapshot(self) -> AlternatingForest:
        return AlternatingForest(
            unmatched_a=frozenset(self.unmatched),
            layers=tuple(Layer(frozenset(rec.x), frozenset(rec.y))
                         for rec in self.layers))

    def _collapse(self) -> tuple[int, int, bool]:
        passes = 0
        superposed = 0
        grew = False
        while self.layers:
            top = self.layers[-1]
            frozen_ia = [eid for eid in sorted(top.x) if self._unblocked(eid)]
            if not Fraction(len(frozen_ia)) > Fraction(self.cfg.mu) * len(top.x):
                break
            passes += 1
            ia_by_a: dict[int, list[int]] = {}
            for eid in frozen_ia:
                ia_by_a.setdefault(self.host.edge_a(eid), []).append(eid)
            if len(self.layers) == 1:
                for a in sorted(self.unmatched):
                    cands = ia_by_a.get(a)
                    if not cands:
                        continue
                    self._match(cands[0])
                    self.unmatched.discard(a)
                    grew = True
            else:
                prev = self.layers[-2]
                for f in sorted(prev.y):
                    cands = ia_by_a.get(self.host.edge_a(f))
                    if not cands:
                        continue
                    self._unmatch(f)
                    prev.y.discard(f)
                    self._unforbid(f)
                    self._match(cands[0])
            self.layers.pop()
            for eid in top.x:
                self._unforbid(eid)
            for f in top.y:
                self._unforbid(f)
            if self.layers:
                seed = self.layers[-1]
                x_before = len(seed.x)
                added = self._extend(seed, self._active_for(len(self.layers) - 1))
                if Fraction(len(seed.x)) >= (1 + Fraction(self.cfg.mu)) * x_before:
                    superposed += 1
                else:
                    self._rollback(seed, added)
        return passes, superposed, grew

    def _strict_check(self) -> None:
        problems = validate_forest(self.host, self.snapshot(),
                                   frozenset(self.matching),
                                   self.cfg.delta, self.cfg.mu)
        if problems:
            raise EngineInvariantError(
                "; ".join(problems) + f" | forest={self.snapshot()!r}")

    def run(self, trace_cb: Optional[Callable[[str], None]] = None) -> EngineResult:
        self.signatures.append(signature(self.snapshot()))
        while self.unmatched:
            if self.iterations >= self.cap:
                raise NoProgressError("no progress within bound: iteration cap",
                                      self.signatures[-1], self.iterations)
            self.iterations += 1
            if self.cfg.strict_mode:
                self._strict_check()
            rec = _LayerRec()
            self.layers.append(rec)
            added = self._extend(rec, self._active_for(len(self.layers) - 1))
            self.max_ell = max(self.max_ell, len(self.layers))
            passes, superposed, grew = self._collapse()
            self.collapse_passes += passes
            sig = signature(self.snapshot())
            if self.cfg.strict_mode and not sig < self.signatures[-1]:
                raise EngineInvariantError(
                    f"signature did not decrease: {self.signatures[-1].canonical()} "
                    f"-> {sig.canonical()}")
            self.signatures.append(sig)
            event = classify_event(passes, superposed, grew)
            line = (f"{self.iterations} {len(self.layers)} "
                    f"{len(self.matching)} {sig.hash12()} {event}")
            self.trace.append(line)
            if trace_cb:
                trace_cb(line)
            if not added and passes == 0:
                raise NoProgressError("no progress within bound: stalled",
                                      sig, self.iterations)
        return EngineResult(
            matching=frozenset(self.matching),
            iterations=self.iterations,
            collapse_passes=self.collapse_passes,
            max_ell=self.max_ell,
            signatures=tuple(self.signatures),
            trace=tuple(self.trace),
        )


def run_engine(host, cfg: EngineConfig, oracle=None,
               trace_cb: Optional[Callable[[str], None]] = None) -> EngineResult:
    return Engine(host, cfg, oracle=oracle).run(trace_cb=trace_cb)


def hypergraph_matching(h, cfg: EngineConfig) -> frozenset[int]:
    """Compute a perfect matching of an explicit bipartite hypergraph.

    Returns the matching edge ids; raises NoProgressError when the engine
    cannot certify progress (the instance then most likely violates the
    strong Haxell condition).
    """
    from .hypergraph import validate

    problem = validate(h)
    if problem is not None:
        raise ValueError(f"invalid hypergraph: {problem}")
    return run_engine(h, cfg).matching
