import random
from fractions import Fraction

import pytest

import oracles
from expaths import engine as eng
from expaths import hypergraph as hg
from expaths.engine import (
    AlternatingForest,
    EngineConfig,
    NoProgressError,
    Signature,
    floor_log_1p01,
    signature,
)
from expaths.halflayer import HalfLayerOracleSpec, HalfLayerState, Layer
from expaths.hypergraph import BipartiteHypergraph


def make(num_a, num_b, r, edges):
    return BipartiteHypergraph(num_a, num_b, r, edges)


def cfg4(**kw):
    return EngineConfig(delta=kw.pop("delta", 4), **kw)


def reference_floor_log(n: int) -> int:
    # independent linear scan with exact fractions
    power = Fraction(1)
    step = Fraction(101, 100)
    j = 0
    while power * step <= n:
        power *= step
        j += 1
    return j


class TestFloorLog:
    def test_small_values(self):
        for n in [1, 2, 3, 5, 10, 25, 100, 101, 125, 1000]:
            assert floor_log_1p01(n) == reference_floor_log(n)

    def test_frozen_spec_values(self):
        assert floor_log_1p01(25) == 323
        assert floor_log_1p01(125) == 485

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            floor_log_1p01(0)


class TestSignature:
    def test_root_only(self):
        forest = AlternatingForest(frozenset({0, 1, 2}), ())
        sig = signature(forest)
        assert sig.psi == ((0, floor_log_1p01(5 * 3)),)

    def test_frozen_pair(self):
        forest = AlternatingForest(
            frozenset({0}),
            (Layer(frozenset({1}), frozenset({2})),))
        sig = signature(forest)
        assert sig.psi[1] == (-323, 485)

    def test_log_zero_convention(self):
        forest = AlternatingForest(frozenset(), ())
        assert signature(forest).psi == ((0, 0),)

    def test_lexicographic_order_with_sentinel(self):
        shorter = Signature(((0, 5),))
        longer = Signature(((0, 5), (-3, 4)))
        # appending a layer strictly decreases (pair < infinity sentinel)
        assert longer < shorter
        assert Signature(((0, 4),)) < Signature(((0, 5),))
        assert Signature(((-1, 5),)) < Signature(((0, 5),))
        assert not Signature(((0, 5),)) < Signature(((0, 5),))

    def test_hash_is_stable(self):
        sig = Signature(((0, 5), (-3, 4)))
        assert sig.hash12() == Signature(((0, 5), (-3, 4))).hash12()
        assert len(sig.hash12()) == 12
        assert sig.canonical() == "0,5;-3,4;INF"


class TestAddableEdge:
    def test_fresh_forest_single_edge(self):
        h = make(1, 1, 1, [(0, [0])])
        forest = AlternatingForest(frozenset({0}), ())
        assert eng.addable_edge(h, forest, [], [], 0, cfg4()) == 0

    def test_degree_cap(self):
        h = make(1, 3, 1, [(0, [0]), (0, [1]), (0, [2])])
        forest = AlternatingForest(frozenset({0}), ())
        cfg = cfg4(delta=2)
        assert eng.addable_edge(h, forest, [0, 1], [], 0, cfg) is None

    def test_rejects_overlap_accepts_other(self):
        # two-layer forest built by hand; exhaustive disjointness check
        h = make(3, 5, 2,
                 [(0, [0]),            # matched, blocks edge 1
                  (1, [0, 1]),         # X_1
                  (2, [2]),            # a2's edge overlapping B(Y_1)? no: b2
                  (0, [1, 3]),         # overlaps B(X_1) via b1
                  (0, [4])])           # clean
        forest = AlternatingForest(
            frozenset({1, 2}),
            (Layer(frozenset({1}), frozenset({0})),))
        cfg = cfg4()
        # edge 3 overlaps b1 in B(X_1); edge 4 is the accepted alternative
        assert eng.addable_edge(h, forest, [], [], 0, cfg) == 4
        forbidden = set()
        for layer in forest.layers:
            for eid in layer.x | layer.y:
                forbidden |= h.edge_b(eid)
        assert h.edge_b(3) & forbidden
        assert not h.edge_b(4) & forbidden


class TestBuildLayer:
    def test_no_candidates_returns_seed(self):
        h = make(2, 2, 1, [(1, [1])])
        forest = AlternatingForest(frozenset({0}), ())
        layer = eng.build_layer(h, forest, frozenset(), frozenset(), cfg4(),
                                frozenset())
        assert layer == Layer(frozenset(), frozenset())

    def test_single_unmatched_a(self):
        h = make(1, 1, 1, [(0, [0])])
        forest = AlternatingForest(frozenset({0}), ())
        layer = eng.build_layer(h, forest, frozenset(), frozenset(), cfg4(),
                                frozenset())
        assert layer == Layer(frozenset({0}), frozenset())

    def test_seeded_vs_quadratic_reference(self):
        rng = random.Random(13)
        for _ in range(25):
            num_a = rng.randint(1, 4)
            num_b = rng.randint(2, 8)
            edges = [(rng.randrange(num_a),
                      rng.sample(range(num_b), rng.randint(1, 2)))
                     for _ in range(rng.randint(1, 10))]
            h = make(num_a, num_b, 2, edges)
            matching = []
            used_a, used_b = set(), set()
            for eid in range(h.num_edges):
                if h.edge_a(eid) not in used_a and not (h.edge_b(eid) & used_b):
                    matching.append(eid)
                    used_a.add(h.edge_a(eid))
                    used_b.update(h.edge_b(eid))
            forest = AlternatingForest(
                frozenset(range(num_a)) - used_a, ())
            cfg = cfg4(delta=2)
            built = eng.build_layer(h, forest, frozenset(), frozenset(), cfg,
                                    frozenset(matching))
            state = HalfLayerState(forest.unmatched_a, frozenset(),
                                   frozenset(matching), 2)
            ref = oracles.quadratic_reference_half_layer(h, state, 2)
            assert built == ref


def five_edge_instance():
    """Two-layer forest where one swap frees a blocker: edges
    e0=(a0;b0) matched, e3=(a2;b1,b3) matched, e1=(a1;b0,b1) in X_1 blocked
    by both, e2=(a0;b2) immediately addable in X_2, e4=(a1;b0) decoy."""
    h = make(3, 5, 2, [(0, [0]), (1, [0, 1]), (0, [2]), (2, [1, 3]),
                       (1, [0])])
    matching = frozenset({0, 3})
    forest = AlternatingForest(
        frozenset({1}),
        (Layer(frozenset({1}), frozenset({0, 3})),
         Layer(frozenset({2}), frozenset())))
    return h, forest, matching


class TestCollapseForest:
    def test_noop_when_criterion_fails(self):
        # the single X_1 edge is blocked, so no immediately addable edges
        h = make(2, 2, 2, [(0, [0]), (1, [0, 1])])
        matching = frozenset({0})
        forest = AlternatingForest(
            frozenset({1}),
            (Layer(frozenset({1}), frozenset({0})),))
        res = eng.collapse_forest(h, forest, matching, cfg4(delta=2))
        assert res.passes == 0
        assert res.forest == forest and res.matching == matching

    def test_ell_one_growth(self):
        h = make(1, 1, 1, [(0, [0])])
        forest = AlternatingForest(frozenset({0}),
                                   (Layer(frozenset({0}), frozenset()),))
        res = eng.collapse_forest(h, forest, frozenset(), cfg4())
        assert res.matching == {0}
        assert res.forest.unmatched_a == frozenset()
        assert res.forest.ell == 0
        assert res.matching_grew

    def test_two_layer_swap_frees_blocker(self):
        # hand trace: the swap replaces e0 by e2 in M, Y_1 shrinks to {e3},
        # the superpose-build is rejected (decoy e4 overlaps b0), and the
        # while loop stops at ell=1 because e1 is still blocked by e3.
        h, forest, matching = five_edge_instance()
        cfg = cfg4(delta=2)
        res = eng.collapse_forest(h, forest, matching, cfg)
        assert res.matching == {2, 3}
        assert len(res.matching) == len(matching)
        assert res.forest.ell == 1
        assert res.forest.layers[0] == Layer(frozenset({1}), frozenset({3}))
        assert res.passes == 1
        assert res.superpose_accepted == 0
        assert not res.matching_grew
        assert not eng.validate_forest(h, res.forest, res.matching, 2,
                                       cfg.mu)

    def test_five_edge_instance_stalls_identically(self):
        # without strong Haxell the engine may stall even though a perfect
        # matching exists; both engines must stall at the same point
        import reference_engine as re_mod

        h, _, _ = five_edge_instance()
        assert hg.brute_force_perfect_matching(h) is not None
        cfg = cfg4(delta=2)
        opt_engine = eng.Engine(h, cfg)
        with pytest.raises(NoProgressError) as opt_err:
            opt_engine.run()
        ref_engine = re_mod.ReferenceEngine(h, cfg)
        with pytest.raises(NoProgressError) as ref_err:
            ref_engine.run()
        assert opt_err.value.iterations == ref_err.value.iterations
        assert re_mod.diff_traces(tuple(opt_engine.trace),
                                  tuple(ref_engine.trace)) == ""

    def test_six_edge_replay_swap_then_cascade(self):
        # adding (a2;{b4}) makes the run finish: the ell=2 pass swaps both
        # blockers out, which makes X_1 immediately addable in the next pass
        import reference_engine as re_mod

        h5, _, _ = five_edge_instance()
        edges = [(e.a, list(e.b)) for e in h5.edges] + [(2, [4])]
        h = make(3, 5, 2, edges)
        cfg = cfg4(delta=2, strict_mode=True)
        opt = eng.run_engine(h, cfg)
        ref = re_mod.ReferenceEngine(h, cfg).run()
        assert re_mod.diff_traces(opt.trace, ref.trace) == ""
        assert opt.matching == ref.matching == {1, 2, 5}
        assert hg.is_perfect_matching(h, opt.matching)
        # the final iteration both swaps at depth and grows the matching
        assert opt.trace[-1].endswith("swap")
        assert opt.iterations == 3


class TestEngineRuns:
    def test_disjoint_edges(self):
        h = make(4, 4, 1, [(0, [0]), (1, [1]), (2, [2]), (3, [3])])
        result = eng.run_engine(h, cfg4(strict_mode=True))
        assert hg.is_perfect_matching(h, result.matching)
        assert result.iterations == 1

    def test_zero_degree_vertex_errors(self):
        h = make(2, 1, 1, [(0, [0])])
        with pytest.raises(NoProgressError) as exc_info:
            eng.run_engine(h, cfg4())
        assert exc_info.value.signature is not None

    def test_empty_a(self):
        h = make(0, 1, 1, [])
        result = eng.run_engine(h, cfg4())
        assert result.matching == frozenset()
        assert result.iterations == 0

    def test_agreement_with_brute_force_on_haxell_instances(self):
        rng = random.Random(17)
        checked = 0
        for _ in range(60):
            num_a = rng.randint(1, 4)
            num_b = rng.randint(4 * num_a, 4 * num_a + 10)
            edges = []
            for a in range(num_a):
                degree = rng.randint(max(1, 4 * num_a - 2), num_b)
                for b in rng.sample(range(num_b), degree):
                    edges.append((a, [b]))
            h = make(num_a, num_b, 1, edges)
            if not hg.verify_strong_haxell(h, Fraction(4)):
                continue
            checked += 1
            result = eng.run_engine(h, cfg4(strict_mode=True))
            assert hg.is_perfect_matching(h, result.matching)
            assert hg.brute_force_perfect_matching(h) is not None
        assert checked >= 20

    def test_signatures_strictly_decrease(self):
        h = make(3, 12, 1, [(a, [b]) for a in range(3) for b in range(12)])
        result = eng.run_engine(h, cfg4(strict_mode=True))
        sigs = result.signatures
        for earlier, later in zip(sigs, sigs[1:]):
            assert later < earlier

    def test_collapse_passes_equal_iterations_on_success(self):
        rng = random.Random(23)
        for _ in range(20):
            num_a = rng.randint(1, 4)
            num_b = rng.randint(4 * num_a, 16)
            edges = [(a, [b]) for a in range(num_a)
                     for b in rng.sample(range(num_b), 4 * num_a)]
            h = make(num_a, num_b, 1, edges)
            if not hg.verify_strong_haxell(h, Fraction(4)):
                continue
            result = eng.run_engine(h, cfg4(strict_mode=True))
            assert result.collapse_passes == result.iterations

    def test_iteration_cap_override(self):
        h = make(2, 1, 1, [(0, [0]), (1, [0])])
        with pytest.raises(NoProgressError):
            eng.run_engine(h, cfg4(iteration_cap=3))

    def test_trace_format(self):
        h = make(1, 1, 1, [(0, [0])])
        result = eng.run_engine(h, cfg4())
        assert len(result.trace) == 1
        fields = result.trace[0].split()
        assert fields[0] == "1" and fields[1] == "0" and fields[2] == "1"
        assert fields[4] == "swap"

    def test_default_cap_formula(self):
        assert eng.default_iteration_cap(2, 4) >= 4
        assert eng.default_iteration_cap(30, 4) > 1000


class TestThrottledEngine:
    def test_faster_variant_still_matches(self):
        # disjoint sunflower; the throttle halves every build
        edges = [(a, [a * 10 + i]) for a in range(3) for i in range(10)]
        h = make(3, 30, 1, edges)
        spec = HalfLayerOracleSpec(kind="throttled-test",
                                   approx_alpha=Fraction(2))
        result = eng.run_engine(h, EngineConfig(delta=8, oracle=spec,
                                                strict_mode=True))
        assert hg.is_perfect_matching(h, result.matching)
        assert result.iterations >= 1

    def test_oracle_resolution_errors(self):
        h = make(1, 1, 1, [(0, [0])])
        spec = HalfLayerOracleSpec(kind="graph-bfs")
        with pytest.raises(ValueError):
            eng.make_oracle(h, spec)

    def test_rank_limit_validation(self):
        h = make(1, 1, 1, [(0, [0])])
        spec = HalfLayerOracleSpec(rank_limit=5)
        with pytest.raises(ValueError):
            eng.run_engine(h, EngineConfig(delta=2, oracle=spec))


class TestEngineVsReference:
    def test_random_instances_identical_traces(self):
        import reference_engine as re_mod

        rng = random.Random(31)
        compared = 0
        for _ in range(30):
            num_a = rng.randint(1, 4)
            num_b = rng.randint(3, 10)
            edges = [(rng.randrange(num_a),
                      rng.sample(range(num_b), rng.randint(1, 2)))
                     for _ in range(rng.randint(1, 12))]
            h = make(num_a, num_b, 2, edges)
            cfg = cfg4(delta=2, iteration_cap=200)
            try:
                opt = eng.run_engine(h, cfg)
                opt_outcome = ("ok", opt.trace, opt.matching)
            except NoProgressError as exc:
                opt_outcome = ("fail", exc.iterations, None)
            ref_engine = re_mod.ReferenceEngine(h, cfg)
            try:
                ref = ref_engine.run()
                ref_outcome = ("ok", ref.trace, ref.matching)
            except NoProgressError as exc:
                ref_outcome = ("fail", exc.iterations, None)
            if opt_outcome[0] == "ok":
                assert ref_outcome[0] == "ok"
                assert re_mod.diff_traces(opt_outcome[1], ref_outcome[1]) == ""
                assert opt_outcome[2] == ref_outcome[2]
            else:
                assert ref_outcome[0] == "fail"
                assert opt_outcome[1] == ref_outcome[1]
            compared += 1
        assert compared == 30
