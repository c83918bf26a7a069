import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from expaths import hypergraph as hg
from expaths.hypergraph import BipartiteHypergraph, CapExceeded, Caps


def make(num_a, num_b, r, edges):
    return BipartiteHypergraph(num_a, num_b, r, edges)


@st.composite
def hypergraphs(draw, max_a=4, max_b=10, max_edges=10, max_rank=3):
    num_a = draw(st.integers(1, max_a))
    num_b = draw(st.integers(1, max_b))
    r = draw(st.integers(1, max_rank))
    m = draw(st.integers(0, max_edges))
    edges = []
    for _ in range(m):
        a = draw(st.integers(0, num_a - 1))
        bs = draw(st.frozensets(st.integers(0, num_b - 1), min_size=1,
                                max_size=min(r, num_b)))
        edges.append((a, sorted(bs)))
    return make(num_a, num_b, r, edges)


class TestValidate:
    def test_minimal_valid(self):
        h = make(2, 3, 2, [(0, [0]), (1, [1, 2])])
        assert hg.validate(h) is None

    def test_empty_b_part(self):
        h = make(1, 1, 1, [(0, [])])
        assert "empty B-part" in hg.validate(h)

    def test_rank_exceeds_bound(self):
        h = make(1, 2, 1, [(0, [0, 1])])
        assert "rank exceeds bound" in hg.validate(h)

    def test_duplicate_and_range(self):
        assert "duplicate" in hg.validate(make(1, 3, 3, [(0, [1, 1])]))
        assert "out of range" in hg.validate(make(1, 2, 2, [(0, [0, 5])]))
        assert "out of range" in hg.validate(make(1, 2, 2, [(3, [0])]))


class TestPerfectMatching:
    def test_single_edge(self):
        h = make(1, 1, 1, [(0, [0])])
        assert hg.is_perfect_matching(h, [0])

    def test_b_collision(self):
        h = make(2, 1, 1, [(0, [0]), (1, [0])])
        assert not hg.is_perfect_matching(h, [0, 1])

    def test_valid_but_not_perfect(self):
        h = make(2, 2, 1, [(0, [0]), (1, [1])])
        assert not hg.is_perfect_matching(h, [0])
        assert hg.is_matching(h, [0])

    def test_unknown_edge_id(self):
        h = make(1, 1, 1, [(0, [0])])
        with pytest.raises(ValueError):
            hg.is_perfect_matching(h, [7])


class TestBlockingEdges:
    def test_one_overlap(self):
        h = make(2, 3, 2, [(0, [1, 2]), (1, [0, 1])])
        assert hg.blocking_edges(h, 1, {0}) == {0}

    def test_disjoint(self):
        h = make(2, 4, 2, [(0, [0, 1]), (1, [2, 3])])
        assert hg.blocking_edges(h, 1, {0}) == frozenset()

    def test_two_blockers_enumerated(self):
        # derived by enumerating the matching and testing B-intersections
        h = make(3, 4, 2, [(0, [0]), (1, [3]), (2, [0, 3])])
        m = {0, 1}
        expected = {f for f in m if h.edge_b(f) & h.edge_b(2)}
        assert expected == {0, 1}
        assert hg.blocking_edges(h, 2, m) == expected

    @given(hypergraphs())
    @settings(max_examples=60, deadline=None)
    def test_blockers_subset_and_disjoint(self, h):
        # grow a matching greedily, then blockers must sit inside it and be
        # pairwise B-disjoint by the matching property
        matching = []
        used_b = set()
        used_a = set()
        for eid in range(h.num_edges):
            e = h.edges[eid]
            if e.a not in used_a and not (h.edge_b(eid) & used_b):
                matching.append(eid)
                used_a.add(e.a)
                used_b.update(e.b)
        for eid in range(h.num_edges):
            bl = hg.blocking_edges(h, eid, matching)
            assert bl <= set(matching)
            seen = set()
            for f in bl:
                assert not (h.edge_b(f) & seen)
                seen |= h.edge_b(f)


class TestTau:
    def test_two_disjoint_edges(self):
        h = make(1, 2, 1, [(0, [0]), (0, [1])])
        assert hg.min_hitting_set_size(h, {0}) == 2

    def test_empty_incidence(self):
        h = make(2, 2, 1, [(1, [0])])
        assert hg.min_hitting_set_size(h, {0}) == 0

    def test_common_vertex(self):
        # three pairwise overlapping edges through one shared b
        h = make(1, 4, 2, [(0, [0, 1]), (0, [0, 2]), (0, [0, 3])])
        assert hg.min_hitting_set_size(h, {0}) == 1

    def test_cap(self):
        h = make(1, 30, 1, [(0, [b]) for b in range(30)])
        with pytest.raises(CapExceeded):
            hg.min_hitting_set_size(h, {0})
        assert hg.min_hitting_set_size(h, {0}, Caps(tau_b=30)) == 30

    def test_against_exhaustive(self):
        rng = random.Random(7)
        for _ in range(40):
            num_b = rng.randint(2, 8)
            edges = []
            for _ in range(rng.randint(1, 8)):
                k = rng.randint(1, min(3, num_b))
                edges.append((0, rng.sample(range(num_b), k)))
            h = make(1, num_b, 3, edges)
            assert (hg.min_hitting_set_size(h, {0})
                    == oracles.exhaustive_tau(h, {0}))

    @given(hypergraphs(max_a=3, max_b=7, max_edges=7))
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_s(self, h):
        import itertools

        values = {}
        for size in range(0, h.num_a + 1):
            for s in itertools.combinations(range(h.num_a), size):
                values[frozenset(s)] = hg.min_hitting_set_size(h, s)
        for s, tau_s in values.items():
            for s2, tau_s2 in values.items():
                if s <= s2:
                    assert tau_s <= tau_s2


class TestStrongHaxell:
    def test_single_edge(self):
        h = make(1, 1, 1, [(0, [0])])
        assert hg.verify_strong_haxell(h, Fraction(1))

    def test_isolated_a_vertex_fails(self):
        h = make(2, 2, 1, [(0, [0])])
        assert not hg.verify_strong_haxell(h, Fraction(1, 2))

    def test_against_exhaustive(self):
        rng = random.Random(11)
        for _ in range(25):
            edges = []
            for _ in range(rng.randint(1, 14)):
                a = rng.randrange(4)
                k = rng.randint(1, 2)
                edges.append((a, rng.sample(range(12), k)))
            h = make(4, 12, 2, edges)
            for phi in (Fraction(1), Fraction(3, 2), Fraction(2)):
                assert (hg.verify_strong_haxell(h, phi)
                        == oracles.exhaustive_strong_haxell(h, phi))

    def test_cap(self):
        h = make(17, 1, 1, [(a, [0]) for a in range(17)])
        with pytest.raises(CapExceeded):
            hg.verify_strong_haxell(h, Fraction(1))


class TestBruteForce:
    def test_disjoint_edges(self):
        h = make(3, 3, 1, [(0, [0]), (1, [1]), (2, [2])])
        assert hg.brute_force_perfect_matching(h) == {0, 1, 2}

    def test_shared_b_infeasible(self):
        h = make(2, 1, 1, [(0, [0]), (1, [0])])
        assert hg.brute_force_perfect_matching(h) is None

    def test_against_subset_oracle(self):
        rng = random.Random(3)
        for _ in range(30):
            num_a = rng.randint(1, 4)
            num_b = rng.randint(1, 6)
            edges = []
            for _ in range(rng.randint(0, 9)):
                a = rng.randrange(num_a)
                k = rng.randint(1, min(2, num_b))
                edges.append((a, rng.sample(range(num_b), k)))
            h = make(num_a, num_b, 2, edges)
            found = hg.brute_force_perfect_matching(h)
            exists = oracles.exhaustive_perfect_matching_exists(h)
            assert (found is not None) == exists
            if found is not None:
                assert hg.is_perfect_matching(h, found)

    @given(hypergraphs(max_a=3, max_b=6, max_edges=8, max_rank=2))
    @settings(max_examples=60, deadline=None)
    def test_haxell_implies_matching(self, h):
        # phi >= 4r^2 guarantees existence; never co-occurs with brute none
        r = max((e.rank for e in h.edges), default=1)
        if hg.validate(h) is not None:
            return
        if hg.verify_strong_haxell(h, Fraction(4 * r * r)):
            assert hg.brute_force_perfect_matching(h) is not None

    @given(hypergraphs())
    @settings(max_examples=40, deadline=None)
    def test_perfect_covers_each_a_once(self, h):
        found = hg.brute_force_perfect_matching(h)
        if found is None:
            return
        seen = [h.edge_a(eid) for eid in found]
        assert sorted(seen) == list(range(h.num_a))


class TestIO:
    def test_roundtrip(self):
        h = make(2, 4, 3, [(0, [0, 2, 3]), (1, [1])])
        text = hg.dumps_hypergraph(h)
        assert text.splitlines()[0] == "2 4 2 3"
        h2 = hg.loads_hypergraph(text)
        assert h2.num_a == 2 and h2.num_b == 4 and h2.rank_bound == 3
        assert [(e.a, e.b) for e in h2.edges] == [(e.a, e.b) for e in h.edges]

    def test_matching_roundtrip(self):
        text = hg.dumps_matching({3, 1})
        assert text == "1\n3\n"
        assert hg.loads_matching(text) == {1, 3}

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            hg.loads_hypergraph("")
        with pytest.raises(ValueError):
            hg.loads_hypergraph("1 1 2 1\n0 1 0\n")
        with pytest.raises(ValueError):
            hg.loads_hypergraph("1 1 1 1\n0 2 0\n")

    def test_volume(self):
        h = make(2, 4, 3, [(0, [0, 2, 3]), (1, [1])])
        assert h.volume == 4 + 2
        assert h.n_value == 6
