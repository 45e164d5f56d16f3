import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from edgeoracle import generators
from edgeoracle.bis_estimator import (
    BisParams,
    EstimatorState,
    WeightedPair,
    bis_estimate_degree,
    bis_estimate_edges,
    check_estimate,
    cleanup,
    coarse_estimator,
    coarse_with,
    reduce_triples,
    refine,
    refine_triple,
)
from edgeoracle.errors import InvalidParams, SetsNotDisjoint
from edgeoracle.graph import VertexSet, build_graph, true_edges_between
from edgeoracle.oracles import OracleSession

from conftest import all_graphs


def halves(n):
    return VertexSet(n, range(n // 2)), VertexSet(n, range(n // 2, n))


class TestParams:
    def test_practical_values(self):
        p = BisParams.practical(512, 0.2)
        assert p.L_small == math.ceil(25 * 81) and p.L_len == math.ceil(25 * 729)
        assert p.exact_threshold == 2 * p.L_small
        assert p.max_rounds == 36 and p.trials(512) == 72 and p.k_refine == 4

    def test_practical_floors(self):
        p = BisParams.practical(2, 0.9)
        assert p.L_small == 8 and p.L_len == 16 and p.trials(2) == 16

    def test_theory_values(self):
        p = BisParams.theory(256, 0.5)
        assert p.L_small == 4 * 8**4 and p.L_len == 4 * 8**8 and p.trials(256) == 128 * 8

    @pytest.mark.parametrize("bad", [dict(eps=0.0), dict(eps=1.0), dict(k_refine=1), dict(L_small=0), dict(max_rounds=0)])
    def test_invalid(self, bad):
        with pytest.raises(InvalidParams):
            BisParams.practical(**{"n": 64, "eps": 0.3, **bad})

    def test_unknown_preset(self):
        with pytest.raises(InvalidParams):
            BisParams.preset_for("fast", 64, 0.3)


class TestCheckEstimate:
    def test_never_accepts_without_edges(self):
        rng = np.random.default_rng(0)
        for n in range(2, 6):
            for g in all_graphs(n):
                sess = OracleSession(g)
                for colors in itertools.product(range(3), repeat=n):
                    s = [i for i, c in enumerate(colors) if c == 1]
                    v = [i for i, c in enumerate(colors) if c == 2]
                    if true_edges_between(g, s, v) == 0:
                        assert not check_estimate(sess, s, v, 1, rng)

    def test_query_cap(self, rng):
        g = generators.complete(64)
        sess = OracleSession(g)
        for _ in range(50):
            before = sess.ledger.bis_count
            check_estimate(sess, range(32), range(32, 64), 1e6, rng)
            assert sess.ledger.bis_count - before <= 1 + 6

    def test_overlap(self, rng):
        with pytest.raises(SetsNotDisjoint):
            check_estimate(OracleSession(generators.path(4)), {0, 1}, {1}, 2, rng)

    def test_invalid_guess(self, rng):
        with pytest.raises(InvalidParams):
            check_estimate(OracleSession(generators.path(4)), {0}, {1}, 0.5, rng)

    def test_accept_rates(self):
        g = generators.random_bipartite(32, 32, 0.3, np.random.default_rng(1))
        n, m = g.n, g.m
        s, v = halves(n)
        sess = OracleSession(g)
        lg = math.log2(n)
        rng = np.random.default_rng(2)
        high = np.mean([check_estimate(sess, s, v, 4 * m * (lg + 1), rng) for _ in range(2000)])
        low = np.mean([check_estimate(sess, s, v, max(1.0, m / (4 * lg)), rng) for _ in range(2000)])
        assert high <= 0.30 and low >= 0.45


class TestCoarse:
    def test_zero(self, rng):
        g = build_graph(8, [(0, 1)])
        sess = OracleSession(g)
        res = coarse_estimator(sess, {0, 2}, {3, 4}, BisParams.practical(8, 0.5), rng)
        assert res.value == 0 and sess.ledger.bis_count == 1

    def test_power_of_two_and_cap(self, rng):
        for g in (generators.complete(32), generators.star(32), generators.erdos_renyi(32, 0.2, rng)):
            s, v = halves(g.n)
            for _ in range(5):
                val = coarse_estimator(OracleSession(g), s, v, BisParams.practical(g.n, 0.5), rng).value
                assert val == 0 or (val & (val - 1)) == 0
                assert val <= g.n**2

    def test_bracket_complete_bipartite(self):
        g = generators.random_bipartite(16, 16, 1.0, np.random.default_rng(0))
        g = build_graph(64, g.edges)
        s, v = VertexSet(64, range(16)), VertexSet(64, range(16, 32))
        lg = math.log2(64)
        params = BisParams.practical(64, 0.5)
        ok = 0
        for seed in range(50):
            val = coarse_estimator(OracleSession(g), s, v, params, np.random.default_rng(seed)).value
            ok += 256 / (8 * lg) <= val <= 256 * 8 * lg
        assert ok >= 48

    def test_fall_through_flag(self, rng):
        # a cross query that never reports an edge after the first call
        calls = iter([False])
        res = coarse_with(lambda a, b: next(calls, True), np.arange(4), np.arange(4, 8), 8, 4, rng)
        assert res.value == 1 and res.fell_through


class TestStateOperations:
    def test_cleanup_preserves_tracked_value(self):
        g = generators.erdos_renyi(40, 0.3, np.random.default_rng(0))
        sess = OracleSession(g)
        s, v = halves(40)
        state = EstimatorState(0.0, [WeightedPair(s, v, 2.0), WeightedPair(VertexSet(40, range(5)), VertexSet(40, range(5, 9)), 8.0)])
        before = state.tracked_value(g)
        cleanup(sess, state, 10)
        assert state.tracked_value(g) == before
        assert len(state.triples) == 1

    def test_refine_exact_expectation(self):
        # enumerate every 4-coloring of both sides of an 8-vertex pair
        g = generators.erdos_renyi(8, 0.5, np.random.default_rng(3))
        t = WeightedPair(VertexSet(8, range(4)), VertexSet(8, range(4, 8)), 2.0)
        k = 4
        total = Fraction(0)
        count = 0
        for cs in itertools.product(range(k), repeat=4):
            for cv in itertools.product(range(k), repeat=4):
                out = refine_triple(t, k, np.array(cs), np.array(cv))
                total += sum(Fraction(p.w) * true_edges_between(g, p.S, p.V) for p in out)
                count += 1
        assert total / count == Fraction(t.w) * true_edges_between(g, t.S, t.V)

    def test_refine_statistical(self):
        g = generators.erdos_renyi(256, 0.1, np.random.default_rng(0))
        s, v = halves(256)
        target = 2.0 * true_edges_between(g, s, v)
        vals = []
        for seed in range(400):
            state = EstimatorState(0.0, [WeightedPair(s, v, 2.0)])
            refine(state, 4, np.random.default_rng(seed))
            vals.append(state.tracked_value(g))
        se = np.std(vals) / math.sqrt(len(vals))
        assert abs(np.mean(vals) - target) <= 3 * se

    def test_refine_weights(self, rng):
        s, v = halves(64)
        state = EstimatorState(0.0, [WeightedPair(s, v, 2.0)])
        refine(state, 4, rng)
        assert len(state.triples) <= 4 and all(t.w == 8.0 for t in state.triples)

    def test_reduce_keeps_bounded_list(self, rng):
        g = generators.erdos_renyi(64, 0.5, np.random.default_rng(0))
        sess = OracleSession(g)
        pieces = [WeightedPair(VertexSet(64, [2 * i]), VertexSet(64, [2 * i + 1]), 4.0) for i in range(32)]
        state = EstimatorState(0.0, pieces)
        params = BisParams.practical(64, 0.5, L_len=24)
        reduce_triples(sess, state, params, 64, rng)
        h = math.ceil(math.log2(64**2))
        assert len(state.triples) <= max(1, 24 // h) * h
        assert all(true_edges_between(g, t.S, t.V) > 0 for t in state.triples)


class TestEstimator:
    def test_empty_graph(self, rng):
        rep = bis_estimate_edges(OracleSession(generators.empty(50)), BisParams.practical(50, 0.2), rng)
        assert rep.estimate == 0 and rep.exact_flag

    def test_small_exact(self, rng):
        g = generators.erdos_renyi(100, 0.05, np.random.default_rng(0))
        rep = bis_estimate_edges(OracleSession(g), BisParams.practical(100, 0.2), rng)
        assert rep.exact_flag and rep.estimate == g.m

    def test_accuracy(self):
        g = generators.erdos_renyi(256, 0.15, np.random.default_rng(0))
        errs = []
        for seed in range(20):
            rep = bis_estimate_edges(OracleSession(g), BisParams.practical(256, 0.2), np.random.default_rng(seed), seed=seed)
            assert not rep.exact_flag
            errs.append(abs(rep.estimate - g.m) / g.m)
        assert np.mean(np.array(errs) <= 0.2) >= 0.9

    def test_round_cap_fallback(self, rng):
        g = generators.complete(64)
        params = BisParams.practical(64, 0.5, L_small=1, exact_threshold=2, max_rounds=1)
        rep = bis_estimate_edges(OracleSession(g), params, rng)
        assert rep.fallback_flag and "round_cap" in rep.flags and rep.rounds == 1
        assert abs(rep.estimate - g.m) / g.m < 0.5

    def test_reduce_path(self):
        g = generators.erdos_renyi(128, 0.5, np.random.default_rng(0))
        params = BisParams.practical(128, 0.5, L_small=4, L_len=8, exact_threshold=8)
        ests = [bis_estimate_edges(OracleSession(g), params, np.random.default_rng(s)).estimate for s in range(10)]
        assert abs(np.median(ests) - g.m) / g.m < 0.5

    def test_reproducible(self):
        g = generators.erdos_renyi(200, 0.2, np.random.default_rng(0))
        a = bis_estimate_edges(OracleSession(g), BisParams.practical(200, 0.2), np.random.default_rng(7), seed=7)
        b = bis_estimate_edges(OracleSession(g), BisParams.practical(200, 0.2), np.random.default_rng(7), seed=7)
        assert a == b and a.to_json() == b.to_json()

    def test_ledger_exact(self, call_counter):
        g = generators.erdos_renyi(200, 0.2, np.random.default_rng(0))
        sess = OracleSession(g)
        rep = bis_estimate_edges(sess, BisParams.practical(200, 0.2), np.random.default_rng(1))
        assert rep.queries == {"bis": call_counter.bis, "is": 0}

    def test_report_json_keys(self, rng):
        rep = bis_estimate_edges(OracleSession(generators.path(10)), BisParams.practical(10, 0.3), rng, seed=3)
        d = rep.to_dict()
        assert {"estimate", "exact_flag", "fallback_flag", "rounds", "queries", "seed", "preset"} <= set(d)
        assert d["seed"] == 3 and d["preset"] == "practical"


class TestDegree:
    def test_isolated(self, rng):
        g = build_graph(20, [(0, 1)])
        assert bis_estimate_degree(OracleSession(g), 7, 0.2, rng).estimate == 0

    @pytest.mark.parametrize("v", [0, 5, 19])
    def test_clique_vertex(self, v):
        g = generators.complete(20)
        vals = [bis_estimate_degree(OracleSession(g), v, 0.25, np.random.default_rng(s)).estimate for s in range(20)]
        assert np.mean([abs(x - 19) <= 0.25 * 19 for x in vals]) >= 0.9

    def test_only_bis_queries(self, rng):
        sess = OracleSession(generators.star(64))
        rep = bis_estimate_degree(sess, 0, 0.3, rng)
        assert rep.queries["is"] == 0 and rep.queries["bis"] == sess.ledger.bis_count > 0
