import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeoracle import generators
from edgeoracle.errors import InvalidParams, InvalidPartCount, SetsNotDisjoint
from edgeoracle.graph import VertexSet, build_graph, true_edges_between
from edgeoracle.outcomes import Below, Estimate
from edgeoracle.primitives import (
    WeightedItem,
    bucket_of,
    emptiness_size_estimate,
    importance_reduce,
    matched_pairs_from_coloring,
    membership_size_estimate,
    membership_size_test,
    reduction_sample_size,
    sparsify_matched_pairs,
)


def member_oracle(hidden: np.ndarray):
    return lambda q: hidden[q]


def empty_oracle(hidden: np.ndarray):
    return lambda q: not bool(np.any(hidden[q]))


class TestSparsify:
    def test_single_edge_half(self):
        g = build_graph(2, [(0, 1)])
        idx = np.arange(2)
        hits = 0
        for colors in itertools.product(range(2), repeat=2):
            (a, b), = matched_pairs_from_coloring(idx, np.array(colors), 1)
            hits += true_edges_between(g, VertexSet.from_indices(2, a), VertexSet.from_indices(2, b))
        assert hits / 4 == 0.5

    def test_part_a_is_a_partition(self, rng):
        s = VertexSet(40, range(40))
        res = sparsify_matched_pairs(s, 3, rng)
        assert res.scale == 6 and len(res.pairs) == 3
        classes = [c for pair in res.pairs for c in pair]
        for i, a in enumerate(classes):
            for b in classes[i + 1 :]:
                assert a.isdisjoint(b)

    def test_part_b(self, rng):
        s, v = VertexSet(20, range(10)), VertexSet(20, range(10, 20))
        res = sparsify_matched_pairs((s, v), 4, rng)
        assert res.scale == 4
        assert set().union(*(set(a) for a, _ in res.pairs)) == set(range(10))
        assert set().union(*(set(b) for _, b in res.pairs)) == set(range(10, 20))

    def test_part_b_needs_two_colors(self, rng):
        with pytest.raises(InvalidPartCount):
            sparsify_matched_pairs((VertexSet(2, [0]), VertexSet(2, [1])), 2, rng)

    def test_part_b_disjoint(self, rng):
        with pytest.raises(SetsNotDisjoint):
            sparsify_matched_pairs((VertexSet(4, [0, 1]), VertexSet(4, [1, 2])), 2, rng)

    def test_part_a_k_too_large(self, rng):
        with pytest.raises(InvalidPartCount):
            sparsify_matched_pairs(VertexSet(4, range(4)), 3, rng)

    def test_reproducible(self):
        s = VertexSet(100, range(100))
        a = sparsify_matched_pairs(s, 4, np.random.default_rng(9))
        b = sparsify_matched_pairs(s, 4, np.random.default_rng(9))
        assert a == b

    def test_exact_expectation_n6(self):
        # every pair of vertices lands in a matched pair for 2k of (2k)^2 color choices
        g = generators.erdos_renyi(6, 0.6, np.random.default_rng(0))
        idx = np.arange(6)
        for k in (1, 2):
            total = 0
            count = 0
            for colors in itertools.product(range(2 * k), repeat=6):
                for a, b in matched_pairs_from_coloring(idx, np.array(colors), k):
                    total += true_edges_between(g, VertexSet.from_indices(6, a), VertexSet.from_indices(6, b))
                count += 1
            assert total * 2 * k == g.m * count


class TestImportanceReduce:
    def test_passthrough(self, rng):
        items = [WeightedItem(i, 1.0 + i, 2.0) for i in range(10)]
        assert importance_reduce(items, 0.5, 0.1, 2.0, 1024.0, rng) == items

    def test_single(self, rng):
        items = [WeightedItem("x", 3.0, 5.0)]
        assert importance_reduce(items, 0.5, 0.1, 2.0, 64.0, rng) == items

    @pytest.mark.parametrize("bad", [dict(eps_a=1.0), dict(b=0.5), dict(M=0.5), dict(delta=0.0)])
    def test_invalid(self, rng, bad):
        args = dict(eps_a=0.5, delta=0.1, b=2.0, M=64.0)
        args.update(bad)
        with pytest.raises(InvalidParams):
            importance_reduce([WeightedItem(0, 1.0, 1.0)], rng=rng, **args)

    def test_rejects_small_weight(self, rng):
        with pytest.raises(InvalidParams):
            importance_reduce([WeightedItem(0, 0.5, 1.0)], 0.5, 0.1, 2.0, 64.0, rng)

    def test_buckets(self):
        assert bucket_of(1.0, 64) == 1
        assert bucket_of(1.99, 64) == 1
        assert bucket_of(2.0, 64) == 2
        assert bucket_of(63.0, 64) == 6
        assert bucket_of(64.0, 64) == 6  # closed top bucket
        assert bucket_of(64.0, 100) == 7

    def test_identical_items_mean(self):
        items = [WeightedItem(None, 1.0, 1.0) for _ in range(10_000)]
        alpha = reduction_sample_size(0.5, 0.1, 1.0, 14)
        assert alpha < 10_000
        sums = []
        for seed in range(1000):
            out = importance_reduce(items, 0.5, 0.1, 1.0, 10_000.0, np.random.default_rng(seed))
            assert len(out) == alpha
            sums.append(sum(it.w for it in out))
        assert abs(np.mean(sums) - 10_000) <= 100

    def test_bracket_failure_rate(self):
        # many light items of spread-out value plus one heavy bucket
        b = 2.0
        light = [WeightedItem(0.5 if i % 2 else 2.0, 1.0, 1.0) for i in range(20_000)]
        heavy = [WeightedItem(512.0 + 1536.0 * (i % 2), 1.0, 1024.0) for i in range(50)]
        items = light + heavy
        truth = sum(it.handle * it.w for it in items)
        eps_a, delta = 0.25, 0.05
        fails = 0
        trials = 1000
        for seed in range(trials):
            out = importance_reduce(items, eps_a, delta, b, 2.0**17, np.random.default_rng(seed))
            assert len(out) < len(items)
            y = sum(it.handle * it.w for it in out)
            fails += abs(y - truth) > eps_a * truth
        assert fails / trials <= 2 * delta

    def test_sample_size_override(self, rng):
        items = [WeightedItem(i, 1.0, 1.0) for i in range(100)]
        out = importance_reduce(items, 0.5, 0.1, 1.0, 128.0, rng, sample_size=10)
        assert len(out) == 10 and all(it.w == 10.0 for it in out)


class TestMembership:
    def test_empty_set(self, rng):
        hidden = np.zeros(1000, bool)
        for _ in range(20):
            assert isinstance(membership_size_test(member_oracle(hidden), 1000, 10, 0.5, 0.1, rng), Below)

    def test_full_set(self, rng):
        hidden = np.ones(1000, bool)
        res = membership_size_test(member_oracle(hidden), 1000, 10, 0.5, 0.1, rng)
        assert res == Estimate(1000.0, probes=res.probes)

    def test_bracket_rate(self):
        hidden = np.zeros(10_000, bool)
        hidden[:1000] = True
        ok = 0
        for seed in range(1000):
            res = membership_size_test(member_oracle(hidden), 10_000, 1000, 0.25, 0.01, np.random.default_rng(seed))
            ok += isinstance(res, Estimate) and (1 - 0.25) * res.value <= 1000 <= (1 + 0.25) * res.value
        assert ok / 1000 >= 0.99

    def test_invalid(self, rng):
        with pytest.raises(InvalidParams):
            membership_size_test(member_oracle(np.ones(4, bool)), 4, 0, 0.5, 0.1, rng)

    def test_estimate_saturated(self, rng):
        res = membership_size_estimate(member_oracle(np.ones(512, bool)), 512, 0.2, 0.01, rng)
        assert 0.8 * 512 <= res.value <= 1.2 * 512

    def test_estimate_single_member(self):
        hidden = np.zeros(256, bool)
        hidden[77] = True
        values = [membership_size_estimate(member_oracle(hidden), 256, 0.5, 0.05, np.random.default_rng(s)).value for s in range(100)]
        inside = np.mean([0.5 <= v <= 1.5 for v in values])
        assert inside >= 0.95

    def test_estimate_degenerate(self, rng):
        res = membership_size_estimate(member_oracle(np.zeros(64, bool)), 64, 0.5, 0.1, rng)
        assert res.value == 0 and res.degenerate

    def test_probe_count_half(self):
        eps_a, delta = 0.25, 0.01
        hidden = np.zeros(4096, bool)
        hidden[::2] = True
        probes = [membership_size_estimate(member_oracle(hidden), 4096, eps_a, delta, np.random.default_rng(s)).probes for s in range(20)]
        # fitted constant: the measured maximum ratio is 56
        assert max(probes) <= 60 * eps_a**-2 * math.log2(1 / delta)

    def test_estimate_needs_small_delta(self, rng):
        with pytest.raises(InvalidParams):
            membership_size_estimate(member_oracle(np.ones(64, bool)), 64, 0.5, 0.5, rng)


class TestEmptiness:
    def test_empty(self, rng):
        calls = []

        def oracle(q):
            calls.append(len(q))
            return True

        assert emptiness_size_estimate(oracle, 100, 0.3, rng) == Estimate(0.0, probes=1)
        assert calls == [100]

    @pytest.mark.slow
    def test_full_universe(self):
        hidden = np.ones(1024, bool)
        vals = [emptiness_size_estimate(empty_oracle(hidden), 1024, 0.2, np.random.default_rng(s)).value for s in range(200)]
        assert np.mean([819 <= v <= 1229 for v in vals]) >= 0.99

    @pytest.mark.slow
    def test_small_hidden_set(self):
        hidden = np.zeros(1024, bool)
        hidden[np.random.default_rng(0).choice(1024, 32, replace=False)] = True
        vals = [emptiness_size_estimate(empty_oracle(hidden), 1024, 0.25, np.random.default_rng(s)).value for s in range(1000)]
        assert np.mean([24 <= v <= 40 for v in vals]) >= 0.95

    def test_invalid_eps(self, rng):
        with pytest.raises(InvalidParams):
            emptiness_size_estimate(lambda q: True, 10, 1.5, rng)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 300), st.integers(0, 2**32 - 1))
    def test_reproducible(self, size, seed):
        hidden = np.zeros(300, bool)
        hidden[:size] = True
        a = emptiness_size_estimate(empty_oracle(hidden), 300, 0.5, np.random.default_rng(seed))
        b = emptiness_size_estimate(empty_oracle(hidden), 300, 0.5, np.random.default_rng(seed))
        assert a == b
