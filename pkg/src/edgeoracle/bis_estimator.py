"""Edge and degree estimation with BIS queries.

The edge estimator keeps a list of weighted bipartite pieces ``(S, V, w)``
plus an accumulator.  Each round counts the pieces that are already small
(cleanup), splits the rest by random coloring (refine), and, when the list
grows too long, thins it by importance sampling on coarse per-piece
estimates (reduce).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParams, SetsNotDisjoint
from .exact import CrossQuery, bis_exact_all, count_between_upto, edge_count
from .graph import Graph, VertexSet, as_vertex_set, split_by_colors, true_edges_between
from .oracles import OracleSession
from .outcomes import AtLeast
from .primitives import WeightedItem, emptiness_size_estimate, importance_reduce
from .report import EstimateReport


def log2n(n: int) -> float:
    """``log2 n`` floored at 1 so that tiny graphs keep sane parameters."""
    return max(1.0, math.log2(n)) if n > 1 else 1.0


def _check_eps(eps: float) -> None:
    if not 0 < eps < 1:
        raise InvalidParams(f"eps must lie in (0, 1), got {eps}")


@dataclass(frozen=True)
class BisParams:
    eps: float
    L_small: int
    L_len: int
    exact_threshold: int
    k_refine: int = 4
    c_ce: float = 8.0
    min_trials: int = 16
    max_rounds: int = 40
    preset: str = "practical"

    def __post_init__(self):
        _check_eps(self.eps)
        if min(self.L_small, self.L_len, self.max_rounds) < 1 or self.exact_threshold < 0:
            raise InvalidParams("L_small, L_len and max_rounds must be >= 1")
        if self.k_refine < 2:
            raise InvalidParams("k_refine must be >= 2")

    @classmethod
    def practical(cls, n: int, eps: float, **overrides) -> "BisParams":
        _check_eps(eps)
        lg = log2n(n)
        l_small = max(8, math.ceil(eps**-2 * lg**2))
        base = dict(
            eps=eps,
            L_small=l_small,
            L_len=max(16, math.ceil(eps**-2 * lg**3)),
            exact_threshold=2 * l_small,
            c_ce=8.0,
            min_trials=16,
            max_rounds=4 * math.ceil(lg),
            preset="practical",
        )
        base.update(overrides)
        return cls(**base)

    @classmethod
    def theory(cls, n: int, eps: float, **overrides) -> "BisParams":
        _check_eps(eps)
        lg = log2n(n)
        base = dict(
            eps=eps,
            L_small=math.ceil(eps**-2 * lg**4),
            L_len=math.ceil(eps**-2 * lg**8),
            exact_threshold=math.ceil(eps**-4 * lg**12),
            c_ce=128.0,
            min_trials=1,
            max_rounds=4 * math.ceil(lg),
            preset="theory",
        )
        base.update(overrides)
        return cls(**base)

    @classmethod
    def preset_for(cls, name: str, n: int, eps: float, **overrides) -> "BisParams":
        if name == "practical":
            return cls.practical(n, eps, **overrides)
        if name == "theory":
            return cls.theory(n, eps, **overrides)
        raise InvalidParams(f"unknown preset {name!r}")

    def trials(self, n: int) -> int:
        return max(self.min_trials, math.ceil(self.c_ce * log2n(n)))


# ---------------------------------------------------------------------------
# CheckEstimate / CoarseEstimator


def _check(cross: CrossQuery, s: np.ndarray, v: np.ndarray, m_tilde: float, n: int, rng: np.random.Generator) -> bool:
    for i in range(int(math.floor(math.log2(n))) + 1 if n > 1 else 1):
        scale = 2.0**i
        s_sub = s[rng.random(len(s)) < min(scale / m_tilde, 1.0)]
        v_sub = v[rng.random(len(v)) < 1.0 / scale]
        # An empty side cannot carry an edge; no query is needed.
        if len(s_sub) and len(v_sub) and not cross(s_sub, v_sub):
            return True
    return False


def check_estimate(session: OracleSession, s, v, m_tilde: float, rng: np.random.Generator) -> bool:
    """Accept when some round's sampled pair ``(S', V')`` spans an edge.

    Round ``i`` keeps each vertex of S with probability ``min(2^i / m_tilde, 1)``
    and each vertex of V with probability ``2^-i``.
    """
    if m_tilde < 1:
        raise InvalidParams("guess must be >= 1")
    s, v = _pair(session, s, v)
    return _check(session._bis, s, v, m_tilde, session.n, rng)


@dataclass(frozen=True)
class CoarseEstimate:
    value: int
    fell_through: bool = False


def coarse_with(cross: CrossQuery, s: np.ndarray, v: np.ndarray, n: int, trials: int, rng: np.random.Generator) -> CoarseEstimate:
    """Coarse estimator over an arbitrary cross-emptiness query."""
    if len(s) == 0 or len(v) == 0 or cross(s, v):
        return CoarseEstimate(0)
    need = math.ceil(3 * trials / 8)
    for j in range((n * n).bit_length() - 1, -1, -1):
        guess = 2.0**j
        accepts = 0
        for done in range(trials):
            if accepts >= need or accepts + (trials - done) < need:
                break
            accepts += _check(cross, s, v, guess, n, rng)
        if accepts >= need:
            return CoarseEstimate(1 << j)
    return CoarseEstimate(1, fell_through=True)


def coarse_estimator(session: OracleSession, s, v, params: BisParams, rng: np.random.Generator) -> CoarseEstimate:
    """Power-of-two estimate of ``m(S, V)`` within a ``8 log n`` factor, or 0.

    Guesses ``2^j`` are tried from ``n^2`` downwards; the first guess at which
    ``ceil(3t/8)`` of ``t`` CheckEstimate trials accept is returned.  A level
    stops as soon as its outcome is decided.  If no level accepts although
    the pair spans an edge, 1 is returned with ``fell_through`` set.
    """
    s, v = _pair(session, s, v)
    return coarse_with(session._bis, s, v, session.n, params.trials(session.n), rng)


def _pair(session: OracleSession, s, v) -> tuple[np.ndarray, np.ndarray]:
    s = as_vertex_set(session.n, s)
    v = as_vertex_set(session.n, v)
    if not s.isdisjoint(v):
        raise SetsNotDisjoint("S and V must be disjoint")
    return s.indices, v.indices


# ---------------------------------------------------------------------------
# The estimator state and its three operations


@dataclass(frozen=True)
class WeightedPair:
    S: VertexSet
    V: VertexSet
    w: float


@dataclass
class EstimatorState:
    acc: float = 0.0
    triples: list[WeightedPair] = field(default_factory=list)

    def tracked_value(self, graph: Graph) -> float:
        """``acc + sum w * m(S, V)`` from ground truth (for tests)."""
        return self.acc + sum(t.w * true_edges_between(graph, t.S, t.V) for t in self.triples)


def cleanup(session: OracleSession, state: EstimatorState, limit: int) -> None:
    """Count every triple with at most ``limit`` edges exactly and retire it."""
    kept = []
    for t in state.triples:
        m = count_between_upto(session, t.S.indices, t.V.indices, limit)
        if m is None:
            kept.append(t)
        else:
            state.acc += t.w * m
    state.triples = kept


def refine_triple(t: WeightedPair, k: int, s_colors: np.ndarray, v_colors: np.ndarray) -> list[WeightedPair]:
    """Split ``t`` by the given colorings into ``k`` matched pairs of weight ``k w``."""
    n = t.S.n
    s_parts = split_by_colors(t.S.indices, s_colors, k)
    v_parts = split_by_colors(t.V.indices, v_colors, k)
    return [
        WeightedPair(VertexSet.from_indices(n, a), VertexSet.from_indices(n, b), t.w * k)
        for a, b in zip(s_parts, v_parts)
        if len(a) and len(b)
    ]


def refine(state: EstimatorState, k: int, rng: np.random.Generator) -> None:
    """Replace each triple by ``k`` color-matched sub-pairs.

    Pairs with an empty side carry no edges and are dropped.
    """
    out = []
    for t in state.triples:
        s_colors = rng.integers(0, k, size=len(t.S))
        v_colors = rng.integers(0, k, size=len(t.V))
        out.extend(refine_triple(t, k, s_colors, v_colors))
    state.triples = out


def reduce_triples(session: OracleSession, state: EstimatorState, params: BisParams, n: int, rng: np.random.Generator) -> list[str]:
    """Coarse-estimate every triple, drop edgeless ones, importance-sample the rest."""
    lg = log2n(n)
    trials = params.trials(n)
    items = []
    flags = []
    for t in state.triples:
        ce = coarse_with(session._bis, t.S.indices, t.V.indices, n, trials, rng)
        if ce.fell_through and "coarse_fallthrough" not in flags:
            flags.append("coarse_fallthrough")
        if ce.value:
            items.append(WeightedItem(t, t.w, float(ce.value)))
    M = float(n) ** 2
    h = max(1, math.ceil(math.log2(M)))
    reduced = importance_reduce(
        items,
        eps_a=params.eps / (8 * lg),
        delta=1 / M if M > 1 else 0.5,
        b=8 * lg,
        M=M,
        rng=rng,
        sample_size=max(1, params.L_len // h),
    )
    state.triples = [replace(it.handle, w=it.w) for it in reduced]
    return flags


# ---------------------------------------------------------------------------
# Drivers


def bis_estimate_edges(session: OracleSession, params: BisParams, rng: np.random.Generator, seed: int | None = None) -> EstimateReport:
    """``(1 +- eps)``-estimate of the edge count using BIS queries only."""
    n = session.n
    report = EstimateReport(0.0, seed=seed, preset=params.preset)

    def finish(value: float) -> EstimateReport:
        report.estimate = float(value)
        report.queries = session.ledger.snapshot()
        return report

    found = bis_exact_all(session, limit=params.exact_threshold)
    if not isinstance(found, AtLeast):
        report.exact_flag = True
        return finish(len(found))

    idx = np.arange(n, dtype=np.int64)
    s_idx, v_idx = split_by_colors(idx, rng.integers(0, 2, size=n), 2)
    state = EstimatorState(0.0, [WeightedPair(VertexSet.from_indices(n, s_idx), VertexSet.from_indices(n, v_idx), 2.0)])
    while state.triples:
        if report.rounds == params.max_rounds:
            report.fallback_flag = True
            report.add_flag("round_cap")
            for t in state.triples:
                state.acc += t.w * count_between_upto(session, t.S.indices, t.V.indices, None)
            state.triples = []
            break
        report.rounds += 1
        cleanup(session, state, 2 * params.L_small)
        if not state.triples:
            break
        refine(state, params.k_refine, rng)
        if len(state.triples) > 2 * params.L_len:
            for tag in reduce_triples(session, state, params, n, rng):
                report.add_flag(tag)
    return finish(state.acc)


def bis_estimate_degree(session: OracleSession, v: int, eps: float, rng: np.random.Generator, reps: int | None = None) -> EstimateReport:
    """``(1 +- eps)``-estimate of ``deg(v)`` with ``{v}`` vs. subset BIS probes."""
    session._check_vertex(v)
    single = np.array([v], dtype=np.int64)

    def empty(q: np.ndarray) -> bool:
        # positions in {0..n-2} map to vertex ids skipping v
        return session._bis(single, q + (q >= v))

    est = emptiness_size_estimate(empty, session.n - 1, eps, rng, reps=reps)
    report = EstimateReport(est.value, queries=session.ledger.snapshot())
    return report


def edge_count_exact_bis(session: OracleSession) -> int:
    return edge_count(bis_exact_all(session))

