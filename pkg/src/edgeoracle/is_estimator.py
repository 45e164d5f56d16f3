"""Edge estimation with IS queries.

Small graphs are counted exactly.  Otherwise a scale ``t`` doubles from
``sqrt(L_base)``; at each scale a *growing* step tries to count a sparsified
copy exactly (it succeeds once ``t`` is about ``sqrt(m)``) and a *shrinking*
step samples vertex pairs (it succeeds once ``t`` is about ``n^2 / m``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams
from .exact import edge_count, is_exact_within
from .graph import VertexSet, as_vertex_set, split_by_colors
from .oracles import OracleSession
from .outcomes import AtLeast, AtMost, Estimate, Exact, MoreThan
from .primitives import membership_size_test
from .report import EstimateReport
from .bis_estimator import log2n


@dataclass(frozen=True)
class IsParams:
    eps: float
    c_A: float = 1.0
    sigma: float = 1.0
    c_E: float = 2.0
    delta: float | None = None
    preset: str = "practical"

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise InvalidParams(f"eps must lie in (0, 1), got {self.eps}")
        if self.c_A < 1 or self.sigma <= 0 or self.c_E <= 0:
            raise InvalidParams("need c_A >= 1, sigma > 0, c_E > 0")
        if self.delta is not None and not 0 < self.delta < 1:
            raise InvalidParams("delta must lie in (0, 1)")

    @classmethod
    def practical(cls, eps: float, **overrides) -> "IsParams":
        return cls(**{"eps": eps, "c_A": 1.0, "sigma": 1.0, "c_E": 2.0, "preset": "practical", **overrides})

    @classmethod
    def theory(cls, eps: float, **overrides) -> "IsParams":
        return cls(**{"eps": eps, "c_A": 1.0, "sigma": 2.0, "c_E": 8.0, "preset": "theory", **overrides})

    @classmethod
    def preset_for(cls, name: str, eps: float, **overrides) -> "IsParams":
        if name == "practical":
            return cls.practical(eps, **overrides)
        if name == "theory":
            return cls.theory(eps, **overrides)
        raise InvalidParams(f"unknown preset {name!r}")

    def L_base(self, n: int) -> int:
        return math.ceil(self.c_A * self.eps**-4 * log2n(n) ** 4)

    def failure(self, n: int) -> float:
        if self.delta is not None:
            return self.delta
        return 1 / n if n > 2 else 0.5


def is_small_count(session: OracleSession, s, params: IsParams) -> Exact | MoreThan:
    """Exact ``m(S)`` when it is at most ``L_base``."""
    threshold = params.L_base(session.n)
    found = is_exact_within(session, s, limit=threshold)
    if isinstance(found, AtLeast):
        return MoreThan(threshold)
    return Exact(len(found))


def color_count(t: float, eps: float, sigma: float, n: int) -> int:
    return max(1, math.ceil(t * eps / (sigma * log2n(n))))


def is_growing_step(session: OracleSession, s, t: float, params: IsParams, rng: np.random.Generator) -> MoreThan | Estimate:
    """Either certify ``m(S) > 2 t^2`` or return ``k * sum_i m(S_i)``.

    ``S`` is split by a uniform ``k``-coloring.  The class counts are summed
    in color order, each counted exactly with a budget equal to the room left
    under ``M = 8 t^2 / k``; exceeding ``M`` returns ``MoreThan(2 t^2)``.
    """
    s = as_vertex_set(session.n, s)
    k = color_count(t, params.eps, params.sigma, session.n)
    M = 8 * t * t / k
    gamma = 0
    for part in split_by_colors(s.indices, rng.integers(0, k, size=len(s)), k):
        found = is_exact_within(session, VertexSet.from_indices(session.n, part), limit=math.floor(M - gamma))
        if isinstance(found, AtLeast):
            return MoreThan(2 * t * t)
        gamma += len(found)
    return Estimate(float(k * gamma))


def unrank_pairs(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Colex unranking: index ``r`` maps to ``(a, b)`` with ``a < b`` and ``r = C(b, 2) + a``."""
    r = np.asarray(r, dtype=np.int64)
    b = ((1 + np.sqrt(1 + 8 * r.astype(np.float64))) / 2).astype(np.int64)
    b = np.where(b * (b - 1) // 2 > r, b - 1, b)
    b = np.where((b + 1) * b // 2 <= r, b + 1, b)
    return r - b * (b - 1) // 2, b


def is_shrinking_step(session: OracleSession, s, t: float, eps_a: float, params: IsParams, rng: np.random.Generator) -> AtMost | Estimate:
    """Sample vertex pairs of ``S`` with one IS query each.

    A coarse test (eps 1/2) at guess ``g = |S|^2 / (16 t)`` either reports
    that ``m(S) < g``, giving ``AtMost(|S|^2 / (2t))``, or is followed by a
    test at ``eps_a`` whose scaled hit count is returned.
    """
    if t <= 0:
        raise InvalidParams("t must be positive")
    members = as_vertex_set(session.n, s).indices
    size = len(members)
    N = size * (size - 1) // 2
    if N == 0:
        return AtMost(size * size / (2 * t))

    def has_edge(r: np.ndarray) -> np.ndarray:
        a, b = unrank_pairs(r)
        return session._is_pairs(members[a], members[b])

    g = size * size / (16 * t)
    delta = params.failure(session.n)
    first = membership_size_test(has_edge, N, g, 0.5, delta, rng, params.c_E)
    if not isinstance(first, Estimate):
        return AtMost(size * size / (2 * t))
    second = membership_size_test(has_edge, N, g, eps_a, delta, rng, params.c_E)
    value = second.value if isinstance(second, Estimate) else 0.0
    return Estimate(value, probes=first.probes + second.probes)


def is_estimate_edges(session: OracleSession, params: IsParams, rng: np.random.Generator, seed: int | None = None) -> EstimateReport:
    """``(1 +- eps)``-estimate of the edge count using IS queries only."""
    n = session.n
    full = VertexSet.full(n)
    report = EstimateReport(0.0, seed=seed, preset=params.preset)

    def finish(value: float) -> EstimateReport:
        report.estimate = float(value)
        report.queries = session.ledger.snapshot()
        return report

    small = is_small_count(session, full, params)
    if isinstance(small, Exact):
        report.exact_flag = True
        return finish(small.value)

    t = math.sqrt(params.L_base(n))
    while True:
        if t > n:
            report.fallback_flag = True
            report.add_flag("iteration_cap")
            return finish(edge_count(is_exact_within(session, full)))
        report.rounds += 1
        grown = is_growing_step(session, full, t, params, rng)
        if isinstance(grown, Estimate):
            if grown.value < t * t:
                report.add_flag("promise_unverified")
            return finish(grown.value)
        shrunk = is_shrinking_step(session, full, t, params.eps, params, rng)
        if isinstance(shrunk, Estimate):
            return finish(shrunk.value)
        t *= 2
