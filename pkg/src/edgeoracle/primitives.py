"""Randomized building blocks shared by the estimators.

* sparsification by random coloring (matched color-class pairs),
* importance-sampling summation reduction,
* subset-size estimation through membership or emptiness oracles.

Logs are base 2 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .errors import InvalidParams, InvalidPartCount, SetsNotDisjoint
from .graph import VertexSet, split_by_colors
from .outcomes import Below, Estimate

# ---------------------------------------------------------------------------
# Sparsification


@dataclass(frozen=True)
class SparsifyResult:
    """Matched class pairs; ``scale * sum(m(S_i, V_i))`` estimates the edge count."""

    pairs: list[tuple[VertexSet, VertexSet]]
    scale: int


def matched_pairs_from_coloring(idx: np.ndarray, colors: np.ndarray, k: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairs ``(class i, class k+i)`` of a ``2k``-coloring of ``idx``."""
    parts = split_by_colors(idx, colors, 2 * k)
    return [(parts[i], parts[k + i]) for i in range(k)]


def colored_pairs(s: np.ndarray, v: np.ndarray, k: int, rng: np.random.Generator) -> list[tuple[np.ndarray, np.ndarray]]:
    """Independent ``k``-colorings of ``s`` and ``v``, paired by color."""
    s_parts = split_by_colors(s, rng.integers(0, k, size=len(s)), k)
    v_parts = split_by_colors(v, rng.integers(0, k, size=len(v)), k)
    return list(zip(s_parts, v_parts))


def sparsify_vertex_set(s: VertexSet, k: int, rng: np.random.Generator) -> SparsifyResult:
    """Random ``2k``-partition of ``s`` with pairs ``(S_i, S_{k+i})``; scale ``2k``."""
    if not 1 <= k <= max(1, len(s) // 2):
        raise InvalidPartCount(f"need 1 <= k <= |S|/2, got k={k} for |S|={len(s)}")
    idx = s.indices
    pairs = matched_pairs_from_coloring(idx, rng.integers(0, 2 * k, size=len(idx)), k)
    return SparsifyResult([(VertexSet.from_indices(s.n, a), VertexSet.from_indices(s.n, b)) for a, b in pairs], 2 * k)


def sparsify_pair(s: VertexSet, v: VertexSet, k: int, rng: np.random.Generator) -> SparsifyResult:
    """Independent ``k``-partitions of disjoint ``s`` and ``v``; scale ``k``."""
    if not s.isdisjoint(v):
        raise SetsNotDisjoint("S and V must be disjoint")
    if not 2 <= k <= max(len(s), len(v)):
        raise InvalidPartCount(f"need 2 <= k <= max(|S|, |V|), got k={k}")
    pairs = colored_pairs(s.indices, v.indices, k, rng)
    return SparsifyResult([(VertexSet.from_indices(s.n, a), VertexSet.from_indices(s.n, b)) for a, b in pairs], k)


def sparsify_matched_pairs(target: VertexSet | tuple[VertexSet, VertexSet], k: int, rng: np.random.Generator) -> SparsifyResult:
    """Dispatch on ``target``: a vertex set (one set, 2k colors) or a disjoint pair."""
    if isinstance(target, VertexSet):
        return sparsify_vertex_set(target, k, rng)
    s, v = target
    return sparsify_pair(s, v, k, rng)


# ---------------------------------------------------------------------------
# Importance sampling


@dataclass(frozen=True)
class WeightedItem:
    """A structure with weight ``w`` and coarse estimate ``e`` of its value.

    The caller promises ``e / b <= value(handle) <= e * b``.
    """

    handle: Any
    w: float
    e: float


def bucket_of(x: float, M: float) -> int:
    """Index ``j >= 1`` with ``x`` in ``[2^(j-1), 2^j)``; ``x == M`` joins the top bucket when M is a power of 2."""
    j = math.frexp(x)[1]  # x = f * 2^j with 0.5 <= f < 1
    top = max(1, math.ceil(math.log2(M)))
    if x == M and 2 ** top == M:
        return top
    return j


def reduction_sample_size(eps_a: float, delta: float, b: float, buckets: int) -> int:
    """Per-bucket sample size from the Hoeffding bound.

    Values in one bucket span ``[2^(j-1)/b, 2^j b]``, a spread of ``2 b^2``,
    so the bound is applied with ``b' = sqrt(2) b`` and failure ``delta/buckets``.
    """
    return math.ceil(2 * b**4 / eps_a**2 * (1 + math.log(buckets / delta)))


def importance_reduce(
    items: Sequence[WeightedItem],
    eps_a: float,
    delta: float,
    b: float,
    M: float,
    rng: np.random.Generator,
    sample_size: int | None = None,
) -> list[WeightedItem]:
    """Shrink a weighted sum by sampling within magnitude buckets of ``e * w``.

    Buckets with at most ``sample_size`` items pass through unchanged; larger
    buckets are sampled uniformly with replacement down to ``sample_size``
    items whose weights are scaled by ``|bucket| / sample_size``.
    """
    if not 0 < eps_a < 1 or not 0 < delta < 1 or b < 1 or M < 1:
        raise InvalidParams("need 0 < eps_a < 1, 0 < delta < 1, b >= 1, M >= 1")
    for it in items:
        if it.w < 1 or it.e < 1:
            raise InvalidParams(f"weights and estimates must be >= 1, got w={it.w}, e={it.e}")
    h = max(1, math.ceil(math.log2(M)))
    alpha = sample_size if sample_size is not None else reduction_sample_size(eps_a, delta, b, h)
    if alpha < 1:
        raise InvalidParams("sample size must be >= 1")
    buckets: dict[int, list[WeightedItem]] = {}
    for it in items:
        buckets.setdefault(bucket_of(it.e * it.w, M), []).append(it)
    out: list[WeightedItem] = []
    for j in sorted(buckets):
        group = buckets[j]
        if len(group) <= alpha:
            out.extend(group)
            continue
        scale = len(group) / alpha
        for pick in rng.integers(0, len(group), size=alpha).tolist():
            it = group[pick]
            out.append(WeightedItem(it.handle, it.w * scale, it.e))
    return out


# ---------------------------------------------------------------------------
# Subset size via membership oracle

MembershipOracle = Callable[[np.ndarray], np.ndarray]
EmptinessOracle = Callable[[np.ndarray], bool]


def membership_size_test(
    oracle: MembershipOracle,
    N: int,
    g: float,
    eps: float,
    delta: float,
    rng: np.random.Generator,
    c_e: float = 2.0,
) -> Below | Estimate:
    """Sample ``r = ceil(c_e eps^-2 (N/g) log(1/delta))`` elements with replacement.

    ``oracle`` maps an array of element indices in ``[0, N)`` to a boolean
    array of memberships (one probe per element).  Returns ``Below(g)`` when
    the scaled hit count ``Y`` is under ``g/2`` and ``Estimate(Y)`` otherwise.
    """
    if g <= 0 or not 0 < eps < 1 or not 0 < delta < 1 or N < 1:
        raise InvalidParams("need g > 0, eps and delta in (0, 1), N >= 1")
    r = math.ceil(c_e * eps**-2 * (N / g) * math.log2(1 / delta))
    hits = 0
    done = 0
    chunk = 1 << 16
    while done < r:
        size = min(chunk, r - done)
        hits += int(np.count_nonzero(oracle(rng.integers(0, N, size=size))))
        done += size
    y = N * hits / r
    if y < g / 2:
        return Below(g, probes=r)
    return Estimate(y, probes=r)


def membership_size_estimate(
    oracle: MembershipOracle,
    N: int,
    eps_a: float,
    delta: float,
    rng: np.random.Generator,
    c_e: float = 2.0,
) -> Estimate:
    """``(1 +- eps_a)``-estimate of ``|B|`` without a guess.

    Guesses ``g_i = N / 2^(i+2)`` shrink until a coarse run (eps 1/2) reports
    ``Y >= 4 g_i``; one refinement run at ``eps_a`` follows.  The guesses go
    down to ``1/8`` so that a single member is still detected; if no round
    stops the result is 0 with ``degenerate=True``.
    """
    if N >= 2 and delta >= 1 / math.log2(N):
        raise InvalidParams("need delta < 1 / log2(N)")
    if not 0 < eps_a < 1:
        raise InvalidParams("eps_a must lie in (0, 1)")
    lg = max(1.0, math.log2(N))
    step_delta = delta / (8 * lg)
    probes = 0
    i = 1
    while True:
        g = N / 2 ** (i + 2)
        if g < 1 / 8:
            return Estimate(0.0, probes=probes, degenerate=True)
        res = membership_size_test(oracle, N, g, 0.5, step_delta, rng, c_e)
        probes += res.probes
        if isinstance(res, Estimate) and res.value >= 4 * g:
            break
        i += 1
    final = membership_size_test(oracle, N, g, eps_a, delta, rng, c_e)
    probes += final.probes
    value = final.value if isinstance(final, Estimate) else 0.0
    return Estimate(value, probes=probes)


# ---------------------------------------------------------------------------
# Subset size via emptiness oracle


def bernoulli_subset(members: np.ndarray, p: float, rng: np.random.Generator) -> np.ndarray:
    """Keep each entry of ``members`` independently with probability ``p`` (order kept)."""
    if p >= 1.0:
        return members
    if p <= 0.0:
        return members[:0]
    return members[rng.random(len(members)) < p]


def emptiness_size_estimate(
    oracle: EmptinessOracle,
    N: int,
    eps: float,
    rng: np.random.Generator,
    reps: int | None = None,
) -> Estimate:
    """``(1 +- eps)``-estimate of a hidden ``X`` in ``[0, N)`` from emptiness probes.

    ``oracle(Q)`` returns True iff the index array ``Q`` misses ``X``.  A
    sample keeping each element with probability ``1/g`` misses ``X`` with
    probability ``alpha(g) = (1 - 1/g)^|X|``, increasing in ``g``.  A binary
    search over ``g = 2^j`` finds the smallest ``j`` whose estimated
    ``alpha`` reaches ``1/e``; a fresh batch of ``reps`` probes at that
    ``g`` is then inverted: ``|X| = ln(alpha) / ln(1 - 1/g)``.
    Empty samples are answered without a probe.
    """
    if not 0 < eps < 1:
        raise InvalidParams("eps must lie in (0, 1)")
    if N < 1:
        return Estimate(0.0)
    reps = reps if reps is not None else math.ceil(48 / eps**2)
    universe = np.arange(N, dtype=np.int64)
    probes = 1
    if oracle(universe):
        return Estimate(0.0, probes=probes)

    rows_per_chunk = max(1, (1 << 22) // N)

    def miss_rate(g: float) -> float:
        nonlocal probes
        misses = 0
        left = reps
        while left:
            rows = min(left, rows_per_chunk)
            keep = rng.random((rows, N)) < 1.0 / g
            for row in keep:
                q = universe[row]
                if len(q) == 0:
                    misses += 1
                    continue
                probes += 1
                misses += bool(oracle(q))
            left -= rows
        return misses / reps

    target = 1 / math.e
    lo, hi = 0, math.ceil(math.log2(N)) + 1  # alpha(1) = 0 < 1/e <= alpha(2N)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if miss_rate(2.0**mid) >= target:
            hi = mid
        else:
            lo = mid
    g = 2.0**hi
    alpha = miss_rate(g)
    alpha = min(max(alpha, 1 / (2 * reps)), 1 - 1 / (2 * reps))
    value = math.log(alpha) / math.log1p(-1 / g) if g > 1 else 0.0
    return Estimate(value, probes=probes)
