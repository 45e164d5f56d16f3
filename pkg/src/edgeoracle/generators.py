"""Seeded generators for test and hard instances."""

from __future__ import annotations

import math
from typing import Any, Callable

import numpy as np

from .errors import InvalidGeneratorParams
from .graph import Graph, build_graph

FAMILIES = ("star", "clique_plus_isolated", "erdos_renyi", "random_bipartite", "path", "empty", "complete")


def _count(name: str, value: Any, minimum: int = 0) -> int:
    try:
        ivalue = int(value)
    except (TypeError, ValueError):
        raise InvalidGeneratorParams(f"{name} must be an integer, got {value!r}") from None
    if ivalue != float(value) or ivalue < minimum:
        raise InvalidGeneratorParams(f"{name} must be an integer >= {minimum}, got {value!r}")
    return ivalue


def _prob(value: Any) -> float:
    try:
        p = float(value)
    except (TypeError, ValueError):
        raise InvalidGeneratorParams(f"edge probability must be a number, got {value!r}") from None
    if not 0.0 <= p <= 1.0:
        raise InvalidGeneratorParams(f"edge probability must lie in [0, 1], got {p}")
    return p


def star(n: int) -> Graph:
    """Center 0 joined to leaves 1..n-1."""
    n = _count("n", n, 1)
    return build_graph(n, np.column_stack([np.zeros(n - 1, np.int64), np.arange(1, n)]))


def complete(n: int) -> Graph:
    n = _count("n", n)
    u, v = np.triu_indices(n, k=1)
    return build_graph(n, np.column_stack([u, v]))


def empty(n: int) -> Graph:
    return build_graph(_count("n", n), [])


def path(n: int) -> Graph:
    n = _count("n", n)
    return build_graph(n, np.column_stack([np.arange(n - 1), np.arange(1, n)]) if n > 1 else [])


def clique_plus_isolated(clique: int, isolated: int) -> Graph:
    """Clique on vertices ``0..clique-1`` followed by isolated vertices."""
    clique = _count("clique", clique)
    isolated = _count("isolated", isolated)
    u, v = np.triu_indices(clique, k=1)
    return build_graph(clique + isolated, np.column_stack([u, v]))


def erdos_renyi(n: int, p: float, rng: np.random.Generator) -> Graph:
    n = _count("n", n)
    p = _prob(p)
    rows = []
    for u in range(n - 1):
        hits = np.flatnonzero(rng.random(n - u - 1) < p) + u + 1
        if len(hits):
            rows.append(np.column_stack([np.full(len(hits), u, np.int64), hits]))
    return build_graph(n, np.concatenate(rows) if rows else [])


def random_bipartite(left: int, right: int, p: float, rng: np.random.Generator) -> Graph:
    """Left side ``0..left-1``, right side ``left..left+right-1``."""
    left = _count("left", left)
    right = _count("right", right)
    p = _prob(p)
    hits = np.argwhere(rng.random((left, right)) < p)
    hits[:, 1] += left
    return build_graph(left + right, hits)


def generate(family: str, params: dict[str, Any], rng: np.random.Generator | None = None) -> Graph:
    """Build a named instance.

    ``params`` use the generator keyword names.  For convenience
    ``clique_plus_isolated`` also accepts ``n`` (with ``clique`` defaulting to
    ``ceil(n ** (2/3))``), ``random_bipartite`` accepts ``n`` split evenly and
    ``erdos_renyi`` accepts an expected degree ``d`` in place of ``p``.
    """
    params = dict(params)
    if rng is None:
        rng = np.random.default_rng(0)
    builders: dict[str, Callable[..., Graph]] = {
        "star": star,
        "complete": complete,
        "empty": empty,
        "path": path,
    }
    try:
        if family in builders:
            return builders[family](**params)
        if family == "clique_plus_isolated":
            if "n" in params:
                n = _count("n", params.pop("n"))
                c = _count("clique", params.pop("clique", math.ceil(n ** (2 / 3) - 1e-9)))
                if c > n:
                    raise InvalidGeneratorParams("clique larger than n")
                params.update(clique=c, isolated=n - c)
            return clique_plus_isolated(**params)
        if family == "erdos_renyi":
            if "d" in params:
                n = _count("n", params.get("n"))
                params["p"] = min(1.0, float(params.pop("d")) / max(n - 1, 1))
            return erdos_renyi(rng=rng, **params)
        if family == "random_bipartite":
            if "n" in params:
                n = _count("n", params.pop("n"))
                params.update(left=n // 2, right=n - n // 2)
            return random_bipartite(rng=rng, **params)
    except TypeError as exc:
        raise InvalidGeneratorParams(f"bad parameters for {family}: {exc}") from None
    raise InvalidGeneratorParams(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
