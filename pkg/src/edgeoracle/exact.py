"""Deterministic exact edge enumeration with BIS or IS queries.

Budgeted variants take an edge ``limit``: they either return the exact edge
set (when it has at most ``limit`` edges) or :class:`~edgeoracle.outcomes.AtLeast`
``(limit + 1)``.  Enumeration stops as soon as ``limit + 1`` distinct edges are
certified, so a stopped run costs ``O((limit + 1) log n)`` queries.
"""

from __future__ import annotations

from collections import deque
from typing import Callable

import numpy as np

from .errors import NotIndependent, SetsNotDisjoint
from .graph import Partition, VertexSet, as_vertex_set
from .oracles import OracleSession
from .outcomes import AtLeast

Edge = tuple[int, int]
CrossQuery = Callable[[np.ndarray, np.ndarray], bool]


class _LimitReached(Exception):
    pass


class EdgeSink:
    """Collects discovered edges and enforces an optional edge limit."""

    __slots__ = ("edges", "limit")

    def __init__(self, limit: int | None = None):
        self.edges: set[Edge] = set()
        self.limit = limit

    def add(self, u: int, v: int) -> None:
        self.edges.add((u, v) if u < v else (v, u))
        if self.limit is not None and len(self.edges) > self.limit:
            raise _LimitReached

    def certify(self, lower_bound: int) -> None:
        """Stop if some independent argument shows more than ``limit`` edges."""
        if self.limit is not None and lower_bound > self.limit:
            raise _LimitReached


def _run(sink: EdgeSink, body: Callable[[], None]) -> set[Edge] | AtLeast:
    try:
        body()
    except _LimitReached:
        return AtLeast(sink.limit + 1)
    return sink.edges


def _halves(x: np.ndarray) -> tuple[np.ndarray, ...]:
    if len(x) <= 1:
        return (x,)
    cut = (len(x) + 1) // 2
    return (x[:cut], x[cut:])


def quadtree_edges(cross_empty: CrossQuery, s: np.ndarray, v: np.ndarray, sink: EdgeSink) -> None:
    """Enumerate ``E(s, v)`` by recursive halving of both sides.

    Children are visited in the order (S1,V1), (S1,V2), (S2,V1), (S2,V2).
    """
    stack = [(s, v)]
    while stack:
        a, b = stack.pop()
        if cross_empty(a, b):
            continue
        if len(a) == 1 and len(b) == 1:
            sink.add(int(a[0]), int(b[0]))
            continue
        children = [(x, y) for x in _halves(a) for y in _halves(b)]
        stack.extend(reversed(children))


def adjacent_edges(session: OracleSession, v: int, among: np.ndarray, sink: EdgeSink) -> list[int]:
    """Binary tree of BIS({v}, A) queries over ``among``; returns neighbors found."""
    single = np.array([v], dtype=np.int64)
    found = []
    stack = [among]
    while stack:
        a = stack.pop()
        if session._bis(single, a):
            continue
        if len(a) == 1:
            u = int(a[0])
            found.append(u)
            sink.add(v, u)
            continue
        lo, hi = _halves(a)
        stack.append(hi)
        stack.append(lo)
    return found


def component_edges(session: OracleSession, v: int, remaining: np.ndarray, sink: EdgeSink) -> list[int]:
    """BFS from ``v`` over vertices flagged in ``remaining`` (a bool array).

    Each reached vertex has its adjacency searched among the still-flagged
    vertices, then is unflagged; edges to unflagged vertices were found when
    those vertices were processed.  Returns the component's vertices.
    """
    seen = {v}
    queue = deque([v])
    comp = []
    while queue:
        u = queue.popleft()
        comp.append(u)
        remaining[u] = False
        among = np.flatnonzero(remaining)
        if len(among) == 0:
            continue
        for w in adjacent_edges(session, u, among, sink):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return comp


def _disjoint_pair(session: OracleSession, s, v) -> tuple[np.ndarray, np.ndarray]:
    s = as_vertex_set(session.n, s)
    v = as_vertex_set(session.n, v)
    if not s.isdisjoint(v):
        raise SetsNotDisjoint("S and V must be disjoint")
    return s.indices, v.indices


def bis_exact_between(session: OracleSession, s, v, limit: int | None = None) -> set[Edge] | AtLeast:
    """Exact ``E(S, V)`` with ``O(1 + m(S,V) log n)`` BIS queries."""
    s_idx, v_idx = _disjoint_pair(session, s, v)
    sink = EdgeSink(limit)
    return _run(sink, lambda: quadtree_edges(session._bis, s_idx, v_idx, sink))


def bis_adjacent_edges(session: OracleSession, v: int) -> set[Edge]:
    """All edges incident to ``v``."""
    session._check_vertex(v)
    among = np.delete(np.arange(session.n, dtype=np.int64), v)
    sink = EdgeSink()
    adjacent_edges(session, v, among, sink)
    return sink.edges


def bis_component_edges(session: OracleSession, v: int) -> set[Edge]:
    """All edges of the connected component containing ``v``."""
    session._check_vertex(v)
    sink = EdgeSink()
    component_edges(session, v, np.ones(session.n, dtype=bool), sink)
    return sink.edges


def bis_exact_all(session: OracleSession, limit: int | None = None) -> set[Edge] | AtLeast:
    """Every edge of the graph, via bit classes of the vertex ids.

    Round ``i`` enumerates edges between working vertices whose bit ``i`` is
    1 and those whose bit is 0, then expands each touched vertex to its whole
    component and retires the component.  Every edge is split at the first
    bit where its endpoints differ, unless its component was retired earlier.
    """
    n = session.n
    sink = EdgeSink(limit)

    def body() -> None:
        working = np.ones(n, dtype=bool)
        for bit in range(max(0, (n - 1).bit_length())):
            idx = np.flatnonzero(working)
            ones = ((idx >> bit) & 1).astype(bool)
            a, b = idx[ones], idx[~ones]
            if len(a) == 0 or len(b) == 0:
                continue
            round_sink = EdgeSink()
            quadtree_edges(session._bis, a, b, _Tee(round_sink, sink))
            for u, w in sorted(round_sink.edges):
                for x in (u, w):
                    if working[x]:
                        component_edges(session, x, working, sink)

    return _run(sink, body)


class _Tee:
    """Forward edges to two sinks (the second one enforces the limit)."""

    __slots__ = ("first", "second")

    def __init__(self, first: EdgeSink, second: EdgeSink):
        self.first = first
        self.second = second

    def add(self, u: int, v: int) -> None:
        self.first.add(u, v)
        self.second.add(u, v)


def _is_cross(session: OracleSession) -> CrossQuery:
    # For independent a and b, IS(a | b) answers BIS(a, b).
    return lambda a, b: session._is(np.concatenate((a, b)))


def is_exact_bipartite(session: OracleSession, s, v, verify: bool = False) -> int:
    """``m(S, V)`` for disjoint independent sets, using IS queries only.

    With ``verify`` one extra IS query per side checks the independence
    promise and raises :class:`NotIndependent` if it fails.
    """
    s_idx, v_idx = _disjoint_pair(session, s, v)
    if verify:
        for side in (s_idx, v_idx):
            if not session._is(side):
                raise NotIndependent("bipartite side spans an edge")
    sink = EdgeSink()
    quadtree_edges(_is_cross(session), s_idx, v_idx, sink)
    return len(sink.edges)


def _largest_independent_prefix(session: OracleSession, rest: np.ndarray) -> int:
    """Largest ``i`` with ``rest[:i]`` independent (galloping, then bisection)."""
    if len(rest) == 1:
        return 1
    lo, size = 1, 2
    while size <= len(rest):
        if not session._is(rest[:size]):
            hi = size
            break
        lo, size = size, size * 2
    else:
        if lo == len(rest) or session._is(rest):
            return len(rest)
        hi = len(rest)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if session._is(rest[:mid]):
            lo = mid
        else:
            hi = mid
    return lo


def decompose_independent(session: OracleSession, s: np.ndarray, sink: EdgeSink | None = None) -> list[np.ndarray]:
    """Split ``s`` into independent classes with an edge between every pair.

    First peel maximal independent prefixes (each but the last certifies a
    distinct edge to the next vertex), then merge each peeled set into the
    first class it stays independent with (each rejection certifies a
    distinct edge).  Both counts lower-bound ``m(s)`` and are reported to
    ``sink`` for early stopping.
    """
    peeled = []
    rest = s
    while len(rest):
        i = _largest_independent_prefix(session, rest)
        peeled.append(rest[:i])
        rest = rest[i:]
        if sink is not None:
            sink.certify(len(peeled) - 1)
    classes: list[np.ndarray] = []
    rejections = 0
    for part in peeled:
        for j, cls in enumerate(classes):
            merged = np.concatenate((cls, part))
            if session._is(merged):
                classes[j] = merged
                break
            rejections += 1
            if sink is not None:
                sink.certify(rejections)
        else:
            classes.append(part)
    return [np.sort(c) for c in classes]


def is_decompose_independent(session: OracleSession, s) -> Partition:
    s = as_vertex_set(session.n, s)
    classes = decompose_independent(session, s.indices)
    return Partition(tuple(VertexSet.from_indices(session.n, c) for c in classes))


def within_edges(session: OracleSession, s: np.ndarray, sink: EdgeSink) -> None:
    classes = decompose_independent(session, s, sink)
    cross = _is_cross(session)
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            quadtree_edges(cross, classes[i], classes[j], sink)


def is_exact_within(session: OracleSession, s, limit: int | None = None) -> set[Edge] | AtLeast:
    """Exact ``E(S)`` with ``O(1 + m(S) log n)`` IS queries."""
    s_idx = as_vertex_set(session.n, s).indices
    sink = EdgeSink(limit)
    return _run(sink, lambda: within_edges(session, s_idx, sink))


def edge_count(result: set[Edge] | AtLeast) -> int:
    return result.value if isinstance(result, AtLeast) else len(result)



def count_between_upto(session: OracleSession, s_idx: np.ndarray, v_idx: np.ndarray, limit: int | None) -> int | None:
    """``m(s, v)`` if it is at most ``limit``, else None (unchecked fast path)."""
    sink = EdgeSink(limit)
    out = _run(sink, lambda: quadtree_edges(session._bis, s_idx, v_idx, sink))
    return None if isinstance(out, AtLeast) else len(out)
