"""Graphs, vertex sets, random partitions and brute-force edge counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import InvalidPartCount, InvalidVertex, SelfLoop, SetsNotDisjoint

_EMPTY = np.empty(0, dtype=np.int64)
_EMPTY.setflags(write=False)


def _words(n: int) -> int:
    return max(1, (n + 63) // 64)


def _mask_from_indices(idx: np.ndarray, n: int) -> int:
    if len(idx) == 0:
        return 0
    bits = np.zeros(_words(n) * 64, dtype=np.uint8)
    bits[idx] = 1
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _indices_from_mask(mask: int, n: int) -> np.ndarray:
    if mask == 0:
        return _EMPTY
    raw = np.frombuffer(mask.to_bytes(_words(n) * 8, "little"), dtype=np.uint8)
    idx = np.flatnonzero(np.unpackbits(raw, bitorder="little")).astype(np.int64)
    idx.setflags(write=False)
    return idx


class VertexSet:
    """Immutable subset of ``{0..n-1}`` with bit-set semantics.

    The canonical form is an int bit mask; a sorted ``int64`` index array is
    derived lazily (or supplied directly) for the kernels.
    """

    __slots__ = ("n", "_mask", "_idx")

    def __init__(self, n: int, members: Iterable[int] = ()):
        idx = np.unique(np.fromiter(members, dtype=np.int64))
        if len(idx) and (idx[0] < 0 or idx[-1] >= n):
            raise InvalidVertex(f"vertex set members must lie in [0, {n})")
        idx.setflags(write=False)
        self.n = n
        self._idx = idx
        self._mask = None

    @classmethod
    def from_indices(cls, n: int, idx: np.ndarray) -> "VertexSet":
        """Wrap an already sorted, duplicate-free, in-range index array."""
        out = cls.__new__(cls)
        out.n = n
        idx = np.asarray(idx, dtype=np.int64)
        if idx.flags.writeable:
            idx = idx.copy()
            idx.setflags(write=False)
        out._idx = idx
        out._mask = None
        return out

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "VertexSet":
        if mask < 0 or mask >> n:
            raise InvalidVertex(f"mask has bits outside [0, {n})")
        out = cls.__new__(cls)
        out.n = n
        out._mask = mask
        out._idx = None
        return out

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls.from_mask(n, (1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls.from_mask(n, 0)

    @property
    def mask(self) -> int:
        if self._mask is None:
            self._mask = _mask_from_indices(self._idx, self.n)
        return self._mask

    @property
    def indices(self) -> np.ndarray:
        if self._idx is None:
            self._idx = _indices_from_mask(self._mask, self.n)
        return self._idx

    @property
    def size(self) -> int:
        if self._idx is not None:
            return len(self._idx)
        return self._mask.bit_count()

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices.tolist())

    def __contains__(self, v: object) -> bool:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n:
            return False
        return bool(self.mask >> int(v) & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.n == other.n and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.n, self.mask))

    def __repr__(self) -> str:
        shown = self.indices[:8].tolist()
        more = ", ..." if self.size > 8 else ""
        return f"VertexSet(n={self.n}, {{{', '.join(map(str, shown))}{more}}})"

    def _check(self, other: "VertexSet") -> None:
        if self.n != other.n:
            raise InvalidVertex("vertex sets over different universes")

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet.from_mask(self.n, self.mask | other.mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet.from_mask(self.n, self.mask & other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet.from_mask(self.n, self.mask & ~other.mask)

    def isdisjoint(self, other: "VertexSet") -> bool:
        self._check(other)
        return self.mask & other.mask == 0

    def complement(self) -> "VertexSet":
        return VertexSet.from_mask(self.n, ((1 << self.n) - 1) & ~self.mask)

    def halves(self) -> tuple["VertexSet", ...]:
        """Split by ascending id into ceil/floor halves; singletons stay whole."""
        idx = self.indices
        if len(idx) <= 1:
            return (self,)
        cut = (len(idx) + 1) // 2
        return (VertexSet.from_indices(self.n, idx[:cut]), VertexSet.from_indices(self.n, idx[cut:]))


def as_vertex_set(n: int, s: VertexSet | Iterable[int]) -> VertexSet:
    if isinstance(s, VertexSet):
        if s.n != n:
            raise InvalidVertex(f"vertex set over n={s.n}, expected n={n}")
        return s
    return VertexSet(n, s)


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint parts; empty parts are allowed."""

    parts: tuple[VertexSet, ...]

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> VertexSet:
        return self.parts[i]


class Graph:
    """Immutable simple undirected graph on ``{0..n-1}``.

    Build instances with :func:`build_graph`.
    """

    def __init__(self, n: int, edges: np.ndarray):
        self.n = n
        self.edges = edges
        self.edges.setflags(write=False)
        adj = np.zeros((n, _words(n)), dtype=np.uint64)
        if len(edges):
            u, v = edges[:, 0], edges[:, 1]
            one = np.uint64(1)
            np.bitwise_or.at(adj, (u, v >> 6), one << (v & 63).astype(np.uint64))
            np.bitwise_or.at(adj, (v, u >> 6), one << (u & 63).astype(np.uint64))
        adj.setflags(write=False)
        self.adj_words = adj
        both = np.concatenate([edges, edges[:, ::-1]]) if len(edges) else np.empty((0, 2), np.int64)
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        self._nbr = both[:, 1].copy()
        self._nbr.setflags(write=False)
        self._offsets = np.searchsorted(both[:, 0], np.arange(n + 1))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> np.ndarray:
        return self._nbr[self._offsets[v] : self._offsets[v + 1]]

    def degree(self, v: int) -> int:
        return int(self._offsets[v + 1] - self._offsets[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self._offsets)

    def has_edge(self, u: int, v: int) -> bool:
        u, v = int(u), int(v)
        return bool(int(self.adj_words[u, v >> 6]) >> (v & 63) & 1)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(map(tuple, self.edges.tolist()))

    def vertices(self) -> VertexSet:
        return VertexSet.full(self.n)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edge_list: Iterable[Sequence[int]] | np.ndarray) -> Graph:
    """Build a graph, dropping duplicate pairs in either orientation."""
    if n < 0:
        raise InvalidVertex("vertex count must be non-negative")
    arr = np.asarray(list(edge_list) if not isinstance(edge_list, np.ndarray) else edge_list, dtype=np.int64)
    if arr.size == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    arr = arr.reshape(-1, 2)
    if arr.min() < 0 or arr.max() >= n:
        raise InvalidVertex(f"edge endpoint outside [0, {n})")
    if np.any(arr[:, 0] == arr[:, 1]):
        bad = arr[arr[:, 0] == arr[:, 1]][0]
        raise SelfLoop(f"self-loop at vertex {bad[0]}")
    arr = np.sort(arr, axis=1)
    arr = np.unique(arr, axis=0)
    return Graph(n, np.ascontiguousarray(arr))


def true_edges_between(g: Graph, s: VertexSet | Iterable[int], v: VertexSet | Iterable[int]) -> int:
    """Ground-truth ``|E(S, V)|`` for disjoint ``S``, ``V`` (no oracle cost)."""
    s = as_vertex_set(g.n, s)
    v = as_vertex_set(g.n, v)
    if not s.isdisjoint(v):
        raise SetsNotDisjoint("S and V must be disjoint")
    return int(kernels.count_between(g.adj_words, s.indices, v.indices))


def true_edges_within(g: Graph, s: VertexSet | Iterable[int]) -> int:
    """Ground-truth ``|E(S)|`` (no oracle cost)."""
    s = as_vertex_set(g.n, s)
    return int(kernels.count_within(g.adj_words, s.indices))


def split_by_colors(idx: np.ndarray, colors: np.ndarray, k: int) -> list[np.ndarray]:
    """Group ``idx`` by color in ``[0, k)``; order within each part is kept."""
    order = np.argsort(colors, kind="stable")
    bounds = np.searchsorted(colors[order], np.arange(k + 1))
    sorted_idx = idx[order]
    return [sorted_idx[bounds[c] : bounds[c + 1]] for c in range(k)]


def random_partition(s: VertexSet, k: int, rng: np.random.Generator) -> Partition:
    """Color each member of ``s`` uniformly from ``k`` colors."""
    if k < 1:
        raise InvalidPartCount(f"part count must be >= 1, got {k}")
    idx = s.indices
    colors = rng.integers(0, k, size=len(idx))
    return Partition(tuple(VertexSet.from_indices(s.n, p) for p in split_by_colors(idx, colors, k)))
