# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled oracle kernels over packed adjacency rows.

Adjacency is a C-contiguous ``uint64[n, W]`` array; bit ``j`` of word ``w``
in row ``u`` is set iff ``u`` is adjacent to ``64*w + j``.  Vertex sets are
passed as ``int64`` index arrays.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport calloc, free


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline uint64_t* _bitmap(const int64_t[::1] idx, Py_ssize_t words) nogil:
    cdef uint64_t* bm = <uint64_t*> calloc(words if words > 0 else 1, sizeof(uint64_t))
    cdef Py_ssize_t i
    cdef int64_t x
    if bm == NULL:
        return NULL
    for i in range(idx.shape[0]):
        x = idx[i]
        bm[x >> 6] |= (<uint64_t> 1) << (x & 63)
    return bm


def cross_empty(const uint64_t[:, ::1] adj, const int64_t[::1] s, const int64_t[::1] v):
    """True iff no edge joins a vertex of ``s`` to a vertex of ``v``."""
    cdef const int64_t[::1] outer = s
    cdef const int64_t[::1] inner = v
    cdef Py_ssize_t words = adj.shape[1]
    cdef Py_ssize_t i, w
    cdef int64_t u
    cdef uint64_t* bm
    cdef bint empty = True
    if s.shape[0] == 0 or v.shape[0] == 0:
        return True
    if s.shape[0] > v.shape[0]:
        outer = v
        inner = s
    bm = _bitmap(inner, words)
    if bm == NULL:
        raise MemoryError()
    with nogil:
        for i in range(outer.shape[0]):
            u = outer[i]
            for w in range(words):
                if adj[u, w] & bm[w]:
                    empty = False
                    break
            if not empty:
                break
    free(bm)
    return empty


def within_empty(const uint64_t[:, ::1] adj, const int64_t[::1] s):
    """True iff ``s`` spans no edge (an independent set)."""
    cdef Py_ssize_t words = adj.shape[1]
    cdef Py_ssize_t i, w
    cdef int64_t u
    cdef uint64_t* bm
    cdef bint empty = True
    if s.shape[0] < 2:
        return True
    bm = _bitmap(s, words)
    if bm == NULL:
        raise MemoryError()
    with nogil:
        for i in range(s.shape[0]):
            u = s[i]
            for w in range(words):
                if adj[u, w] & bm[w]:
                    empty = False
                    break
            if not empty:
                break
    free(bm)
    return empty


def count_between(const uint64_t[:, ::1] adj, const int64_t[::1] s, const int64_t[::1] v):
    """Number of edges with one endpoint in ``s`` and the other in ``v``."""
    cdef Py_ssize_t words = adj.shape[1]
    cdef Py_ssize_t i, w
    cdef int64_t u
    cdef int64_t total = 0
    cdef uint64_t* bm
    if s.shape[0] == 0 or v.shape[0] == 0:
        return 0
    bm = _bitmap(v, words)
    if bm == NULL:
        raise MemoryError()
    with nogil:
        for i in range(s.shape[0]):
            u = s[i]
            for w in range(words):
                total += __builtin_popcountll(adj[u, w] & bm[w])
    free(bm)
    return total


def count_within(const uint64_t[:, ::1] adj, const int64_t[::1] s):
    """Number of edges with both endpoints in ``s``."""
    cdef Py_ssize_t words = adj.shape[1]
    cdef Py_ssize_t i, w
    cdef int64_t u
    cdef int64_t total = 0
    cdef uint64_t* bm
    if s.shape[0] < 2:
        return 0
    bm = _bitmap(s, words)
    if bm == NULL:
        raise MemoryError()
    with nogil:
        for i in range(s.shape[0]):
            u = s[i]
            for w in range(words):
                total += __builtin_popcountll(adj[u, w] & bm[w])
    free(bm)
    return total // 2
