"""Pure numpy implementations of the oracle kernels.

Same signatures and semantics as the compiled ``_ckernels`` module.
"""

from __future__ import annotations

import numpy as np


def _bitmap(idx: np.ndarray, words: int) -> np.ndarray:
    bits = np.zeros(words * 64, dtype=np.uint8)
    bits[idx] = 1
    return np.packbits(bits, bitorder="little").view("<u8")


def _popcount(x: np.ndarray) -> int:
    return int(np.unpackbits(x.view(np.uint8)).sum())


def cross_empty(adj: np.ndarray, s: np.ndarray, v: np.ndarray) -> bool:
    if len(s) == 0 or len(v) == 0:
        return True
    if len(s) > len(v):
        s, v = v, s
    bm = _bitmap(v, adj.shape[1])
    return not np.any(adj[s] & bm)


def within_empty(adj: np.ndarray, s: np.ndarray) -> bool:
    if len(s) < 2:
        return True
    bm = _bitmap(s, adj.shape[1])
    return not np.any(adj[s] & bm)


def count_between(adj: np.ndarray, s: np.ndarray, v: np.ndarray) -> int:
    if len(s) == 0 or len(v) == 0:
        return 0
    bm = _bitmap(v, adj.shape[1])
    return _popcount(adj[s] & bm)


def count_within(adj: np.ndarray, s: np.ndarray) -> int:
    if len(s) < 2:
        return 0
    bm = _bitmap(s, adj.shape[1])
    return _popcount(adj[s] & bm) // 2
