"""Query-accounted BIS/IS oracles over a ground-truth graph.

Answers follow the independence polarity: ``True`` means *no edge*.
Every answered query increments exactly one ledger counter; empty-set
queries are legal and charged like any other.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

import numpy as np

from . import kernels
from .errors import BudgetExceeded, SelfLoop, SetsNotDisjoint, VertexInQuerySet, InvalidVertex
from .graph import Graph, VertexSet, as_vertex_set


@dataclass
class QueryLedger:
    bis_count: int = 0
    is_count: int = 0
    history: deque | None = field(default=None, repr=False)

    @property
    def total(self) -> int:
        return self.bis_count + self.is_count

    def snapshot(self) -> dict:
        return {"bis": self.bis_count, "is": self.is_count}

    def to_json(self) -> str:
        return json.dumps(self.snapshot())

    def dump_trace(self, fh: TextIO) -> None:
        """Write one line per traced query: type, |S|, |V|, answer."""
        for kind, s_size, v_size, answer in self.history or ():
            fh.write(f"{kind} {s_size} {v_size} {int(answer)}\n")


class OracleSession:
    """Answers BIS and IS queries about ``graph`` and keeps the ledger.

    ``budget`` caps the number of answered queries: an int caps the total,
    a mapping may carry ``"bis"``, ``"is"`` and ``"total"`` caps.
    ``trace`` keeps the last ``trace`` queries (``True`` keeps all).

    Not safe for concurrent use; run one session per trial.
    """

    def __init__(self, graph: Graph, budget: int | Mapping[str, int] | None = None, trace: bool | int = False):
        self.graph = graph
        self._adj = graph.adj_words
        if budget is None:
            budget = {}
        elif isinstance(budget, int):
            budget = {"total": budget}
        self.budget = dict(budget)
        history = None
        if trace:
            history = deque(maxlen=None if trace is True else int(trace))
        self.ledger = QueryLedger(history=history)

    @property
    def n(self) -> int:
        return self.graph.n

    def reset(self) -> None:
        self.ledger.bis_count = 0
        self.ledger.is_count = 0
        if self.ledger.history is not None:
            self.ledger.history.clear()

    def _charge(self, kind: str, count: int = 1) -> None:
        """Charge ``count`` queries, answering as many as fit before raising."""
        led = self.ledger
        used = led.bis_count if kind == "bis" else led.is_count
        room, binding = count, None
        cap = self.budget.get(kind)
        if cap is not None and cap - used < room:
            room, binding = max(cap - used, 0), cap
        cap_total = self.budget.get("total")
        if cap_total is not None and cap_total - led.total < room:
            room, binding = max(cap_total - led.total, 0), cap_total
        if kind == "bis":
            led.bis_count += room
        else:
            led.is_count += room
        if room < count:
            raise BudgetExceeded(kind, binding)

    # Unchecked fast paths used by the algorithms: callers guarantee
    # disjointness and range.

    def _bis(self, s: np.ndarray, v: np.ndarray) -> bool:
        self._charge("bis")
        answer = bool(kernels.cross_empty(self._adj, s, v))
        if self.ledger.history is not None:
            self.ledger.history.append(("BIS", len(s), len(v), answer))
        return answer

    def _is(self, s: np.ndarray) -> bool:
        self._charge("is")
        answer = bool(kernels.within_empty(self._adj, s))
        if self.ledger.history is not None:
            self.ledger.history.append(("IS", len(s), 0, answer))
        return answer

    def _is_pairs(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """IS queries on each pair ``{u[i], v[i]}``; True where an edge exists."""
        self._charge("is", len(u))
        exists = (self._adj[u, v >> 6] >> (v & 63).astype(np.uint64)) & np.uint64(1)
        exists = exists.astype(bool)
        if self.ledger.history is not None:
            self.ledger.history.extend(("IS", 2, 0, not e) for e in exists.tolist())
        return exists

    # Validated public queries.

    def bis_query(self, s: VertexSet | Iterable[int], v: VertexSet | Iterable[int]) -> bool:
        """True iff no edge joins ``s`` and ``v``."""
        s = as_vertex_set(self.n, s)
        v = as_vertex_set(self.n, v)
        if not s.isdisjoint(v):
            raise SetsNotDisjoint("BIS query sets must be disjoint")
        return self._bis(s.indices, v.indices)

    def is_query(self, s: VertexSet | Iterable[int]) -> bool:
        """True iff ``s`` is an independent set."""
        s = as_vertex_set(self.n, s)
        return self._is(s.indices)

    def edge_exists(self, u: int, v: int) -> bool:
        """Decide ``{u, v} in E`` with one IS query on ``{u, v}``."""
        if u == v:
            raise SelfLoop(f"edge query on ({u}, {v})")
        self._check_vertex(u)
        self._check_vertex(v)
        return not self._is(np.array([u, v], dtype=np.int64))

    def neighborhood_empty(self, v: int, q: VertexSet | Iterable[int]) -> bool:
        """Emptiness oracle for ``N(v)``: one BIS query on ``({v}, q)``."""
        self._check_vertex(v)
        q = as_vertex_set(self.n, q)
        if v in q:
            raise VertexInQuerySet(f"vertex {v} is in the query set")
        return self._bis(np.array([v], dtype=np.int64), q.indices)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise InvalidVertex(f"vertex {v} outside [0, {self.n})")


# Function-style aliases.

def bis_query(session: OracleSession, s, v) -> bool:
    return session.bis_query(s, v)


def is_query(session: OracleSession, s) -> bool:
    return session.is_query(s)


def edge_existence_via_is(session: OracleSession, u: int, v: int) -> bool:
    return session.edge_exists(u, v)


def neighborhood_emptiness_via_bis(session: OracleSession, v: int, q) -> bool:
    return session.neighborhood_empty(v, q)
