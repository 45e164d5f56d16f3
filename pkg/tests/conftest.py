from __future__ import annotations

import itertools

import numpy as np
import pytest

from edgeoracle.graph import build_graph
from edgeoracle.oracles import OracleSession


def all_graphs(n: int):
    """Every labelled simple graph on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield build_graph(n, [p for i, p in enumerate(pairs) if bits >> i & 1])


def random_graphs(count: int, max_n: int = 64, seed: int = 0):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(2, max_n + 1))
        p = float(rng.choice([0.02, 0.1, 0.3, 0.6]))
        mask = np.triu(rng.random((n, n)) < p, k=1)
        yield build_graph(n, np.argwhere(mask))


class CallCounter:
    """Counts oracle invocations independently of the session ledger."""

    def __init__(self, monkeypatch):
        self.bis = 0
        self.is_ = 0
        orig_bis, orig_is, orig_pairs = OracleSession._bis, OracleSession._is, OracleSession._is_pairs

        def bis(session, s, v):
            self.bis += 1
            return orig_bis(session, s, v)

        def is_(session, s):
            self.is_ += 1
            return orig_is(session, s)

        def pairs(session, u, v):
            self.is_ += len(u)
            return orig_pairs(session, u, v)

        monkeypatch.setattr(OracleSession, "_bis", bis)
        monkeypatch.setattr(OracleSession, "_is", is_)
        monkeypatch.setattr(OracleSession, "_is_pairs", pairs)


@pytest.fixture
def call_counter(monkeypatch):
    return CallCounter(monkeypatch)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# One verdict line per acceptance criterion, echoed after the run.
VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        VERDICTS.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
