"""Experiment driver: seeded trial sweeps, ground-truth comparison, CSV/JSON output.

Seeding
-------
Trial ``i`` uses ``seed = base_seed + i``.  Independent streams are derived as
``default_rng(SeedSequence(seed, spawn_key=(stream,)))`` with stream 0 for
graph generation and stream 1 for the estimator.  The graph is generated once
per experiment from ``base_seed``.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Sequence

import numpy as np

from .bis_estimator import BisParams, bis_estimate_degree, bis_estimate_edges, coarse_with
from .edgelist import read_edge_list
from .errors import ConfigError
from .exact import bis_exact_all, edge_count, is_exact_within
from .generators import generate
from .graph import Graph, VertexSet, split_by_colors, true_edges_between
from .is_estimator import IsParams, is_estimate_edges
from .oracles import OracleSession
from .report import EstimateReport

ALGORITHMS = ("bis", "is", "bis-degree", "exact-bis", "exact-is")
PRESETS = ("practical", "theory")
FORMATS = ("csv", "json")
CSV_VERSION = "# edgeoracle-trials v1"

GRAPH_STREAM = 0
ESTIMATOR_STREAM = 1


def stream(seed: int, stream_id: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream_id,)))


@dataclass
class ExperimentConfig:
    graph: str
    algo: str = "bis"
    eps: float = 0.2
    preset: str = "practical"
    trials: int = 1
    base_seed: int = 0
    out: str | None = None
    format: str = "csv"
    sizes: list[int] | None = None
    vertex: int = 0
    workers: int = 1
    timing: bool = False
    trace: str | None = None

    def validate(self) -> "ExperimentConfig":
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"algo must be one of {', '.join(ALGORITHMS)}, got {self.algo!r}")
        if self.preset not in PRESETS:
            raise ConfigError(f"preset must be one of {', '.join(PRESETS)}, got {self.preset!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError(f"trials must be an integer >= 1, got {self.trials!r}")
        if not 0 < self.eps < 1:
            raise ConfigError(f"eps must lie in (0, 1), got {self.eps}")
        if self.base_seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.sizes is not None and any(s < 1 for s in self.sizes):
            raise ConfigError("sizes must be positive")
        return self

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "graph" not in data:
            raise ConfigError("config needs a graph source")
        return cls(**data).validate()


@dataclass
class TrialRow:
    n: int
    m_true: int
    estimate: float
    rel_error: float
    bis_queries: int
    is_queries: int
    rounds: int
    wall_ms: float
    seed: int
    flags: str = ""


COLUMNS = [f.name for f in fields(TrialRow)]


@dataclass
class ExperimentResult:
    rows: list[TrialRow]
    summary: dict


# ---------------------------------------------------------------------------
# Graph sources


def _parse_value(text: str) -> int | float:
    try:
        return int(text)
    except ValueError:
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"bad generator parameter value {text!r}") from None


def parse_graph_spec(spec: str) -> tuple[str, dict[str, Any]] | None:
    """``gen:family:k=v,...`` to ``(family, params)``; None for a file path."""
    if not spec.startswith("gen:"):
        return None
    _, _, rest = spec.partition(":")
    family, _, plist = rest.partition(":")
    params: dict[str, Any] = {}
    for item in filter(None, plist.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"generator parameter {item!r} is not key=value")
        params[key.strip()] = _parse_value(value.strip())
    return family, params


def load_graph(spec: str, seed: int, size: int | None = None) -> Graph:
    """Generate or read the graph named by ``spec``; ``size`` overrides ``n``."""
    parsed = parse_graph_spec(spec)
    if parsed is None:
        if size is not None:
            raise ConfigError("a size ladder needs a generator graph source")
        return read_edge_list(spec)
    family, params = parsed
    if size is not None:
        params["n"] = size
    return generate(family, params, stream(seed, GRAPH_STREAM))


# ---------------------------------------------------------------------------
# Trials


def ground_truth(graph: Graph, config: ExperimentConfig) -> int:
    if config.algo == "bis-degree":
        if not 0 <= config.vertex < graph.n:
            raise ConfigError(f"vertex {config.vertex} outside [0, {graph.n})")
        return graph.degree(config.vertex)
    return graph.m


def run_algorithm(session: OracleSession, config: ExperimentConfig, rng: np.random.Generator, seed: int) -> EstimateReport:
    n = session.n
    if config.algo == "bis":
        return bis_estimate_edges(session, BisParams.preset_for(config.preset, n, config.eps), rng, seed=seed)
    if config.algo == "is":
        return is_estimate_edges(session, IsParams.preset_for(config.preset, config.eps), rng, seed=seed)
    if config.algo == "bis-degree":
        report = bis_estimate_degree(session, config.vertex, config.eps, rng)
    elif config.algo == "exact-bis":
        report = EstimateReport(float(edge_count(bis_exact_all(session))), exact_flag=True)
    else:
        report = EstimateReport(float(edge_count(is_exact_within(session, VertexSet.full(n)))), exact_flag=True)
    report.seed = seed
    report.preset = config.preset
    report.queries = session.ledger.snapshot()
    return report


def run_trial(graph: Graph, config: ExperimentConfig, index: int, m_true: int) -> TrialRow:
    seed = config.base_seed + index
    traced = config.trace is not None and index == 0
    session = OracleSession(graph, trace=traced)
    start = time.perf_counter()
    report = run_algorithm(session, config, stream(seed, ESTIMATOR_STREAM), seed)
    elapsed = (time.perf_counter() - start) * 1000 if config.timing else 0.0
    if traced:
        with open(config.trace, "w", encoding="utf-8") as fh:
            session.ledger.dump_trace(fh)
    flags = list(report.flags)
    if report.exact_flag:
        flags.insert(0, "exact")
    if report.fallback_flag:
        flags.insert(0, "fallback")
    return TrialRow(
        n=graph.n,
        m_true=m_true,
        estimate=report.estimate,
        rel_error=abs(report.estimate - m_true) / max(m_true, 1),
        bis_queries=report.queries["bis"],
        is_queries=report.queries["is"],
        rounds=report.rounds,
        wall_ms=elapsed,
        seed=seed,
        flags=";".join(flags),
    )


def _trial_job(args):
    graph, config, index, m_true = args
    return run_trial(graph, config, index, m_true)


def summarize(rows: Sequence[TrialRow], eps: float) -> dict:
    rel = np.array([r.rel_error for r in rows])
    bis = np.array([r.bis_queries for r in rows])
    iq = np.array([r.is_queries for r in rows])

    def q(a, p):
        return float(np.quantile(a, p))

    return {
        "trials": len(rows),
        "success_rate": float(np.mean(rel <= eps)),
        "rel_error_p50": q(rel, 0.5),
        "rel_error_p95": q(rel, 0.95),
        "bis_p50": q(bis, 0.5),
        "bis_p95": q(bis, 0.95),
        "is_p50": q(iq, 0.5),
        "is_p95": q(iq, 0.95),
    }


def run_experiment(config: ExperimentConfig, graph: Graph | None = None) -> ExperimentResult:
    """Run ``config.trials`` isolated trials; rows come back in trial order."""
    config.validate()
    if graph is None:
        graph = load_graph(config.graph, config.base_seed)
    m_true = ground_truth(graph, config)
    jobs = [(graph, config, i, m_true) for i in range(config.trials)]
    if config.workers > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_trial_job, jobs))
    else:
        rows = [_trial_job(job) for job in jobs]
    return ExperimentResult(rows, summarize(rows, config.eps))


# ---------------------------------------------------------------------------
# Scaling sweeps


@dataclass
class SweepResult:
    rows: list[TrialRow]
    table: list[dict] = field(default_factory=list)
    slope_vs_n: float = float("nan")
    slope_vs_m: float = float("nan")


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.maximum(np.asarray(y, dtype=float), 1.0))
    if len(lx) < 2 or np.ptp(lx) == 0:
        return float("nan")
    return float(np.polyfit(lx, ly, 1)[0])


def scaling_sweep(config: ExperimentConfig) -> SweepResult:
    """Median query counts per ladder size and their log-log slopes vs ``n`` and ``m``."""
    config.validate()
    if not config.sizes or len(config.sizes) < 4:
        raise ConfigError("a scaling sweep needs at least 4 sizes")
    result = SweepResult([])
    for size in config.sizes:
        graph = load_graph(config.graph, config.base_seed, size=size)
        part = run_experiment(config, graph)
        result.rows.extend(part.rows)
        queries = [r.bis_queries + r.is_queries for r in part.rows]
        result.table.append(
            {
                "n": graph.n,
                "m": graph.m,
                "median_bis": float(np.median([r.bis_queries for r in part.rows])),
                "median_is": float(np.median([r.is_queries for r in part.rows])),
                "median_queries": float(np.median(queries)),
                "success_rate": part.summary["success_rate"],
            }
        )
    qs = [row["median_queries"] for row in result.table]
    result.slope_vs_n = loglog_slope([row["n"] for row in result.table], qs)
    result.slope_vs_m = loglog_slope([max(row["m"], 1) for row in result.table], qs)
    return result


# ---------------------------------------------------------------------------
# IS-simulated coarse estimation (a negative result)


@dataclass(frozen=True)
class CoarseDemoRow:
    seed: int
    estimate: int
    m: int
    m_cross: int
    factor: float


def is_coarse_demo(graph: Graph, trials: int, base_seed: int = 0, preset: str = "practical") -> list[CoarseDemoRow]:
    """Run the coarse estimator with ``IS(S' | V')`` standing in for ``BIS(S', V')``.

    The substitute also fires on edges inside ``S'`` or inside ``V'``, so on
    a dense clique hidden among isolated vertices it accepts at every guess
    and the output lands near ``n^2`` instead of near ``m``.
    """
    n = graph.n
    params = BisParams.preset_for(preset, n, 0.5)
    out = []
    for i in range(trials):
        seed = base_seed + i
        rng = stream(seed, ESTIMATOR_STREAM)
        session = OracleSession(graph)
        s, v = split_by_colors(np.arange(n, dtype=np.int64), rng.integers(0, 2, size=n), 2)
        cross = lambda a, b: session._is(np.concatenate((a, b)))  # noqa: E731
        est = coarse_with(cross, s, v, n, params.trials(n), rng).value
        m = graph.m
        factor = max(est, 1) / max(m, 1)
        out.append(
            CoarseDemoRow(seed, est, m, true_edges_between(graph, VertexSet.from_indices(n, s), VertexSet.from_indices(n, v)), max(factor, 1 / factor))
        )
    return out


# ---------------------------------------------------------------------------
# Output


def format_value(value: Any) -> str:
    if isinstance(value, float):
        return "%.6g" % value
    return str(value)


def rows_to_csv(rows: Sequence[TrialRow]) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([format_value(getattr(row, c)) for c in COLUMNS])
    return buf.getvalue()


def parse_trial_csv(text: str) -> list[TrialRow]:
    lines = text.splitlines()
    if not lines or lines[0] != CSV_VERSION:
        raise ConfigError(f"expected CSV version line {CSV_VERSION!r}")
    reader = csv.DictReader(lines[1:])
    if reader.fieldnames != COLUMNS:
        raise ConfigError(f"unexpected CSV columns {reader.fieldnames}")
    types = {f.name: f.type for f in fields(TrialRow)}
    out = []
    for rec in reader:
        values = {}
        for name in COLUMNS:
            kind = types[name]
            raw = rec[name]
            values[name] = int(raw) if kind == "int" else float(raw) if kind == "float" else raw
        out.append(TrialRow(**values))
    return out


def result_to_json(config: ExperimentConfig, rows: Sequence[TrialRow], summary: dict | None = None, extra: dict | None = None) -> str:
    payload = {
        "version": 1,
        "config": asdict(config),
        "rows": [asdict(r) for r in rows],
        "summary": summary,
    }
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_float)


def _json_float(value: Any):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write_output(text: str, path: str | os.PathLike | None) -> None:
    if path is None or str(path) == "-":
        print(text, end="" if text.endswith("\n") else "\n")
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)

