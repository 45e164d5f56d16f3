"""Edge-list text files: a ``n m`` header line, then ``u v`` per edge.

Vertices are 0-based; lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import os
from typing import TextIO

from .errors import IngestError
from .graph import Graph, build_graph


def parse_edge_list(stream: TextIO) -> Graph:
    header = None
    edges = []
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            a, b = (int(x) for x in parts)
        except ValueError:
            raise IngestError(f"line {lineno}: expected two integers, got {line!r}") from None
        if header is None:
            header = (a, b)
        else:
            edges.append((a, b))
    if header is None:
        raise IngestError("missing 'n m' header line")
    n, m = header
    if len(edges) != m:
        raise IngestError(f"header declares {m} edges, found {len(edges)}")
    try:
        return build_graph(n, edges)
    except ValueError as exc:
        raise IngestError(str(exc)) from exc


def read_edge_list(path: str | os.PathLike) -> Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_edge_list(fh)
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc


def write_edge_list(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges.tolist():
            fh.write(f"{u} {v}\n")
