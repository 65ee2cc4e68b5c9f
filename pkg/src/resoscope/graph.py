"""Temporal graph model and file ingestion.

A temporal graph is a fixed node set plus timestamped edge events over
integer times 0..max_time.  Node identifiers from input files are interned
to dense integers; the original names are kept in a side table for output.
Instances are immutable after construction and safe to share across
threads and worker processes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional

import numpy as np

UNLABELED = "∅"  # sentinel label for nodes without metadata

SOCIOPATTERNS_TICK_SECONDS = 20


class ParseError(ValueError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(ValueError):
    """Invalid parameter value for an operation."""


@dataclass(frozen=True)
class TemporalGraph:
    """Immutable temporal graph with interned integer node ids.

    ``edges_u``, ``edges_v`` and ``times`` are parallel arrays holding one
    entry per (edge, t) event, deduplicated, with u < v and
    0 <= t <= max_time.  ``node_names`` maps interned id -> original name.
    """

    node_names: tuple[str, ...]
    edges_u: np.ndarray
    edges_v: np.ndarray
    times: np.ndarray
    max_time: int
    labels: Optional[dict[int, str]] = None
    self_loops_dropped: int = 0
    initial_resolution: int = field(default=1, init=False)

    @property
    def num_nodes(self) -> int:
        return len(self.node_names)

    @property
    def num_events(self) -> int:
        return len(self.times)

    @property
    def nodes(self) -> range:
        return range(len(self.node_names))

    def events(self) -> Iterable[tuple[int, int, int]]:
        return zip(self.edges_u.tolist(), self.edges_v.tolist(), self.times.tolist())

    def label_of(self, node: int) -> str:
        if self.labels is None:
            return UNLABELED
        return self.labels.get(node, UNLABELED)

    def with_labels(self, labels: dict[int, str]) -> "TemporalGraph":
        return TemporalGraph(
            node_names=self.node_names,
            edges_u=self.edges_u,
            edges_v=self.edges_v,
            times=self.times,
            max_time=self.max_time,
            labels=dict(labels),
            self_loops_dropped=self.self_loops_dropped,
        )


def _build(
    raw_events: Iterable[tuple[str, str, int]],
    self_loops: int,
    labels_by_name: Optional[dict[str, str]] = None,
) -> TemporalGraph:
    """Intern names, rebase times to 0 and deduplicate (edge, t) pairs."""
    ids: dict[str, int] = {}
    dedup: set[tuple[int, int, int]] = set()
    for a, b, t in raw_events:
        ia = ids.setdefault(a, len(ids))
        ib = ids.setdefault(b, len(ids))
        if ia > ib:
            ia, ib = ib, ia
        dedup.add((ia, ib, t))
    if not dedup:
        raise ParseError("no edge events found in input")
    tri = sorted(dedup, key=lambda e: (e[2], e[0], e[1]))
    u = np.array([e[0] for e in tri], dtype=np.int64)
    v = np.array([e[1] for e in tri], dtype=np.int64)
    t = np.array([e[2] for e in tri], dtype=np.int64)
    t_min = int(t.min())
    t -= t_min
    names = tuple(sorted(ids, key=ids.__getitem__))
    labels = None
    if labels_by_name:
        labels = {ids[n]: lab for n, lab in labels_by_name.items() if n in ids}
    return TemporalGraph(
        node_names=names,
        edges_u=u,
        edges_v=v,
        times=t,
        max_time=int(t.max()),
        labels=labels,
        self_loops_dropped=self_loops,
    )


def _decode_lines(source) -> list[str]:
    if isinstance(source, (str, bytes)):
        data = source
    elif hasattr(source, "read"):
        data = source.read()
    else:
        raise ParseError("unreadable source")
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    return data.splitlines()


def detect_format(lines: list[str]) -> str:
    """Best-effort format detection from the first non-comment line."""
    for line in lines:
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        low = s.lower().replace(";", ",")
        if "," in s or "source" in low:
            fields = [f.strip().lower() for f in low.split(",")]
            if {"source", "target", "time"} <= set(fields):
                return "csv-header"
            return "csv-header" if any(not _is_int(f) for f in s.split(",")) else "triple"
        parts = s.split()
        if len(parts) >= 4:
            return "sociopatterns"
        return "triple"
    raise ParseError("empty input")


def _is_int(s: str) -> bool:
    try:
        int(s)
        return True
    except ValueError:
        return False


def parse_edges(source, format: str = "auto") -> TemporalGraph:
    """Parse a temporal edge list into a TemporalGraph.

    Formats:
      - ``triple``: whitespace-separated ``u v t`` lines, ``#`` comments.
      - ``sociopatterns``: ``t i j [Ci Cj]`` with t in raw seconds on a
        20-second tick; node class columns, when present, are attached as
        labels.
      - ``csv-header``: header row naming columns source,target,time.

    Times are rebased so the minimum observed tick maps to 0.
    Duplicate (edge, t) pairs are collapsed; self-loops are dropped and
    counted in ``self_loops_dropped``.
    """
    lines = _decode_lines(source)
    if format == "auto":
        format = detect_format(lines)
    if format == "triple":
        return _parse_triple(lines)
    if format == "sociopatterns":
        return _parse_sociopatterns(lines)
    if format == "csv-header":
        return _parse_csv_header(lines)
    raise ParameterError(f"unknown edge format: {format!r}")


def _parse_triple(lines: list[str]) -> TemporalGraph:
    events = []
    loops = 0
    for no, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v t', got {s!r}", no)
        a, b, ts = parts
        if not _is_int(ts):
            raise ParseError(f"non-integer time {ts!r}", no)
        if a == b:
            loops += 1
            continue
        events.append((a, b, int(ts)))
    return _build(events, loops)


def _parse_sociopatterns(lines: list[str]) -> TemporalGraph:
    events = []
    labels: dict[str, str] = {}
    loops = 0
    for no, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) not in (3, 5):
            raise ParseError(f"expected 't i j [Ci Cj]', got {s!r}", no)
        ts, a, b = parts[0], parts[1], parts[2]
        if not _is_int(ts):
            raise ParseError(f"non-integer time {ts!r}", no)
        if a == b:
            loops += 1
            continue
        t = int(ts) // SOCIOPATTERNS_TICK_SECONDS
        events.append((a, b, t))
        if len(parts) == 5:
            labels[a] = parts[3]
            labels[b] = parts[4]
    return _build(events, loops, labels or None)


def _parse_csv_header(lines: list[str]) -> TemporalGraph:
    import csv

    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty input")
    header = [c.strip().lower() for c in rows[0]]
    try:
        si, ti, wi = header.index("source"), header.index("target"), header.index("time")
    except ValueError:
        raise ParseError("csv-header format requires source,target,time columns", 1)
    events = []
    loops = 0
    for no, row in enumerate(rows[1:], start=2):
        if len(row) <= max(si, ti, wi):
            raise ParseError(f"short row {row!r}", no)
        a, b, ts = row[si].strip(), row[ti].strip(), row[wi].strip()
        if not _is_int(ts):
            raise ParseError(f"non-integer time {ts!r}", no)
        if a == b:
            loops += 1
            continue
        events.append((a, b, int(ts)))
    return _build(events, loops)


def parse_labels(source, graph: TemporalGraph) -> tuple[dict[int, str], list[str]]:
    """Parse a ``node,label`` CSV into a label map over interned ids.

    Returns (labels, unknown_nodes).  Labels naming nodes absent from the
    graph are reported in ``unknown_nodes`` and excluded, not fatal.
    An empty file yields an empty map (single-label mode).
    """
    lines = _decode_lines(source)
    name_to_id = {n: i for i, n in enumerate(graph.node_names)}
    labels: dict[int, str] = {}
    unknown: list[str] = []
    for no, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = [p.strip() for p in s.split(",")]
        if len(parts) < 2:
            raise ParseError(f"expected 'node,label', got {s!r}", no)
        name, lab = parts[0], parts[1]
        if no == 1 and name.lower() in ("node", "id") and lab.lower() in ("label", "class"):
            continue  # optional header row
        if name in name_to_id:
            labels[name_to_id[name]] = lab
        else:
            unknown.append(name)
    return labels, unknown


def truncate(g: TemporalGraph, max_time: int) -> TemporalGraph:
    """Drop events after ``max_time`` and clamp the time range.

    Nodes losing all events stay in the node set; they simply never appear
    in snapshots.  ``max_time >= g.max_time`` is the identity.
    """
    if max_time < 0:
        raise ParameterError("max_time must be >= 0")
    if max_time >= g.max_time:
        return g
    keep = g.times <= max_time
    return TemporalGraph(
        node_names=g.node_names,
        edges_u=g.edges_u[keep],
        edges_v=g.edges_v[keep],
        times=g.times[keep],
        max_time=max_time,
        labels=g.labels,
        self_loops_dropped=g.self_loops_dropped,
    )


def serialize_triple(g: TemporalGraph) -> str:
    """Write the graph in triple format using original node names."""
    out = []
    for u, v, t in g.events():
        out.append(f"{g.node_names[u]} {g.node_names[v]} {t}")
    return "\n".join(out) + "\n"


def load_graph(
    edges_path: str,
    labels_path: Optional[str] = None,
    format: str = "auto",
    max_time: Optional[int] = None,
) -> TemporalGraph:
    """Convenience loader: parse edges (+ optional labels), then truncate."""
    import gzip

    opener = gzip.open if str(edges_path).endswith(".gz") else open
    with opener(edges_path, "rb") as fh:  # type: ignore[operator]
        g = parse_edges(fh, format=format)
    if labels_path:
        with open(labels_path, "rb") as fh:
            labels, _unknown = parse_labels(fh, g)
        g = g.with_labels(labels)
    if max_time is not None:
        g = truncate(g, max_time)
    return g
