"""Timeslicing: snapshot sequences at a given temporal resolution.

Two methods are supported.  Partition timeslicing cuts [0, N] into
M+1 = floor(N/r)+1 disjoint windows; window k is [k*r, (k+1)*r) except the
last, which is [M*r, N] (half-open interiors keep every event in exactly
one snapshot).  Sliding-window timeslicing builds one snapshot per initial
timestamp k containing every edge with an event inside the closed window
[k - r/2, k + r/2]; r must be even.

Snapshots discard isolated nodes.  The sequence is represented compactly
by per-edge activity intervals over snapshot indices, which is what the
persistence engine consumes; full Snapshot objects are materialized on
demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator

import numpy as np

from .graph import ParameterError, TemporalGraph


@dataclass(frozen=True)
class Snapshot:
    """One timeslice: deduplicated edges and their endpoint nodes."""

    index: int
    nodes: frozenset[int]
    edges: frozenset[tuple[int, int]]

    @property
    def num_components(self) -> int:
        return _component_count(self.nodes, self.edges)


def _component_count(nodes, edges) -> int:
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(parent)
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count


class SnapshotSequence:
    """Ordered snapshots plus the mapping back to initial time.

    ``edge_intervals`` maps each active edge to its merged inclusive
    intervals of snapshot indices; ``node_intervals`` likewise for nodes.
    ``anchor(k)`` is the initial-time value of snapshot k (window midpoint
    for partition, identity for sliding); ``birth_time``/``death_time``
    give the initial-time coordinates used for reporting bars.
    """

    def __init__(
        self,
        method: str,
        resolution: int,
        count: int,
        max_time: int,
        edge_intervals: dict[tuple[int, int], list[tuple[int, int]]],
    ):
        self.method = method
        self.resolution = resolution
        self.count = count
        self.max_time = max_time
        self.edge_intervals = edge_intervals

    def __len__(self) -> int:
        return self.count

    @cached_property
    def node_intervals(self) -> dict[int, list[tuple[int, int]]]:
        per_node: dict[int, list[tuple[int, int]]] = {}
        for (u, v), ivs in self.edge_intervals.items():
            per_node.setdefault(u, []).extend(ivs)
            per_node.setdefault(v, []).extend(ivs)
        return {n: merge_intervals(ivs) for n, ivs in per_node.items()}

    def anchor(self, k: int) -> Fraction:
        if self.method == "partition":
            return Fraction(k * self.resolution * 2 + self.resolution, 2)
        return Fraction(k)

    def birth_time(self, k: int) -> int:
        """Initial-time coordinate of a bar born at snapshot k."""
        if self.method == "partition":
            return k * self.resolution
        return k

    def death_time(self, k: int) -> int:
        """Initial-time coordinate of a bar dying at snapshot k."""
        if self.method == "partition":
            return min((k + 1) * self.resolution - 1, self.max_time)
        return k

    def nearest_index(self, t: float) -> int:
        """Snapshot index whose anchor is nearest t; ties go left."""
        if t < 0 or t > self.max_time:
            raise ParameterError(f"timestamp {t} outside [0, {self.max_time}]")
        if self.method == "sliding":
            return int(round(t + 1e-9)) if t - int(t) != 0.5 else int(t)
        r = self.resolution
        best, best_d = 0, None
        for k in range(self.count):
            d = abs(Fraction(t).limit_denominator() - self.anchor(k))
            if best_d is None or d < best_d:
                best, best_d = k, d
        return best

    def snapshot(self, k: int) -> Snapshot:
        if not 0 <= k < self.count:
            raise ParameterError(f"snapshot index {k} out of range")
        edges = frozenset(
            e for e, ivs in self.edge_intervals.items() if _covers(ivs, k)
        )
        nodes = frozenset(n for e in edges for n in e)
        return Snapshot(index=k, nodes=nodes, edges=edges)

    def __iter__(self) -> Iterator[Snapshot]:
        return (self.snapshot(k) for k in range(self.count))

    def boundary_events(self) -> tuple[list[list[tuple[int, int]]], list[list[tuple[int, int]]]]:
        """Per-index lists of edges starting at k and ending at k.

        starts[k] holds edges whose activity interval begins at k; ends[k]
        those whose interval ends at k (inclusive).  This is the compact
        diff stream the zigzag engine replays.
        """
        starts: list[list[tuple[int, int]]] = [[] for _ in range(self.count)]
        ends: list[list[tuple[int, int]]] = [[] for _ in range(self.count)]
        for e, ivs in self.edge_intervals.items():
            for s, t in ivs:
                starts[s].append(e)
                ends[t].append(e)
        for lst in starts:
            lst.sort()
        for lst in ends:
            lst.sort()
        return starts, ends


def _covers(intervals: list[tuple[int, int]], k: int) -> bool:
    import bisect

    i = bisect.bisect_right(intervals, (k, np.inf)) - 1
    return i >= 0 and intervals[i][0] <= k <= intervals[i][1]


def merge_intervals(pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Merge inclusive integer intervals; adjacent intervals coalesce."""
    if not pairs:
        return []
    pairs = sorted(pairs)
    out = [pairs[0]]
    for s, t in pairs[1:]:
        ls, lt = out[-1]
        if s <= lt + 1:
            if t > lt:
                out[-1] = (ls, t)
        else:
            out.append((s, t))
    return out


def _group_edge_times(g: TemporalGraph) -> dict[tuple[int, int], np.ndarray]:
    order = np.lexsort((g.times, g.edges_v, g.edges_u))
    u, v, t = g.edges_u[order], g.edges_v[order], g.times[order]
    edges: dict[tuple[int, int], np.ndarray] = {}
    if len(t) == 0:
        return edges
    breaks = np.nonzero((u[1:] != u[:-1]) | (v[1:] != v[:-1]))[0] + 1
    starts = np.concatenate(([0], breaks))
    stops = np.concatenate((breaks, [len(t)]))
    for s, e in zip(starts, stops):
        edges[(int(u[s]), int(v[s]))] = t[s:e]
    return edges


def partition_slices(g: TemporalGraph, resolution: int) -> SnapshotSequence:
    """Partition timeslicing: M+1 snapshots of disjoint windows."""
    if resolution < 1:
        raise ParameterError(f"partition resolution must be >= 1, got {resolution}")
    r = resolution
    m = g.max_time // r
    count = m + 1
    edge_intervals: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for edge, ts in _group_edge_times(g).items():
        ks = np.minimum(ts // r, m)
        ks = np.unique(ks)
        edge_intervals[edge] = merge_intervals([(int(k), int(k)) for k in ks])
    return SnapshotSequence("partition", r, count, g.max_time, edge_intervals)


def sliding_slices(g: TemporalGraph, resolution: int) -> SnapshotSequence:
    """Sliding-window timeslicing: one snapshot per initial timestamp."""
    if resolution < 2 or resolution % 2 != 0:
        raise ParameterError(
            f"sliding resolution must be a positive even integer, got {resolution}"
        )
    half = resolution // 2
    count = g.max_time + 1
    edge_intervals: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for edge, ts in _group_edge_times(g).items():
        ivs = [
            (max(0, int(t) - half), min(g.max_time, int(t) + half)) for t in np.unique(ts)
        ]
        edge_intervals[edge] = merge_intervals(ivs)
    return SnapshotSequence("sliding", resolution, count, g.max_time, edge_intervals)


def timeslice(g: TemporalGraph, method: str, resolution: int) -> SnapshotSequence:
    if method == "partition":
        return partition_slices(g, resolution)
    if method == "sliding":
        return sliding_slices(g, resolution)
    raise ParameterError(f"unknown timeslicing method: {method!r}")


def default_grid(g: TemporalGraph, method: str, max_r: int | None = None) -> list[int]:
    """Candidate resolution grid: up to a quarter of the time range."""
    limit = max_r if max_r is not None else max(2, g.max_time // 4)
    if method == "sliding":
        return list(range(2, limit + 1, 2))
    return list(range(1, limit + 1))
