"""Renderable colored-barcode geometry, filtering, flows, and snapshots.

The layout assigns each bar to a horizontal track.  Bars are placed in a
deterministic greedy order (duration desc, max size desc, birth asc, id);
each bar lands on the lowest track whose occupied index extents do not
intersect its own.  A track is as tall as its tallest bar.  Bottom
ordering grows each bar upward from its track baseline; center ordering
splits the height symmetrically about the track centerline.  Colors are a
client concern: segments carry label names and counts only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import ParameterError, TemporalGraph, UNLABELED
from .slicing import SnapshotSequence, timeslice
from .zigzag.barcode import BarcodeResult, OutputBar

LAYOUT_SCHEMA = "layout/v1"


def filter_bars(result: BarcodeResult, min_nodes: int = 0, min_duration: int = 0) -> BarcodeResult:
    """Drop bars with max membership below ``min_nodes`` or fewer alive
    snapshots than ``min_duration``.  Survivors are untouched; after
    filtering the per-snapshot partition property no longer holds."""
    if min_nodes < 0 or min_duration < 0:
        raise ParameterError("filter thresholds must be >= 0")
    if min_nodes == 0 and min_duration == 0:
        return result
    kept = [
        b
        for b in result.bars
        if b.max_size >= min_nodes and b.index_span >= min_duration
    ]
    return BarcodeResult(
        method=result.method,
        resolution=result.resolution,
        count=result.count,
        max_time=result.max_time,
        bars=kept,
        counts=result.counts,
        label_map=result.label_map,
    )


@dataclass(frozen=True)
class Segment:
    label: str
    count: int


@dataclass
class TrackBar:
    bar_id: int
    birth_index: int
    death_index: int
    birth: int
    death: int
    track: int
    baseline: float        # bottom y of the track
    heights: list[int]     # membership size per alive index
    offsets: list[float]   # bottom y of the bar per alive index
    segments: list[list[Segment]]
    seam_breaks: list[int]


@dataclass
class LayoutSpec:
    schema: str
    method: str
    resolution: int
    ordering: str
    count: int
    scale: float
    min_nodes: int
    min_duration: int
    tracks: int
    track_heights: list[int]
    bars: list[TrackBar]
    anchors: list[float] = field(default_factory=list)


def compute_layout(
    result: BarcodeResult,
    ordering: str = "bottom",
    min_nodes: int = 0,
    min_duration: int = 0,
    seq: Optional[SnapshotSequence] = None,
) -> LayoutSpec:
    if ordering not in ("bottom", "center"):
        raise ParameterError(f"unknown ordering {ordering!r}")
    filtered = filter_bars(result, min_nodes, min_duration)
    order = sorted(
        filtered.bars,
        key=lambda b: (-b.index_span, -b.max_size, b.birth_index, b.id),
    )
    tracks: list[list[OutputBar]] = []
    extents: list[list[tuple[int, int]]] = []
    assignment: dict[int, int] = {}
    for bar in order:
        span = (bar.birth_index, bar.death_index)
        placed = False
        for t, occ in enumerate(extents):
            if all(span[1] < s or e < span[0] for s, e in occ):
                occ.append(span)
                tracks[t].append(bar)
                assignment[bar.id] = t
                placed = True
                break
        if not placed:
            extents.append([span])
            tracks.append([bar])
            assignment[bar.id] = len(tracks) - 1

    track_heights = [max((b.max_size for b in bars), default=0) for bars in tracks]
    baselines: list[float] = []
    y = 0.0
    for h in track_heights:
        baselines.append(y)
        y += h

    labels = filtered.label_map or {}
    out_bars: list[TrackBar] = []
    for bar in filtered.bars:
        t = assignment[bar.id]
        heights: list[int] = []
        offsets: list[float] = []
        segments: list[list[Segment]] = []
        center_line = baselines[t] + track_heights[t] / 2.0
        for k in range(bar.birth_index, bar.death_index + 1):
            size = bar.size_at(k)
            heights.append(size)
            if ordering == "bottom":
                offsets.append(baselines[t])
            else:
                offsets.append(center_line - size / 2.0)
            counts: dict[str, int] = {}
            if bar.members:
                for node in bar.members.get(k, ()):
                    lab = labels.get(node, UNLABELED)
                    counts[lab] = counts.get(lab, 0) + 1
            segments.append(
                [Segment(lab, counts[lab]) for lab in sorted(counts)]
            )
        out_bars.append(
            TrackBar(
                bar_id=bar.id,
                birth_index=bar.birth_index,
                death_index=bar.death_index,
                birth=bar.birth,
                death=bar.death,
                track=t,
                baseline=baselines[t],
                heights=heights,
                offsets=offsets,
                segments=segments,
                seam_breaks=sorted(bar.seam_breaks),
            )
        )
    out_bars.sort(key=lambda b: b.bar_id)
    anchors = []
    if seq is not None:
        anchors = [float(seq.anchor(k)) for k in range(seq.count)]
    return LayoutSpec(
        schema=LAYOUT_SCHEMA,
        method=result.method,
        resolution=result.resolution,
        ordering=ordering,
        count=result.count,
        scale=1.0,
        min_nodes=min_nodes,
        min_duration=min_duration,
        tracks=len(tracks),
        track_heights=track_heights,
        bars=out_bars,
        anchors=anchors,
    )


@dataclass(frozen=True)
class MergeFlow:
    source_bar: int  # dying
    target_bar: int  # surviving
    at_index: int


@dataclass(frozen=True)
class SplitFlow:
    source_bar: int  # parent
    target_bar: int  # newly opened
    at_index: int


@dataclass(frozen=True)
class LabelFlow:
    label: str
    from_index: int
    source_bar: int
    target_bar: int
    count: int


@dataclass
class FlowSet:
    schema: str
    mode: str
    key: str
    merges: list[MergeFlow]
    splits: list[SplitFlow]
    label_flows: list[LabelFlow]


def compute_flows(
    result: BarcodeResult,
    mode: str,
    key,
) -> FlowSet:
    """Flows for a selection: by component (merge/split events touching a
    bar) or by label (per-step node movements between bars)."""
    if mode == "component":
        bar_id = int(key)
        by_id = {b.id: b for b in result.bars}
        if bar_id not in by_id:
            raise ParameterError(f"unknown bar id {bar_id}")
        merges = []
        splits = []
        for b in result.bars:
            if b.death_cause == "merge" and b.merged_into is not None:
                if b.id == bar_id or b.merged_into == bar_id:
                    merges.append(MergeFlow(b.id, b.merged_into, b.death_index))
            if b.split_from is not None and (b.id == bar_id or b.split_from == bar_id):
                splits.append(SplitFlow(b.split_from, b.id, b.birth_index))
        return FlowSet(LAYOUT_SCHEMA, mode, str(bar_id), merges, splits, [])
    if mode == "label":
        labels = result.label_map or {}
        wanted = set(key) if isinstance(key, (list, set, tuple)) else {key}
        flows: list[LabelFlow] = []
        for k in range(result.count - 1):
            here = {b.id: b.members.get(k, frozenset()) for b in result.alive_at(k) if b.members}
            there = {b.id: b.members.get(k + 1, frozenset()) for b in result.alive_at(k + 1) if b.members}
            for lab in sorted(wanted):
                nodes = {n for m in here.values() for n in m if labels.get(n, UNLABELED) == lab}
                if not nodes:
                    continue
                counts: dict[tuple[int, int], int] = {}
                for src, mem in here.items():
                    moving = mem & nodes
                    if not moving:
                        continue
                    for dst, dmem in there.items():
                        c = len(moving & dmem)
                        if c:
                            counts[(src, dst)] = counts.get((src, dst), 0) + c
                for (src, dst), c in sorted(counts.items()):
                    flows.append(LabelFlow(lab, k, src, dst, c))
        return FlowSet(LAYOUT_SCHEMA, mode, ",".join(sorted(wanted)), [], [], flows)
    raise ParameterError(f"unknown flow mode {mode!r}")


@dataclass
class SnapshotGraph:
    method: str
    resolution: int
    index: int
    anchor: float
    nodes: list[dict]
    edges: list[tuple[int, int]]


def snapshot_graph(
    g: TemporalGraph,
    method: str,
    resolution: int,
    t: float,
    seq: Optional[SnapshotSequence] = None,
    barcode: Optional[BarcodeResult] = None,
) -> SnapshotGraph:
    """Node-link payload for the snapshot whose anchor is nearest t."""
    seq = seq if seq is not None else timeslice(g, method, resolution)
    k = seq.nearest_index(t)
    snap = seq.snapshot(k)
    comp_of: dict[int, int] = {}
    if barcode is not None:
        for b in barcode.alive_at(k):
            if b.members:
                for n in b.members.get(k, ()):
                    comp_of[n] = b.id
    else:
        parent = {n: n for n in snap.nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in snap.edges:
            parent[find(u)] = find(v)
        for n in snap.nodes:
            comp_of[n] = find(n)
    nodes = [
        {
            "id": n,
            "name": g.node_names[n],
            "label": g.label_of(n),
            "component": comp_of.get(n, n),
        }
        for n in sorted(snap.nodes)
    ]
    return SnapshotGraph(
        method=method,
        resolution=resolution,
        index=k,
        anchor=float(seq.anchor(k)),
        nodes=nodes,
        edges=sorted(snap.edges),
    )
