"""Canonical serialization shared by the CLI and the HTTP service.

Every artifact is rendered through ``canonical_json`` (sorted keys,
compact separators) so the two interfaces produce byte-identical output
for identical parameters.
"""

from __future__ import annotations

import io
import json
from fractions import Fraction
from typing import Optional

from .features import FEATURE_NAMES, FeatureCurves, GlobalFeatures, SnapshotFeatureRow
from .graph import TemporalGraph, UNLABELED
from .layout import FlowSet, LayoutSpec, SnapshotGraph
from .metrics import Explanation, SuggestionCurve
from .zigzag.barcode import BarcodeResult

SCHEMA_VERSION = "v1"


def _num(x):
    if isinstance(x, Fraction):
        return float(x) if x.denominator != 1 else int(x)
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def canonical_json(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False).encode()


def meta_dict(g: TemporalGraph, name: str = "") -> dict:
    labels = sorted({g.label_of(n) for n in g.nodes}) if g.labels else [UNLABELED]
    return {
        "schema": SCHEMA_VERSION,
        "name": name,
        "nodes": g.num_nodes,
        "events": g.num_events,
        "max_time": g.max_time,
        "labels": labels,
        "self_loops_dropped": g.self_loops_dropped,
    }


def barcode_dict(result: BarcodeResult, include_members: bool = False) -> dict:
    labels = result.label_map or {}
    bars = []
    for b in result.bars:
        entry = {
            "id": b.id,
            "birth": _num(b.birth),
            "death": _num(b.death),
            "birth_index": b.birth_index,
            "death_index": b.death_index,
            "death_cause": b.death_cause,
        }
        if b.merged_into is not None:
            entry["merged_into"] = b.merged_into
        if b.split_from is not None:
            entry["split_from"] = b.split_from
        if b.members is not None:
            ks = list(range(b.birth_index, b.death_index + 1))
            entry["sizes"] = [len(b.members[k]) for k in ks]
            per_label: dict[str, list[int]] = {}
            for i, k in enumerate(ks):
                for n in b.members[k]:
                    lab = labels.get(n, UNLABELED)
                    per_label.setdefault(lab, [0] * len(ks))[i] += 1
            entry["labels"] = per_label
            if include_members:
                entry["members"] = [sorted(b.members[k]) for k in ks]
            if b.seam_breaks:
                entry["seam_breaks"] = sorted(b.seam_breaks)
        bars.append(entry)
    return {
        "schema": SCHEMA_VERSION,
        "method": result.method,
        "resolution": result.resolution,
        "snapshots": result.count,
        "max_time": result.max_time,
        "bars": bars,
    }


def curve_rows(curve: SuggestionCurve) -> list[dict]:
    peak_at = {s.peak_index: s for s in curve.peaks}
    rows = []
    for i in range(len(curve.raw)):
        s = peak_at.get(i)
        rows.append(
            {
                "r_left": curve.resolutions[i],
                "r_right": curve.resolutions[i + 1],
                "raw": _num(curve.raw[i]),
                "shift": _num(curve.shifts[i]),
                "normalized": _num(curve.normalized[i]),
                "is_peak": s is not None,
                "prominence": _num(s.prominence) if s else 0,
            }
        )
    return rows


def curve_csv(curve: SuggestionCurve) -> str:
    out = io.StringIO()
    out.write("r_left,r_right,raw,shift,normalized,is_peak,prominence\n")
    for row in curve_rows(curve):
        out.write(
            f"{row['r_left']},{row['r_right']},{row['raw']},{row['shift']},"
            f"{row['normalized']},{int(row['is_peak'])},{row['prominence']}\n"
        )
    return out.getvalue()


def curve_dict(curve: SuggestionCurve) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "method": curve.method,
        "metric": curve.metric,
        "points": curve_rows(curve),
    }


def suggestions_dict(curve: SuggestionCurve) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "method": curve.method,
        "metric": curve.metric,
        "resolutions": [s.resolution for s in curve.peaks],
        "peaks": [
            {
                "resolution": s.resolution,
                "pair": list(curve.pair(s.peak_index)),
                "prominence": _num(s.prominence),
                "raw": _num(s.raw),
                "normalized": _num(s.normalized),
                "classification": s.classification,
            }
            for s in curve.peaks
        ],
    }


def layout_dict(spec: LayoutSpec) -> dict:
    return {
        "schema": spec.schema,
        "method": spec.method,
        "resolution": spec.resolution,
        "ordering": spec.ordering,
        "snapshots": spec.count,
        "scale": spec.scale,
        "filters": {"min_nodes": spec.min_nodes, "min_duration": spec.min_duration},
        "tracks": spec.tracks,
        "track_heights": spec.track_heights,
        "anchors": spec.anchors,
        "bars": [
            {
                "id": b.bar_id,
                "birth_index": b.birth_index,
                "death_index": b.death_index,
                "birth": _num(b.birth),
                "death": _num(b.death),
                "track": b.track,
                "baseline": _num(b.baseline),
                "heights": b.heights,
                "offsets": [_num(o) for o in b.offsets],
                "segments": [
                    [{"label": s.label, "count": s.count} for s in seg] for seg in b.segments
                ],
                "seam_breaks": b.seam_breaks,
            }
            for b in spec.bars
        ],
    }


def flows_dict(flows: FlowSet) -> dict:
    return {
        "schema": flows.schema,
        "mode": flows.mode,
        "key": flows.key,
        "merges": [
            {"source": f.source_bar, "target": f.target_bar, "at_index": f.at_index}
            for f in flows.merges
        ],
        "splits": [
            {"source": f.source_bar, "target": f.target_bar, "at_index": f.at_index}
            for f in flows.splits
        ],
        "label_flows": [
            {
                "label": f.label,
                "from_index": f.from_index,
                "source": f.source_bar,
                "target": f.target_bar,
                "count": f.count,
            }
            for f in flows.label_flows
        ],
    }


def snapshot_dict(s: SnapshotGraph) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "method": s.method,
        "resolution": s.resolution,
        "index": s.index,
        "anchor": _num(s.anchor),
        "nodes": s.nodes,
        "edges": [list(e) for e in s.edges],
    }


def explanation_dict(e: Explanation, node_names) -> dict:
    w = e.witness
    witness = {"kind": w.kind}
    if w.left is not None:
        witness["low_bar"] = list(w.left)
    if w.right is not None:
        witness["high_bar"] = list(w.right)
    if w.side is not None:
        witness["side"] = "low" if w.side == 1 else "high"
    return {
        "schema": SCHEMA_VERSION,
        "method": e.method,
        "r_low": e.r_low,
        "r_high": e.r_high,
        "distance": _num(e.distance),
        "witness": witness,
        "low_bar_ids": e.low_bar_ids,
        "high_bar_ids": e.high_bar_ids,
        "node_ids": e.node_ids,
        "node_names": [node_names[n] for n in e.node_ids],
    }


def snapshot_features_csv(rows: list[SnapshotFeatureRow]) -> str:
    out = io.StringIO()
    out.write("index,nodes,edges,density,components,mean_degree,transitivity\n")
    for r in rows:
        out.write(
            f"{r.index},{r.nodes},{r.edges},{r.density:.6g},{r.components},"
            f"{r.mean_degree:.6g},{r.transitivity:.6g}\n"
        )
    return out.getvalue()


def feature_curves_dict(fc: FeatureCurves) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "method": fc.method,
        "resolutions": fc.resolutions,
        "means": fc.means,
        "derivatives": fc.derivatives,
        "distribution_l2": fc.distribution_l2,
    }


def feature_curves_csv(fc: FeatureCurves) -> str:
    out = io.StringIO()
    cols = ",".join(FEATURE_NAMES)
    out.write(f"resolution,{cols}\n")
    for i, r in enumerate(fc.resolutions):
        vals = ",".join(f"{fc.means[n][i]:.6g}" for n in FEATURE_NAMES)
        out.write(f"{r},{vals}\n")
    return out.getvalue()


def global_features_dict(gf: GlobalFeatures) -> dict:
    def col(xs):
        return [None if x is None else _num(round(x, 9)) for x in xs]

    payload = {
        "schema": SCHEMA_VERSION,
        "method": gf.method,
        "resolutions": gf.resolutions,
        "burstiness": col(gf.burstiness),
        "edge_lifetime": col(gf.lifecycle),
        "stability": col(gf.stability),
        "fidelity": col(gf.fidelity),
        "total_persistence": col(gf.total_persistence),
        "approximate": ["stability", "fidelity"],
    }
    if gf.mds is not None:
        payload["mds"] = col(gf.mds)
        payload["mds_stress"] = _num(round(gf.mds_stress, 9))
    if gf.balance_resolution is not None:
        payload["balance_resolution"] = gf.balance_resolution
    return payload


def global_features_csv(gf: GlobalFeatures) -> str:
    out = io.StringIO()
    out.write("resolution,burstiness,edge_lifetime,stability,fidelity,total_persistence\n")
    for i, r in enumerate(gf.resolutions):
        def fmt(x):
            return "" if x is None else f"{x:.6g}"

        out.write(
            f"{r},{fmt(gf.burstiness[i])},{fmt(gf.lifecycle[i])},{fmt(gf.stability[i])},"
            f"{fmt(gf.fidelity[i])},{fmt(gf.total_persistence[i])}\n"
        )
    return out.getvalue()
