"""Classical temporal-graph features for cross-validating suggestions.

Per-snapshot rows come from tallies the barcode engine records while it
runs (node/edge/component counts, triangles, triads, consecutive edge-set
overlaps).  Resolution-level curves are means over snapshots, their
forward-difference derivatives, and l2 distances between consecutive
resolutions' per-snapshot curves.  Global features:

  burstiness       (sigma - mu) / (sigma + mu) over inter-activity gaps of
                   each edge's sliced activity, pooled over edges
  lifecycle        mean length of consecutive-active runs over edges
  stability        mean Jaccard similarity of consecutive snapshots' edges
  fidelity         mean per-timestamp Jaccard similarity between the
                   sliced edge activity and the original (r = 1) activity;
                   reconstructed from the cited description, reported as a
                   similarity (higher = closer to the original recording)
  total_persistence  quadratic mean of bar tick spans
  mds              classical 1-D scaling of the pairwise bottleneck matrix

Stability and fidelity are reconstructions (the defining reference gives
no closed formulas), flagged as approximate in serialized metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .graph import ParameterError, TemporalGraph
from .metrics import bottleneck
from .slicing import SnapshotSequence, merge_intervals, timeslice
from .zigzag.barcode import BarcodeResult


@dataclass(frozen=True)
class SnapshotFeatureRow:
    index: int
    nodes: int
    edges: int
    density: float
    components: int
    mean_degree: float
    transitivity: float


def snapshot_features(result: BarcodeResult) -> list[SnapshotFeatureRow]:
    """Per-snapshot features from an engine run with tallies enabled."""
    if result.counts is None:
        raise ParameterError("barcode was computed without feature tallies")
    rows = []
    for k, c in enumerate(result.counts):
        v, e = c.nodes, c.edges
        density = 2.0 * e / (v * (v - 1)) if v > 1 else 0.0
        md = 2.0 * e / v if v > 0 else 0.0
        trans = 3.0 * c.triangles / c.triads if c.triads > 0 else 0.0
        rows.append(
            SnapshotFeatureRow(
                index=k,
                nodes=v,
                edges=e,
                density=density,
                components=c.components,
                mean_degree=md,
                transitivity=trans,
            )
        )
    return rows


FEATURE_NAMES = ("nodes", "edges", "density", "components", "mean_degree", "transitivity")


@dataclass
class FeatureCurves:
    method: str
    resolutions: list[int]
    means: dict[str, list[float]]        # feature -> value per resolution
    derivatives: dict[str, list[float]]  # forward differences, len n-1
    distribution_l2: dict[str, list[float]]  # consecutive l2 distances, len n-1


def _per_snapshot_matrix(rows: list[SnapshotFeatureRow]) -> dict[str, np.ndarray]:
    return {
        "nodes": np.array([r.nodes for r in rows], dtype=float),
        "edges": np.array([r.edges for r in rows], dtype=float),
        "density": np.array([r.density for r in rows], dtype=float),
        "components": np.array([r.components for r in rows], dtype=float),
        "mean_degree": np.array([r.mean_degree for r in rows], dtype=float),
        "transitivity": np.array([r.transitivity for r in rows], dtype=float),
    }


def _resample_to_initial(curve: np.ndarray, seq: SnapshotSequence) -> np.ndarray:
    """Step-interpolate a per-snapshot curve onto the initial time axis."""
    if seq.method == "sliding":
        return curve
    out = np.empty(seq.max_time + 1, dtype=float)
    r = seq.resolution
    for k in range(len(curve)):
        lo = k * r
        hi = seq.max_time + 1 if k == len(curve) - 1 else min((k + 1) * r, seq.max_time + 1)
        out[lo:hi] = curve[k]
    return out


def feature_curves(
    method: str,
    resolutions: Sequence[int],
    rows_of: Callable[[int], tuple[SnapshotSequence, list[SnapshotFeatureRow]]],
) -> FeatureCurves:
    """Mean-feature curves with derivatives and distribution distances."""
    if len(resolutions) < 2:
        raise ParameterError("need at least two resolutions")
    res = list(resolutions)
    means: dict[str, list[float]] = {n: [] for n in FEATURE_NAMES}
    aligned: list[dict[str, np.ndarray]] = []
    for r in res:
        seq, rows = rows_of(r)
        mat = _per_snapshot_matrix(rows)
        for name in FEATURE_NAMES:
            means[name].append(float(mat[name].mean()) if len(rows) else 0.0)
        aligned.append({n: _resample_to_initial(mat[n], seq) for n in FEATURE_NAMES})
    derivatives = {
        n: [means[n][i + 1] - means[n][i] for i in range(len(res) - 1)] for n in FEATURE_NAMES
    }
    dist = {
        n: [
            float(np.linalg.norm(aligned[i + 1][n] - aligned[i][n]))
            for i in range(len(res) - 1)
        ]
        for n in FEATURE_NAMES
    }
    return FeatureCurves(method, res, means, derivatives, dist)


# -- global features -----------------------------------------------------------


def burstiness(seq: SnapshotSequence) -> Optional[float]:
    """(sigma - mu) / (sigma + mu) over pooled inter-activity gaps."""
    gaps: list[int] = []
    for ivs in seq.edge_intervals.values():
        for (s1, t1), (s2, t2) in zip(ivs, ivs[1:]):
            gaps.append(s2 - t1)
    if not gaps:
        return None
    mu = float(np.mean(gaps))
    sigma = float(np.std(gaps))
    if sigma + mu == 0:
        return 0.0
    return (sigma - mu) / (sigma + mu)


def lifecycle(seq: SnapshotSequence) -> Optional[float]:
    """Mean length of consecutive-active runs over edges."""
    runs = [t - s + 1 for ivs in seq.edge_intervals.values() for s, t in ivs]
    if not runs:
        return None
    return float(np.mean(runs))


def stability(result: BarcodeResult) -> Optional[float]:
    """Mean Jaccard similarity of consecutive snapshots' edge sets."""
    if result.counts is None or len(result.counts) < 2:
        return None
    vals = []
    for c in result.counts[1:]:
        vals.append(c.inter_prev / c.union_prev if c.union_prev else 1.0)
    return float(np.mean(vals))


def fidelity(g: TemporalGraph, seq: SnapshotSequence) -> float:
    """Mean per-timestamp Jaccard similarity against the r = 1 activity."""
    base = timeslice(g, "partition", 1)
    t_axis = g.max_time + 1
    inter = np.zeros(t_axis)
    count_r = np.zeros(t_axis)
    count_1 = np.zeros(t_axis)

    def add(arr, lo, hi):
        arr[lo : hi + 1] += 1

    for edge, ivs in seq.edge_intervals.items():
        base_ivs = base.edge_intervals.get(edge, [])
        r_init = (
            merge_intervals([(seq.birth_time(s), seq.death_time(t)) for s, t in ivs])
            if seq.method == "partition"
            else ivs
        )
        for s, t in r_init:
            add(count_r, s, t)
        for s, t in base_ivs:
            add(count_1, s, t)
        for s1, t1 in r_init:
            for s2, t2 in base_ivs:
                lo, hi = max(s1, s2), min(t1, t2)
                if lo <= hi:
                    add(inter, lo, hi)
    union = count_r + count_1 - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        jac = np.where(union > 0, inter / union, 1.0)
    return float(jac.mean())


def total_persistence(pairs: Sequence[tuple[int, int]]) -> Optional[float]:
    """Quadratic mean of bar tick spans."""
    if not pairs:
        return None
    spans = [(d - b + 1) for b, d in pairs]
    return math.sqrt(sum(s * s for s in spans) / len(spans))


def mds_1d(dist_matrix: np.ndarray) -> tuple[np.ndarray, float]:
    """Classical MDS in one dimension; returns coordinates and stress."""
    d2 = np.asarray(dist_matrix, dtype=float) ** 2
    n = d2.shape[0]
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ d2 @ j
    vals, vecs = np.linalg.eigh(b)
    lam = max(vals[-1], 0.0)
    coords = vecs[:, -1] * math.sqrt(lam)
    recon = np.abs(coords[:, None] - coords[None, :])
    denom = float((dist_matrix**2).sum())
    stress = float(((recon - dist_matrix) ** 2).sum() / denom) if denom > 0 else 0.0
    return coords, stress


@dataclass
class GlobalFeatures:
    method: str
    resolutions: list[int]
    burstiness: list[Optional[float]]
    lifecycle: list[Optional[float]]
    stability: list[Optional[float]]
    fidelity: list[Optional[float]]
    total_persistence: list[Optional[float]]
    mds: Optional[list[float]] = None
    mds_stress: Optional[float] = None
    balance_resolution: Optional[int] = None  # normalized stability meets
    # inverse normalized fidelity


def global_features(
    g: TemporalGraph,
    method: str,
    resolutions: Sequence[int],
    barcode_of: Callable[[int], BarcodeResult],
    with_mds: bool = False,
) -> GlobalFeatures:
    res = list(resolutions)
    bur, lc, stab, fid, tp = [], [], [], [], []
    seqs = {}
    for r in res:
        seq = timeslice(g, method, r)
        seqs[r] = seq
        result = barcode_of(r)
        bur.append(burstiness(seq))
        lc.append(lifecycle(seq))
        stab.append(stability(result))
        fid.append(fidelity(g, seq))
        tp.append(total_persistence(result.pairs()))
    mds_row = None
    stress = None
    if with_mds and len(res) >= 2:
        n = len(res)
        mat = np.zeros((n, n))
        cache = {r: barcode_of(r).pairs() for r in res}
        for i in range(n):
            for j in range(i + 1, n):
                d, _ = bottleneck(cache[res[i]], cache[res[j]])
                mat[i, j] = mat[j, i] = float(d)
        coords, stress = mds_1d(mat)
        mds_row = [float(x) for x in coords]
    balance = _balance_resolution(res, stab, fid)
    return GlobalFeatures(
        method=method,
        resolutions=res,
        burstiness=bur,
        lifecycle=lc,
        stability=stab,
        fidelity=fid,
        total_persistence=tp,
        mds=mds_row,
        mds_stress=stress,
        balance_resolution=balance,
    )


def _balance_resolution(
    res: list[int], stab: list[Optional[float]], fid: list[Optional[float]]
) -> Optional[int]:
    """First resolution where the inverse of the normalized fidelity
    catches up with the normalized stability (the curves' intersection:
    stability keeps improving with coarser slicing while faithfulness to
    the original recording decays)."""
    xs = [
        (r, s, f)
        for r, s, f in zip(res, stab, fid)
        if s is not None and f is not None
    ]
    if len(xs) < 2:
        return None
    smax = max(s for _, s, _ in xs)
    fmax = max(f for _, _, f in xs)
    if smax == 0 or fmax == 0:
        return None
    for r, s, f in xs:
        ns = s / smax
        inv_nf = 1.0 - f / fmax
        if inv_nf >= ns:
            return r
    return None
