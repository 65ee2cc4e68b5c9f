"""Exploration engine: one loaded graph, memoized derivations, jobs.

The Explorer owns an immutable TemporalGraph and caches every derived
artifact (snapshot sequences, barcodes, curves, features) keyed by its
parameters.  Per-key computation runs at most once even under concurrent
requests (single-flight locks), so the HTTP service can serve parallel
clients safely.  Suggestion curves over full grids can take minutes at
recording scale; ``submit_suggest`` runs them in a background thread and
exposes progress for polling.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import features as feat
from .graph import ParameterError, TemporalGraph
from .layout import LayoutSpec, compute_flows, compute_layout, filter_bars, snapshot_graph
from .metrics import (
    Explanation,
    SuggestionCurve,
    build_curve,
    detect_peaks,
    explain_pair,
    longest_quiet_gap,
)
from .slicing import default_grid, timeslice
from .zigzag.barcode import BarcodeResult, compute_barcode


@dataclass
class JobState:
    id: str
    state: str = "pending"  # pending | running | done | failed
    progress: float = 0.0
    error: Optional[str] = None
    key: Optional[tuple] = None


def _barcode_worker(args):
    graph, method, r = args
    seq = timeslice(graph, method, r)
    return r, compute_barcode(seq, colored=False)


class Explorer:
    def __init__(self, graph: TemporalGraph, name: str = "", workers: int = 1):
        self.graph = graph
        self.name = name
        self.workers = max(1, workers)
        self._cache: dict[tuple, object] = {}
        self._locks: dict[tuple, threading.Lock] = {}
        self._guard = threading.Lock()
        self._jobs: dict[str, JobState] = {}
        self._job_ids = itertools.count(1)

    # -- single-flight memoization ------------------------------------------

    def _memo(self, key: tuple, compute):
        with self._guard:
            if key in self._cache:
                return self._cache[key]
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            with self._guard:
                if key in self._cache:
                    return self._cache[key]
            value = compute()
            with self._guard:
                self._cache[key] = value
            return value

    # -- core derivations ------------------------------------------------------

    def sequence(self, method: str, r: int):
        return self._memo(("seq", method, r), lambda: timeslice(self.graph, method, r))

    def barcode(self, method: str, r: int, kind: str = "plain") -> BarcodeResult:
        if kind not in ("plain", "features", "colored"):
            raise ParameterError(f"unknown barcode kind {kind!r}")

        def compute():
            seq = self.sequence(method, r)
            return compute_barcode(
                seq,
                colored=(kind == "colored"),
                with_features=(kind in ("features", "colored")),
                label_map=self.graph.labels,
            )

        return self._memo(("barcode", method, r, kind), compute)

    def pairs(self, method: str, r: int):
        for kind in ("plain", "features", "colored"):
            hit = self._cache.get(("barcode", method, r, kind))
            if hit is not None:
                return hit.pairs()
        return self.barcode(method, r).pairs()

    def grid(self, method: str, max_r: Optional[int] = None) -> list[int]:
        return default_grid(self.graph, method, max_r)

    # -- suggestion pipeline -----------------------------------------------------

    def curve(
        self,
        method: str,
        metric: str = "bottleneck",
        max_r: Optional[int] = None,
        m: int = 5,
        order: float = 1.0,
        resolutions: Optional[list[int]] = None,
        progress: Optional[JobState] = None,
    ) -> SuggestionCurve:
        res = resolutions if resolutions is not None else self.grid(method, max_r)
        key = ("curve", method, metric, order, tuple(res), m)

        def compute():
            self._precompute_barcodes(method, res, progress)
            curve = build_curve(method, metric, res, lambda r: self.pairs(method, r), order)
            gap = longest_quiet_gap(self.graph.times.tolist())
            detect_peaks(curve, m=m, gap_hint=gap if gap > 1 else None)
            return curve

        return self._memo(key, compute)

    def _precompute_barcodes(self, method, res, progress: Optional[JobState]):
        missing = [
            r
            for r in res
            if ("barcode", method, r, "plain") not in self._cache
            and ("barcode", method, r, "features") not in self._cache
            and ("barcode", method, r, "colored") not in self._cache
        ]
        if not missing:
            return
        if self.workers > 1 and len(missing) > 4:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                done = 0
                for r, result in pool.map(
                    _barcode_worker,
                    [(self.graph, method, r) for r in missing],
                    chunksize=max(1, len(missing) // (4 * self.workers)),
                ):
                    with self._guard:
                        self._cache[("barcode", method, r, "plain")] = result
                    done += 1
                    if progress:
                        progress.progress = done / len(missing)
        else:
            for i, r in enumerate(missing):
                self.barcode(method, r)
                if progress:
                    progress.progress = (i + 1) / len(missing)

    def suggest(self, method: str, metric: str = "bottleneck",
                max_r: Optional[int] = None, m: int = 5, order: float = 1.0) -> SuggestionCurve:
        return self.curve(method, metric, max_r, m, order)

    # -- background jobs ----------------------------------------------------------

    def submit_suggest(self, method: str, metric: str, max_r: Optional[int], m: int,
                       order: float = 1.0) -> JobState:
        res = tuple(self.grid(method, max_r))
        key = ("curve", method, metric, order, res, m)
        with self._guard:
            for job in self._jobs.values():
                if job.key == key and job.state in ("pending", "running", "done"):
                    return job
            job = JobState(id=str(next(self._job_ids)), key=key)
            self._jobs[job.id] = job

        def run():
            job.state = "running"
            try:
                self.curve(method, metric, max_r, m, order, progress=job)
                job.progress = 1.0
                job.state = "done"
            except Exception as exc:  # surfaced via /api/status
                job.state = "failed"
                job.error = str(exc)

        threading.Thread(target=run, daemon=True).start()
        return job

    def job(self, job_id: str) -> Optional[JobState]:
        return self._jobs.get(job_id)

    def curve_if_ready(self, method: str, metric: str, max_r: Optional[int], m: int,
                       order: float = 1.0) -> Optional[SuggestionCurve]:
        res = tuple(self.grid(method, max_r))
        key = ("curve", method, metric, order, res, m)
        return self._cache.get(key)  # type: ignore[return-value]

    # -- visual artifacts -----------------------------------------------------------

    def layout(self, method: str, r: int, ordering: str = "bottom",
               min_nodes: int = 0, min_duration: int = 0) -> LayoutSpec:
        key = ("layout", method, r, ordering, min_nodes, min_duration)
        return self._memo(
            key,
            lambda: compute_layout(
                self.barcode(method, r, "colored"),
                ordering,
                min_nodes,
                min_duration,
                seq=self.sequence(method, r),
            ),
        )

    def flows(self, method: str, r: int, mode: str, key_value):
        key = ("flows", method, r, mode, str(key_value))
        return self._memo(
            key, lambda: compute_flows(self.barcode(method, r, "colored"), mode, key_value)
        )

    def snapshot(self, method: str, r: int, t: float):
        return snapshot_graph(
            self.graph,
            method,
            r,
            t,
            seq=self.sequence(method, r),
            barcode=self.barcode(method, r, "colored"),
        )

    def explain(self, method: str, r_low: int, r_high: int) -> Explanation:
        if r_low >= r_high:
            raise ParameterError("explain requires r_low < r_high")
        low = self.barcode(method, r_low, "colored")
        high = self.barcode(method, r_high, "colored")
        return self._memo(
            ("explain", method, r_low, r_high), lambda: explain_pair(low, high)
        )

    def snapshot_features(self, method: str, r: int):
        return feat.snapshot_features(self.barcode(method, r, "features"))

    def feature_curves(self, method: str, resolutions: list[int]):
        key = ("fcurves", method, tuple(resolutions))
        return self._memo(
            key,
            lambda: feat.feature_curves(
                method,
                resolutions,
                lambda r: (self.sequence(method, r), self.snapshot_features(method, r)),
            ),
        )

    def global_features(self, method: str, resolutions: list[int], with_mds: bool = False):
        key = ("gfeat", method, tuple(resolutions), with_mds)
        return self._memo(
            key,
            lambda: feat.global_features(
                self.graph,
                method,
                resolutions,
                lambda r: self.barcode(method, r, "features"),
                with_mds=with_mds,
            ),
        )

    def filtered_barcode(self, method: str, r: int, min_nodes: int, min_duration: int):
        return filter_bars(self.barcode(method, r, "colored"), min_nodes, min_duration)
