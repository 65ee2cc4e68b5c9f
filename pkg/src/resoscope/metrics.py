"""Barcode distances, suggestion curves, peak detection, explainability.

Bars are inclusive integer intervals [b, d] in initial-time units, so a
bar spans d - b + 1 ticks.  A matched pair costs the L-infinity difference
of endpoints; an unmatched bar costs half its tick span, (d - b + 1) / 2.
This tick-count convention is what reproduces the documented toy distance
of 3 between the fixture's barcodes at resolutions 1 and 2; the flat
half-length (d - b) / 2 would allow the long fresh bar to go unmatched at
cost 2.5.  All bottleneck arithmetic runs on integers in half-units, so
results are exact rationals.

Wasserstein distances of order q solve a transportation problem on the
distinct bars (multiplicities as capacities) with integer costs in
half-unit q-th powers, so the optimal assignment is exact as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .graph import ParameterError

Pair = tuple[int, int]


def _pair_cost2(a: Pair, b: Pair) -> int:
    """Matched cost in half-units (doubled L-infinity)."""
    return 2 * max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _solo_cost2(a: Pair) -> int:
    """Unmatched cost in half-units (tick span)."""
    return a[1] - a[0] + 1


@dataclass(frozen=True)
class BottleneckWitness:
    """The bar pair (or lone bar) whose cost realizes the distance."""

    kind: str  # "pair" | "single" | "empty"
    left: Optional[Pair] = None
    right: Optional[Pair] = None
    side: Optional[int] = None  # for "single": 1 or 2

    def cost(self) -> Fraction:
        if self.kind == "pair":
            return Fraction(_pair_cost2(self.left, self.right), 2)
        if self.kind == "single":
            bar = self.left if self.side == 1 else self.right
            return Fraction(_solo_cost2(bar), 2)
        return Fraction(0)


def _feasible(
    b1: Sequence[Pair],
    b2: Sequence[Pair],
    lam2: int,
    big2_threshold: Optional[int] = None,
    trees: Optional[tuple] = None,
):
    """Matching covering every bar whose unmatched cost exceeds the big
    threshold (lam2 by default), using only pairs of cost <= lam2.
    Returns the matching as a dict left-index -> right-index, or None.
    ``trees`` optionally carries KD-trees over the two barcodes so the
    candidate scans stay local on large inputs."""
    big_lam = lam2 if big2_threshold is None else big2_threshold
    big1 = [i for i, a in enumerate(b1) if _solo_cost2(a) > big_lam]
    big2 = [j for j, a in enumerate(b2) if _solo_cost2(a) > big_lam]
    if not big1 and not big2:
        return {}
    match_l: dict[int, int] = {}
    match_r: dict[int, int] = {}

    if trees is not None:
        tree1, tree2 = trees
        radius = lam2 / 2

        def edges_from_left(i):
            hits = tree2.query_ball_point(b1[i], r=radius, p=float("inf"))
            hits.sort()
            return hits

        def edges_from_right(j):
            hits = tree1.query_ball_point(b2[j], r=radius, p=float("inf"))
            hits.sort()
            return hits

    else:

        def edges_from_left(i):
            a = b1[i]
            return [j for j, c in enumerate(b2) if _pair_cost2(a, c) <= lam2]

        def edges_from_right(j):
            c = b2[j]
            return [i for i, a in enumerate(b1) if _pair_cost2(a, c) <= lam2]

    big1_set, big2_set = set(big1), set(big2)

    def augment_left(i, seen):
        # find a right partner for left i; displaced smalls may go unmatched
        for j in edges_from_left(i):
            if j in seen:
                continue
            seen.add(j)
            cur = match_r.get(j)
            if cur is None or cur not in big1_set or augment_left(cur, seen):
                if cur is not None and match_l.get(cur) == j:
                    del match_l[cur]
                match_r[j] = i
                match_l[i] = j
                return True
        return False

    def augment_right(j, seen):
        for i in edges_from_right(j):
            if i in seen:
                continue
            seen.add(i)
            cur = match_l.get(i)
            if cur is None or cur not in big2_set or augment_right(cur, seen):
                if cur is not None and match_r.get(cur) == i:
                    del match_r[cur]
                match_l[i] = j
                match_r[j] = i
                return True
        return False

    import sys

    limit = max(1000, 10 * (len(b1) + len(b2)))
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        for i in big1:
            if i not in match_l and not augment_left(i, set()):
                return None
        for j in big2:
            if j not in match_r and not augment_right(j, set()):
                return None
    finally:
        sys.setrecursionlimit(old)
    return match_l


_KD_THRESHOLD = 200


def _build_trees(b1, b2):
    if len(b1) + len(b2) < _KD_THRESHOLD or not b1 or not b2:
        return None
    from scipy.spatial import cKDTree

    return cKDTree(b1), cKDTree(b2)


def _search_floor(b1, b2, trees) -> int:
    """Exact lower bound for the distance in half-units: every bar costs at
    least the cheaper of its deletion and its nearest cross-pair."""
    if not b1 or not b2:
        return max((_solo_cost2(a) for a in b1 + b2), default=0)
    if trees is not None:
        import numpy as np

        tree1, tree2 = trees
        d1, _ = tree2.query(b1, k=1, p=float("inf"))
        d2, _ = tree1.query(b2, k=1, p=float("inf"))
        lb1 = max(
            min(_solo_cost2(a), int(2 * round(d))) for a, d in zip(b1, d1)
        )
        lb2 = max(
            min(_solo_cost2(c), int(2 * round(d))) for c, d in zip(b2, d2)
        )
        return max(lb1, lb2)
    lb = 0
    for a in b1:
        lb = max(lb, min(_solo_cost2(a), min(_pair_cost2(a, c) for c in b2)))
    for c in b2:
        lb = max(lb, min(_solo_cost2(c), min(_pair_cost2(a, c) for a in b1)))
    return lb


def bottleneck(
    b1: Sequence[Pair], b2: Sequence[Pair]
) -> tuple[Fraction, BottleneckWitness]:
    """Exact bottleneck distance with a realizing witness.

    Candidate thresholds are half-integers, so a binary search over
    integer half-units finds the optimum exactly; feasibility at each
    threshold is a bipartite matching that must cover every bar too long
    to stay unmatched.  The search starts at an exact per-bar lower bound
    (nearest cross-pair or deletion), which keeps the expensive infeasible
    probes away from noisy barcodes.
    """
    b1 = [tuple(p) for p in b1]
    b2 = [tuple(p) for p in b2]
    if not b1 and not b2:
        return Fraction(0), BottleneckWitness("empty")
    trees = _build_trees(b1, b2)
    lo = _search_floor(b1, b2, trees)
    hi = max(max(_solo_cost2(a) for a in b1 + b2), lo)
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        m = _feasible(b1, b2, mid, trees=trees)
        if m is not None:
            best = (mid, m)
            hi = mid - 1
        else:
            lo = mid + 1
    assert best is not None
    lam2, matching = best
    witness = _extract_witness(b1, b2, matching, lam2, trees)
    return Fraction(lam2, 2), witness


def _extract_witness(b1, b2, matching, lam2, trees=None) -> BottleneckWitness:
    """Find an element of cost exactly lam2.  A pair witness is preferred:
    forcing everything that blocked the next lower threshold into the
    matching surfaces the pair that pins the distance, when one exists."""
    if lam2 > 0:
        forced = _feasible(b1, b2, lam2, big2_threshold=lam2 - 1, trees=trees)
        if forced:
            for i in sorted(forced):
                j = forced[i]
                if _pair_cost2(b1[i], b2[j]) == lam2:
                    return BottleneckWitness("pair", left=b1[i], right=b2[j])
    for i in sorted(matching):
        j = matching[i]
        if _pair_cost2(b1[i], b2[j]) == lam2:
            return BottleneckWitness("pair", left=b1[i], right=b2[j])
    matched_r = set(matching.values())
    for i, a in enumerate(b1):
        if i not in matching and _solo_cost2(a) == lam2:
            return BottleneckWitness("single", left=a, side=1)
    for j, c in enumerate(b2):
        if j not in matched_r and _solo_cost2(c) == lam2:
            return BottleneckWitness("single", right=c, side=2)
    for side, bars in ((1, b1), (2, b2)):
        for a in bars:
            if _solo_cost2(a) == lam2:
                return BottleneckWitness(
                    "single",
                    left=a if side == 1 else None,
                    right=a if side == 2 else None,
                    side=side,
                )
    return BottleneckWitness("empty")


def bottleneck_bruteforce(b1: Sequence[Pair], b2: Sequence[Pair]) -> Fraction:
    """Exhaustive enumeration over all partial correspondences (tests)."""
    b1, b2 = list(b1), list(b2)

    def best(i, used):
        if i == len(b1):
            worst = Fraction(0)
            for j, c in enumerate(b2):
                if j not in used:
                    worst = max(worst, Fraction(_solo_cost2(c), 2))
            return worst
        a = b1[i]
        out = max(Fraction(_solo_cost2(a), 2), best(i + 1, used))
        for j, c in enumerate(b2):
            if j in used:
                continue
            cand = max(Fraction(_pair_cost2(a, c), 2), best(i + 1, used | {j}))
            out = min(out, cand)
        return out

    return best(0, frozenset())


def wasserstein(b1: Sequence[Pair], b2: Sequence[Pair], order: float = 1.0) -> float:
    """Exact q-Wasserstein distance between barcodes.

    Solved as an integer min-cost flow over distinct bars: each bar may
    match a bar of the other barcode or its own deletion, with costs as in
    the bottleneck but summed in q-th powers.
    """
    if order < 1:
        raise ParameterError("wasserstein order must be >= 1")
    from collections import Counter

    import networkx as nx

    c1 = Counter(tuple(p) for p in b1)
    c2 = Counter(tuple(p) for p in b2)
    if not c1 and not c2:
        return 0.0
    # cancel exact duplicates is invalid in general; build the full flow
    q = order
    left = sorted(c1)
    right = sorted(c2)
    n_left = sum(c1.values())
    n_right = sum(c2.values())

    def ipow(x: int) -> int:
        if q == int(q):
            return x ** int(q)
        raise ParameterError("wasserstein order must be integral")

    g = nx.DiGraph()
    g.add_node("s", demand=-(n_left + n_right))
    g.add_node("t", demand=n_left + n_right)
    g.add_edge("s", "DL", capacity=n_right, weight=0)
    g.add_edge("DR", "t", capacity=n_left, weight=0)
    g.add_edge("DL", "DR", capacity=min(n_left, n_right) + n_left + n_right, weight=0)
    for i, a in enumerate(left):
        g.add_edge("s", ("L", i), capacity=c1[a], weight=0)
        g.add_edge(("L", i), "DR", capacity=c1[a], weight=ipow(_solo_cost2(a)))
    for j, c in enumerate(right):
        g.add_edge(("R", j), "t", capacity=c2[c], weight=0)
        g.add_edge("DL", ("R", j), capacity=c2[c], weight=ipow(_solo_cost2(c)))
    for i, a in enumerate(left):
        for j, c in enumerate(right):
            pc = ipow(_pair_cost2(a, c))
            if pc <= ipow(_solo_cost2(a)) + ipow(_solo_cost2(c)):
                g.add_edge(("L", i), ("R", j), capacity=min(c1[a], c2[c]), weight=pc)
    flow = nx.min_cost_flow(g)
    total = 0
    for u, targets in flow.items():
        for v, f in targets.items():
            if f:
                total += f * g[u][v]["weight"]
    return (total ** (1.0 / q)) / 2.0


def wasserstein_bruteforce(b1, b2, order: float) -> float:
    """Enumerate all partial correspondences (tests)."""
    b1, b2 = list(b1), list(b2)

    def best(i, used):
        if i == len(b1):
            tot = 0.0
            for j, c in enumerate(b2):
                if j not in used:
                    tot += (_solo_cost2(c) / 2.0) ** order
            return tot
        a = b1[i]
        out = (_solo_cost2(a) / 2.0) ** order + best(i + 1, used)
        for j, c in enumerate(b2):
            if j in used:
                continue
            out = min(out, (_pair_cost2(a, c) / 2.0) ** order + best(i + 1, used | {j}))
        return out

    return best(0, frozenset()) ** (1.0 / order)


# -- suggestion curves ---------------------------------------------------------


@dataclass(frozen=True)
class Suggestion:
    resolution: int
    peak_index: int
    prominence: float
    raw: float
    normalized: float
    classification: str  # initial | interior | day-merge


@dataclass
class SuggestionCurve:
    method: str
    metric: str
    resolutions: list[int]
    raw: list[Fraction]
    shifts: list[Fraction]
    normalized: list[Fraction]
    peaks: list[Suggestion] = field(default_factory=list)

    def pair(self, i: int) -> tuple[int, int]:
        return self.resolutions[i], self.resolutions[i + 1]


def shift_bound(method: str, r_low: int, r_high: int) -> Fraction:
    """Largest bar displacement explainable by timestamp shift alone."""
    if method == "partition":
        return Fraction(r_high, 2)
    return Fraction(r_high - r_low, 2)


def build_curve(
    method: str,
    metric: str,
    resolutions: Sequence[int],
    barcode_of: Callable[[int], list[Pair]],
    order: float = 1.0,
) -> SuggestionCurve:
    """Distances between consecutive resolutions' barcodes, normalized by
    the shift bound."""
    if len(resolutions) < 2:
        raise ParameterError("need at least two resolutions")
    res = list(resolutions)
    if sorted(set(res)) != res:
        raise ParameterError("resolutions must be strictly ascending")
    raw: list[Fraction] = []
    shifts: list[Fraction] = []
    prev = barcode_of(res[0])
    for i in range(len(res) - 1):
        cur = barcode_of(res[i + 1])
        if metric == "bottleneck":
            d, _w = bottleneck(prev, cur)
        elif metric == "wasserstein":
            d = Fraction(wasserstein(prev, cur, order)).limit_denominator(1 << 30)
        else:
            raise ParameterError(f"unknown metric {metric!r}")
        raw.append(d)
        shifts.append(shift_bound(method, res[i], res[i + 1]))
        prev = cur
    normalized = [max(Fraction(0), r - s) for r, s in zip(raw, shifts)]
    label = metric if metric == "bottleneck" else f"wasserstein({order:g})"
    return SuggestionCurve(method, label, res, raw, shifts, normalized)


def find_peaks(values: Sequence[float]) -> list[tuple[int, float]]:
    """Local maxima with their prominences.

    A peak rises strictly from the left and falls strictly to the right;
    a plateau counts once, at its leftmost index.  Prominence follows the
    standard contract: on each side, take the minimum between the peak and
    the nearest strictly higher value (or the curve end); the prominence
    is the peak height minus the higher of the two side minima.
    """
    v = list(values)
    n = len(v)
    peaks = []
    i = 1
    while i < n:
        if v[i] > v[i - 1]:
            j = i
            while j + 1 < n and v[j + 1] == v[i]:
                j += 1
            if j + 1 < n and v[j + 1] < v[i]:
                peaks.append(i)
            i = j + 1
        else:
            i += 1
    out = []
    for p in peaks:
        left_min = v[p]
        k = p - 1
        while k >= 0 and v[k] <= v[p]:
            left_min = min(left_min, v[k])
            k -= 1
        right_min = v[p]
        k = p + 1
        while k < n and v[k] <= v[p]:
            right_min = min(right_min, v[k])
            k += 1
        prominence = v[p] - max(left_min, right_min)
        out.append((p, prominence))
    return out


def detect_peaks(
    curve: SuggestionCurve,
    m: int = 5,
    gap_hint: Optional[int] = None,
) -> list[Suggestion]:
    """Top-m prominent peaks of the normalized curve, reported as the
    resolution at the right end of each peak's pair."""
    if m < 1:
        raise ParameterError("m must be >= 1")
    values = [float(x) for x in curve.normalized]
    if not any(values):
        curve.peaks = []
        return []
    found = find_peaks(values)
    found.sort(key=lambda pf: (-pf[1], curve.resolutions[pf[0] + 1]))
    chosen = found[:m]
    chosen.sort(key=lambda pf: curve.resolutions[pf[0] + 1])
    initial_limit = _initial_region(values)
    out = []
    for idx, prom in chosen:
        r = curve.resolutions[idx + 1]
        if idx <= initial_limit:
            cls = "initial"
        elif gap_hint is not None and r >= gap_hint:
            cls = "day-merge"
        else:
            cls = "interior"
        out.append(
            Suggestion(
                resolution=r,
                peak_index=idx,
                prominence=prom,
                raw=float(curve.raw[idx]),
                normalized=values[idx],
                classification=cls,
            )
        )
    curve.peaks = out
    return out


def _initial_region(values: list[float], quiet_run: int = 3) -> int:
    """Index bound of the leading chaotic phase: everything before the
    first run of ``quiet_run`` consecutive zeros."""
    zeros = 0
    for i, x in enumerate(values):
        if x == 0:
            zeros += 1
            if zeros >= quiet_run:
                return i - quiet_run
        else:
            zeros = 0
    return -1


def longest_quiet_gap(times: Sequence[int]) -> int:
    """Largest gap between consecutive active timestamps (day-merge hint)."""
    ts = sorted(set(times))
    if len(ts) < 2:
        return 0
    return max(b - a for a, b in zip(ts, ts[1:]))


@dataclass
class Explanation:
    method: str
    r_low: int
    r_high: int
    distance: Fraction
    witness: BottleneckWitness
    low_bar_ids: list[int]
    high_bar_ids: list[int]
    node_ids: list[int]


def explain_pair(low_result, high_result) -> Explanation:
    """Locate the witness realizing the bottleneck between two colored
    barcodes and surface the node memberships behind it."""
    pairs_low = low_result.pairs()
    pairs_high = high_result.pairs()
    dist, witness = bottleneck(pairs_low, pairs_high)
    low_ids: list[int] = []
    high_ids: list[int] = []
    nodes: set[int] = set()

    def union_members(bar) -> set[int]:
        if not bar.members:
            return set()
        out: set[int] = set()
        for mem in bar.members.values():
            out.update(mem)
        return out

    def candidates(result, bar_pair):
        return [b for b in result.bars if (b.birth, b.death) == bar_pair]

    def grab_one(bar, bucket):
        bucket.append(bar.id)
        nodes.update(union_members(bar))

    if witness.kind == "pair":
        # several bars can share an endpoint pair; pick the two with the
        # strongest membership affinity so the highlight tracks the nodes
        # actually responsible
        best = None
        for bl in candidates(low_result, witness.left):
            ml = union_members(bl)
            for bh in candidates(high_result, witness.right):
                mh = union_members(bh)
                union = len(ml | mh)
                jac = (len(ml & mh) / union) if union else 0.0
                key = (-jac, bl.id, bh.id)
                if best is None or key < best[0]:
                    best = (key, bl, bh)
        if best is not None:
            grab_one(best[1], low_ids)
            grab_one(best[2], high_ids)
    elif witness.kind == "single":
        if witness.side == 1:
            cands = candidates(low_result, witness.left)
            if cands:
                grab_one(cands[0], low_ids)
        else:
            cands = candidates(high_result, witness.right)
            if cands:
                grab_one(cands[0], high_ids)
    return Explanation(
        method=low_result.method,
        r_low=low_result.resolution,
        r_high=high_result.resolution,
        distance=dist,
        witness=witness,
        low_bar_ids=low_ids,
        high_bar_ids=high_ids,
        node_ids=sorted(nodes),
    )
