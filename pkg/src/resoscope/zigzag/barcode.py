"""H0 zigzag barcode of a snapshot sequence, with node identification.

The engine replays the sequence as a zigzag: snapshot, union with the next
snapshot, next snapshot, and so on.  Forward half-transitions only add
simplices (entrances and merges), backward halves only remove them
(departures and splits), so connected components can be tracked
incrementally; split detection re-walks just the components that lost
edges.  Bar births and deaths are collapsed to snapshot indices at the
end; a bar that never covers a snapshot lies strictly inside one
transition and is discarded.

``compute_barcode`` is the production path and processes whole transitions
in batch.  The unit-event reference path lives in ``filtration`` and feeds
single simplex changes through the same forest; both produce the same bar
multiset (the batched path may legally differ in which nodes it assigns to
bars when several splits collapse into one transition).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..slicing import SnapshotSequence
from .forest import Bar, BarcodeForest, InternalError


@dataclass(frozen=True)
class OutputBar:
    """A reported bar in both snapshot-index and initial-time coordinates."""

    id: int
    birth_index: int
    death_index: int
    birth: int
    death: int
    death_cause: str
    merged_into: Optional[int] = None
    split_from: Optional[int] = None
    members: Optional[dict[int, frozenset[int]]] = None
    seam_breaks: frozenset[int] = frozenset()

    @property
    def index_span(self) -> int:
        return self.death_index - self.birth_index + 1

    def size_at(self, k: int) -> int:
        if self.members is None:
            return 0
        return len(self.members.get(k, ()))

    @property
    def max_size(self) -> int:
        if not self.members:
            return 0
        return max(len(m) for m in self.members.values())


@dataclass
class SnapshotCounts:
    """Raw per-snapshot tallies recorded while the engine runs."""

    nodes: int
    edges: int
    components: int
    triangles: int
    triads: int
    inter_prev: int  # |E_k ∩ E_{k-1}|
    union_prev: int  # |E_k ∪ E_{k-1}|


@dataclass
class BarcodeResult:
    method: str
    resolution: int
    count: int
    max_time: int
    bars: list[OutputBar]
    counts: Optional[list[SnapshotCounts]] = None
    label_map: Optional[dict[int, str]] = None

    def pairs(self) -> list[tuple[int, int]]:
        """Bar endpoints in initial-time units, for distance computation."""
        return [(b.birth, b.death) for b in self.bars]

    def alive_at(self, k: int) -> list[OutputBar]:
        return [b for b in self.bars if b.birth_index <= k <= b.death_index]


class MembershipRouter:
    """Moves a forced bar between leaves by exchanging membership prefixes.

    A swap at snapshot time t exchanges the two bars' recorded memberships
    before t together with their birth identities.  It is valid when each
    reassembled path stays continuous at the seam; the entry at t falls
    back to the leaf's current component when t lies past the last recorded
    snapshot.  Multi-hop routes are searched depth-first.
    """

    def __init__(self, forest: BarcodeForest, members: dict[int, set[int]]):
        self.forest = forest
        self.members = members
        self.now_k = -1

    def __call__(self, w_leaf: int, x_leaf: int) -> bool:
        if self._dfs(w_leaf, x_leaf, {w_leaf}, relaxed=False):
            return True
        return self._dfs(w_leaf, x_leaf, {w_leaf}, relaxed=True)

    def _dfs(self, cur: int, target: int, visited: set[int], relaxed: bool) -> bool:
        if cur == target:
            return True
        order = sorted(self.forest.bar_of, key=lambda l: self.forest.bar_of[l].id)
        for q in order:
            if q in visited:
                continue
            for t in range(1, self.now_k + 2):
                broken = self._swap_seams(cur, q, t)
                if broken is None or (broken and not relaxed):
                    continue
                self._swap(cur, q, t)
                visited.add(q)
                if self._dfs(q, target, visited, relaxed):
                    return True
                visited.discard(q)
                self._swap(cur, q, t)
        return False

    def _entry_at(self, leaf: int, bar: Bar, t: int):
        if t <= self.now_k:
            return bar.members.get(t)
        return self.members.get(leaf)

    def _swap_seams(self, lp: int, lq: int, t: int) -> Optional[list[int]]:
        """None if the swap is structurally impossible; otherwise the list
        of leaves whose seam check could only be deferred (empty = clean).
        Deferral is allowed only at t = now+1, where the seam lies in the
        unwritten future."""
        p, q = self.forest.bar_of[lp], self.forest.bar_of[lq]
        if p.birth_snap > t or q.birth_snap > t:
            return None
        broken = []
        if q.birth_snap < t:
            at = self._entry_at(lp, p, t)
            prev = q.members.get(t - 1)
            if not at or not prev or not (prev & at):
                if t <= self.now_k:
                    return None
                broken.append(lp)
        if p.birth_snap < t:
            at = self._entry_at(lq, q, t)
            prev = p.members.get(t - 1)
            if not at or not prev or not (prev & at):
                if t <= self.now_k:
                    return None
                broken.append(lq)
        return broken

    def _swap(self, lp: int, lq: int, t: int) -> None:
        p, q = self.forest.bar_of[lp], self.forest.bar_of[lq]
        pm = {j: s for j, s in p.members.items() if j < t}
        qm = {j: s for j, s in q.members.items() if j < t}
        for j in pm:
            del p.members[j]
        for j in qm:
            del q.members[j]
        p.members.update(qm)
        q.members.update(pm)
        p.birth_atomic, q.birth_atomic = q.birth_atomic, p.birth_atomic
        p.birth_snap, q.birth_snap = q.birth_snap, p.birth_snap
        p.split_from, q.split_from = q.split_from, p.split_from
        pb = {j for j in p.seam_breaks if j < t}
        qb = {j for j in q.seam_breaks if j < t}
        p.seam_breaks = (p.seam_breaks - pb) | qb
        q.seam_breaks = (q.seam_breaks - qb) | pb
        if t <= self.now_k:
            for bar in (p, q):
                prev, cur = bar.members.get(t - 1), bar.members.get(t)
                if prev is not None and cur is not None:
                    if prev & cur:
                        bar.seam_breaks.discard(t)
                    else:
                        bar.seam_breaks.add(t)
        self.forest.beta[lp], self.forest.beta[lq] = self.forest.beta[lq], self.forest.beta[lp]


class _Tracker:
    """Incremental component tracker driving a BarcodeForest."""

    def __init__(self, colored: bool, with_features: bool):
        self.colored = colored
        self.with_features = with_features
        self.forest = BarcodeForest(colored=colored)
        self.adj: dict[int, set[int]] = {}
        self.comp_of: dict[int, int] = {}
        self.members: dict[int, set[int]] = {}
        self.router: Optional[MembershipRouter] = (
            MembershipRouter(self.forest, self.members) if colored else None
        )
        self.deg_triangles = 0
        self.triads = 0
        self.edge_count = 0

    @property
    def now_k(self) -> int:
        return self.router.now_k if self.router else self._now_k

    _now_k = -1

    def _set_now(self, k: int) -> None:
        self._now_k = k
        if self.router:
            self.router.now_k = k

    # -- event plumbing -----------------------------------------------------

    def add_edge(self, u: int, v: int, birth_snap: int, death_snap_on_merge: int) -> None:
        for x in (u, v):
            if x not in self.comp_of:
                leaf = self.forest.entrance(birth_snap)
                self.comp_of[x] = leaf
                self.members[leaf] = {x}
                self.adj.setdefault(x, set())
                if self.colored:
                    self.forest.bar_of[leaf].rep = x
        if self.with_features:
            common = len(self.adj[u] & self.adj[v])
            self.deg_triangles += common
            self.triads += len(self.adj[u]) + len(self.adj[v])
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.edge_count += 1
        la, lb = self.comp_of[u], self.comp_of[v]
        if la == lb:
            return
        if len(self.members[la]) < len(self.members[lb]) or (
            len(self.members[la]) == len(self.members[lb]) and lb < la
        ):
            la, lb = lb, la
        self.forest.merge(la, lb, death_snap_on_merge, router=self.router)
        moved = self.members.pop(lb)
        for x in moved:
            self.comp_of[x] = la
        self.members[la].update(moved)

    def remove_edges(self, edges: list[tuple[int, int]], death_snap: int, birth_snap: int) -> None:
        affected: set[int] = set()
        for u, v in edges:
            self.adj[u].discard(v)
            self.adj[v].discard(u)
            if self.with_features:
                common = len(self.adj[u] & self.adj[v])
                self.deg_triangles -= common
                self.triads -= len(self.adj[u]) + len(self.adj[v])
            self.edge_count -= 1
            affected.add(self.comp_of[u])
        for leaf in sorted(affected, key=lambda l: min(self.members[l])):
            self._rebuild_component(leaf, death_snap, birth_snap)

    def _rebuild_component(self, leaf: int, death_snap: int, birth_snap: int) -> None:
        nodes = self.members[leaf]
        groups: list[set[int]] = []
        seen: set[int] = set()
        for start in nodes:
            if start in seen or not self.adj[start]:
                continue
            group = {start}
            stack = [start]
            seen.add(start)
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        group.add(y)
                        stack.append(y)
            groups.append(group)
        departed = nodes - seen
        for x in departed:
            del self.comp_of[x]
            self.adj.pop(x, None)

        if not groups:
            self.forest.depart(leaf, death_snap, router=self.router)
            del self.members[leaf]
            return
        if len(groups) == 1:
            self.members[leaf] = groups[0]
            return
        groups.sort(key=min)
        inheritor = self._pick_inheritor(leaf, groups)
        children = self.forest.split(leaf, inheritor, len(groups), birth_snap)
        del self.members[leaf]
        for child, group in zip(children, groups):
            self.members[child] = group
            for x in group:
                self.comp_of[x] = child
            if self.colored:
                bar = self.forest.bar_of[child]
                if bar.rep is None or bar.rep not in group:
                    bar.rep = min(group)

    def _pick_inheritor(self, leaf: int, groups: list[set[int]]) -> int:
        if not self.colored:
            return 0
        bar = self.forest.bar_of[leaf]
        if bar.rep is not None:
            for i, g in enumerate(groups):
                if bar.rep in g:
                    return i
        prev = bar.members.get(self.now_k) if bar.members else None
        if prev:
            for i, g in enumerate(groups):
                if g & prev:
                    return i
        return 0

    # -- snapshot bookkeeping -------------------------------------------------

    def record_snapshot(self, k: int, inter_prev: int, union_prev: int,
                        counts: Optional[list[SnapshotCounts]]) -> None:
        if self.colored:
            for leaf, nodes in self.members.items():
                bar = self.forest.bar_of[leaf]
                bar.members[k] = frozenset(nodes)
                prev = bar.members.get(k - 1)
                if prev is not None:
                    if prev & nodes:
                        bar.seam_breaks.discard(k)
                    else:
                        bar.seam_breaks.add(k)
                if bar.rep not in nodes:
                    pool = (nodes & prev) if prev else nodes
                    bar.rep = min(pool) if pool else min(nodes)
        self._set_now(k)
        if counts is not None:
            counts.append(
                SnapshotCounts(
                    nodes=len(self.comp_of),
                    edges=self.edge_count,
                    components=self.forest.live_count,
                    triangles=self.deg_triangles,
                    triads=self.triads,
                    inter_prev=inter_prev,
                    union_prev=union_prev,
                )
            )


def compute_barcode(
    seq: SnapshotSequence,
    colored: bool = False,
    with_features: bool = False,
    instrument: Optional[Callable[[str, int, int, int], None]] = None,
    label_map: Optional[dict[int, str]] = None,
) -> BarcodeResult:
    """Run the zigzag over ``seq`` and return its H0 barcode.

    With ``colored`` set, each bar carries per-snapshot node memberships
    satisfying the partition and continuity properties.  ``instrument``,
    when given, is called as ``instrument(kind, index, live_bars,
    components)`` at every zigzag position ("snapshot" or "union").
    """
    starts, ends = seq.boundary_events()
    tracker = _Tracker(colored, with_features)
    counts: Optional[list[SnapshotCounts]] = [] if with_features else None

    # lead-in: build snapshot 0
    for u, v in starts[0]:
        tracker.add_edge(u, v, birth_snap=0, death_snap_on_merge=-1)
    tracker.record_snapshot(0, 0, tracker.edge_count, counts)
    if instrument:
        instrument("snapshot", 0, tracker.forest.live_count, len(tracker.members))

    for k in range(1, seq.count):
        e_prev = tracker.edge_count
        added = starts[k]
        removed = ends[k - 1]
        for u, v in added:
            tracker.add_edge(u, v, birth_snap=k, death_snap_on_merge=k - 1)
        if instrument:
            instrument("union", k - 1, tracker.forest.live_count, len(tracker.members))
        if removed:
            tracker.remove_edges(removed, death_snap=k - 1, birth_snap=k)
        inter = e_prev - len(removed)
        union = e_prev + len(added)
        tracker.record_snapshot(k, inter, union, counts)
        if instrument:
            instrument("snapshot", k, tracker.forest.live_count, len(tracker.members))

    tracker.forest.finish(seq.count - 1)

    bars = []
    for bar in tracker.forest.result_bars():
        members = None
        if colored:
            members = {j: m for j, m in bar.members.items() if bar.birth_snap <= j <= bar.death_snap}
            if set(members) != set(range(bar.birth_snap, bar.death_snap + 1)):
                raise InternalError("bar membership does not cover its interval")
        bars.append(
            OutputBar(
                id=bar.id,
                birth_index=bar.birth_snap,
                death_index=bar.death_snap,
                birth=seq.birth_time(bar.birth_snap),
                death=seq.death_time(bar.death_snap),
                death_cause=bar.death_cause,
                merged_into=bar.merged_into,
                split_from=bar.split_from,
                members=members,
                seam_breaks=frozenset(
                    j for j in bar.seam_breaks if bar.birth_snap < j <= bar.death_snap
                ),
            )
        )
    return BarcodeResult(
        method=seq.method,
        resolution=seq.resolution,
        count=seq.count,
        max_time=seq.max_time,
        bars=bars,
        counts=counts,
        label_map=label_map,
    )
