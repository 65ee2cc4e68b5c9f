"""Component-tracking forest underlying H0 zigzag barcode computation.

The forest tracks one live *leaf* per connected component and one live bar
per leaf.  Five event kinds drive it: Entrance, Departure, No-Event, Merge
and Split.  In a zigzag module the bar closed by a death event is not a
free choice: exactly one interval of the decomposition ends, and its birth
b* is forced by the rank invariant.  The forest computes b* from two
assignment-free structures maintained per live leaf:

meets
    pairwise window-connectivity between live lineages: meet(X, Y) is the
    largest s such that the histories of X and Y are connected inside the
    time window [s, now].  Dead lineages mediate connectivity, which the
    update rules bake in without storing dead rows:
      entrance:  meet(X, .) = -inf
      merge A,B -> AB at tau:  meet(AB, Z) = max(meet(A, Z), meet(B, Z)),
        and for every pair (Z, W) reaching A and B respectively the bridge
        gives meet(Z, W) >= min(meet(A, Z), meet(B, W))
      split P -> C1..Cj at tau:  meet(Ci, Z) = meet(P, Z),
        meet(Ci, Ck) = tau - 1

reach
    R(X) = the set of times s such that X's window-class over [s, now]
    contains a lineage alive at s.  An interval of the module can cover
    [s, now] inside X's class only if s is reachable, and every死 event
    closes the interval with the smallest forced birth:
      merge(A, B):  b* = min{ s > meet(A,B) : s in R(A) and s in R(B) }
      departure(D): b* = min( R(D) minus the union over live Y != D of
                              R(Y) clipped to s <= meet(D, Y) )

The closed bar (birth b*) may currently sit on a bystander leaf; bar
ownership is then rotated toward the event through prefix swaps.  With
memberships enabled the rotation exchanges recorded membership prefixes
(multi-hop routes allowed) so the partition and continuity invariants are
preserved; in plain mode only birth identities move.
"""

from __future__ import annotations

import itertools
from typing import Callable, Optional

NEG_INF = -1  # atomic times start at 0
POS_INF = 1 << 62

Intervals = list[tuple[int, int]]  # sorted, disjoint, non-adjacent, inclusive


class InternalError(AssertionError):
    """Invariant violation inside the tracker; indicates a bug."""


def _iv_union(a: Intervals, b: Intervals) -> Intervals:
    if not a:
        return list(b)
    if not b:
        return list(a)
    merged = sorted(a + b)
    out = [merged[0]]
    for s, t in merged[1:]:
        ls, lt = out[-1]
        if s <= lt + 1:
            if t > lt:
                out[-1] = (ls, t)
        else:
            out.append((s, t))
    return out


def _iv_clip(a: Intervals, hi: int) -> Intervals:
    """Restrict interval set to s <= hi."""
    out = []
    for s, t in a:
        if s > hi:
            break
        out.append((s, min(t, hi)))
    return out


def _iv_min_common_above(a: Intervals, b: Intervals, lo: int) -> Optional[int]:
    """Smallest s > lo lying in both interval sets."""
    i = j = 0
    while i < len(a) and j < len(b):
        s = max(a[i][0], b[j][0], lo + 1)
        t = min(a[i][1], b[j][1])
        if s <= t:
            return s
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return None


def _iv_min_difference(a: Intervals, b: Intervals) -> Optional[int]:
    """Smallest s in a but not in b."""
    j = 0
    for s, t in a:
        cur = s
        while cur <= t:
            while j < len(b) and b[j][1] < cur:
                j += 1
            if j < len(b) and b[j][0] <= cur <= b[j][1]:
                cur = b[j][1] + 1
                continue
            if cur <= t:
                return cur
        # no gap inside this interval; continue with next
    return None


def _iv_contains(a: Intervals, s: int) -> bool:
    import bisect

    i = bisect.bisect_right(a, (s, POS_INF)) - 1
    return i >= 0 and a[i][0] <= s <= a[i][1]


class Bar:
    """One persistence bar with optional per-snapshot node memberships."""

    __slots__ = (
        "id",
        "birth_atomic",
        "birth_snap",
        "death_snap",
        "members",
        "rep",
        "death_cause",
        "merged_into",
        "split_from",
        "seam_breaks",
    )

    def __init__(self, bar_id: int, birth_atomic: int, birth_snap: int, colored: bool):
        self.id = bar_id
        self.birth_atomic = birth_atomic
        self.birth_snap = birth_snap
        self.death_snap: Optional[int] = None
        self.members: Optional[dict[int, frozenset[int]]] = {} if colored else None
        self.rep: Optional[int] = None
        self.death_cause: Optional[str] = None
        self.merged_into: Optional[int] = None
        self.split_from: Optional[int] = None
        # snapshot indices k where members[k-1] and members[k] are disjoint;
        # nonempty only on instances where the true barcode admits no
        # component-per-snapshot identification (the interval is realized
        # through cancelling combinations)
        self.seam_breaks: set[int] = set()

    def start_size(self) -> int:
        if self.members:
            return len(self.members[min(self.members)])
        return 0


# Router signature: (bystander_leaf, event_leaf) -> bool.  Must move the
# forced bar's identity (and membership prefix, when tracked) from the
# bystander onto the event leaf.
Router = Callable[[int, int], bool]


class BarcodeForest:
    def __init__(self, colored: bool = False):
        self.colored = colored
        self.clock = itertools.count()
        self._leaf_ids = itertools.count()
        self._bar_ids = itertools.count()
        self.beta: dict[int, int] = {}  # leaf -> atomic birth of its bar
        self.bar_of: dict[int, Bar] = {}
        self.meets: dict[int, dict[int, int]] = {}
        self.reach: dict[int, Intervals] = {}
        self.bars: list[Bar] = []

    @property
    def live_count(self) -> int:
        return len(self.bar_of)

    # -- events ---------------------------------------------------------------

    def entrance(self, birth_snap: int) -> int:
        tau = next(self.clock)
        leaf = next(self._leaf_ids)
        bar = Bar(next(self._bar_ids), tau, birth_snap, self.colored)
        self.bars.append(bar)
        self.beta[leaf] = tau
        self.bar_of[leaf] = bar
        row: dict[int, int] = {}
        for other, orow in self.meets.items():
            orow[leaf] = NEG_INF
            row[other] = NEG_INF
        self.meets[leaf] = row
        self.reach[leaf] = [(tau, POS_INF)]
        return leaf

    def depart(self, leaf: int, death_snap: int, router: Optional[Router] = None) -> Bar:
        b_star = self._forced_departure_birth(leaf)
        if self.beta[leaf] != b_star:
            self._rotate_to(b_star, leaf, router, lambda w: True)
        bar = self.bar_of[leaf]
        bar.death_snap = death_snap
        bar.death_cause = "departure"
        self._drop_leaf(leaf)
        return bar

    def merge(
        self,
        keep: int,
        lose: int,
        death_snap: int,
        router: Optional[Router] = None,
    ) -> Bar:
        """Merge the components at ``keep`` and ``lose``; survivor stays on
        ``keep``.  Returns the closed bar."""
        tau = next(self.clock)
        a, b = keep, lose
        m = self.meets[a].get(b, NEG_INF)
        b_star = _iv_min_common_above(self.reach[a], self.reach[b], m)
        if b_star is None:
            raise InternalError("merge has no feasible forced birth")
        if self.beta[a] != b_star and self.beta[b] != b_star:
            self._rotate_to(
                b_star,
                None,
                router,
                lambda w: self.meets[a].get(w, NEG_INF) >= b_star
                or self.meets[b].get(w, NEG_INF) >= b_star,
                endpoints=(a, b),
            )
        if self.beta[a] == b_star and self.beta[b] == b_star:
            victim = self._tie_break(a, b)
        elif self.beta[a] == b_star:
            victim = a
        elif self.beta[b] == b_star:
            victim = b
        else:
            raise InternalError("forced birth not present on merge endpoints")

        dead = self.bar_of[victim]
        dead.death_snap = death_snap
        dead.death_cause = "merge"
        survivor_leaf = b if victim == a else a
        dead.merged_into = self.bar_of[survivor_leaf].id

        row_a, row_b = self.meets[a], self.meets[b]
        reach_ab = _iv_union(self.reach[a], self.reach[b])
        # bridge: lineages reaching A gain B-side history and vice versa
        za = [(z, v) for z, v in row_a.items() if v > NEG_INF and z != b]
        zb = [(w, v) for w, v in row_b.items() if v > NEG_INF and w != a]
        for z, va in za:
            mz = self.meets[z]
            for w, vb in zb:
                if z == w:
                    continue
                nv = va if va < vb else vb
                if nv > mz.get(w, NEG_INF):
                    mz[w] = nv
                    self.meets[w][z] = nv
        merged_row = {}
        for z in self.bar_of:
            if z in (a, b):
                continue
            merged_row[z] = max(row_a.get(z, NEG_INF), row_b.get(z, NEG_INF))
        surv_bar = self.bar_of[survivor_leaf]
        surv_beta = self.beta[survivor_leaf]
        self._drop_leaf(a)
        self._drop_leaf(b)
        self.beta[keep] = surv_beta
        self.bar_of[keep] = surv_bar
        self.meets[keep] = merged_row
        for z, val in merged_row.items():
            self.meets[z][keep] = val
        self.reach[keep] = reach_ab
        for z, val in merged_row.items():
            if val > NEG_INF:
                gain = _iv_clip(reach_ab, val)
                if gain:
                    self.reach[z] = _iv_union(self.reach[z], gain)
        return dead

    def split(
        self,
        parent: int,
        inheritor_index: int,
        n_children: int,
        birth_snap: int,
    ) -> list[int]:
        """Replace ``parent`` with ``n_children`` leaves; the parent's bar
        continues on the leaf at ``inheritor_index``."""
        tau = next(self.clock)
        parent_row = self.meets[parent]
        parent_bar = self.bar_of[parent]
        parent_beta = self.beta[parent]
        parent_reach = self.reach[parent]
        self._drop_leaf(parent)
        children = []
        for i in range(n_children):
            leaf = next(self._leaf_ids)
            children.append(leaf)
            if i == inheritor_index:
                self.beta[leaf] = parent_beta
                self.bar_of[leaf] = parent_bar
            else:
                bar = Bar(next(self._bar_ids), tau, birth_snap, self.colored)
                bar.split_from = parent_bar.id
                self.bars.append(bar)
                self.beta[leaf] = tau
                self.bar_of[leaf] = bar
            row = {}
            for z in self.bar_of:
                if z == leaf or z in children:
                    continue
                val = parent_row.get(z, NEG_INF)
                row[z] = val
                self.meets[z][leaf] = val
            self.meets[leaf] = row
            self.reach[leaf] = list(parent_reach)
        for i, ci in enumerate(children):
            for cj in children[i + 1 :]:
                self.meets[ci][cj] = tau - 1
                self.meets[cj][ci] = tau - 1
        return children

    def finish(self, last_snap: int) -> None:
        for leaf in list(self.bar_of):
            bar = self.bar_of[leaf]
            bar.death_snap = last_snap
            bar.death_cause = "end"
        self.beta.clear()
        self.bar_of.clear()
        self.meets.clear()
        self.reach.clear()

    def result_bars(self) -> list[Bar]:
        """All bars whose interval covers at least one snapshot."""
        out = [
            b
            for b in self.bars
            if b.death_snap is not None and b.birth_snap <= b.death_snap
        ]
        out.sort(key=lambda b: (b.birth_snap, b.death_snap, b.id))
        return out

    # -- forced births ----------------------------------------------------------

    def _forced_departure_birth(self, leaf: int) -> int:
        covered: Intervals = []
        row = self.meets[leaf]
        for y, mxy in row.items():
            if mxy > NEG_INF:
                piece = _iv_clip(self.reach[y], mxy)
                if piece:
                    covered = _iv_union(covered, piece)
        b_star = _iv_min_difference(self.reach[leaf], covered)
        if b_star is None:
            raise InternalError("departure has no feasible forced birth")
        return b_star

    def _rotate_to(
        self,
        b_star: int,
        target: Optional[int],
        router: Optional[Router],
        side_ok: Callable[[int], bool],
        endpoints: Optional[tuple[int, int]] = None,
        **_ignored,
    ) -> None:
        """Move the live bar born at ``b_star`` onto the event leaf."""
        candidates = sorted(
            (leaf for leaf, beta in self.beta.items() if beta == b_star),
            key=lambda l: self.bar_of[l].id,
        )
        if not candidates:
            raise InternalError("no live bar carries the forced birth")
        targets: list[int]
        if target is not None:
            targets = [target]
        else:
            assert endpoints is not None
            targets = [
                e
                for e in endpoints
                if any(self.meets[e].get(w, NEG_INF) >= b_star for w in candidates)
                or self.beta[e] == b_star
            ] or list(endpoints)
        for w in candidates:
            if not side_ok(w):
                continue
            for x in targets:
                if w == x:
                    return
                if router is None:
                    self._plain_swap(w, x)
                    return
                if router(w, x):
                    return
        # fall back: allow any candidate regardless of side check
        for w in candidates:
            for x in targets:
                if w == x:
                    return
                if router is None:
                    self._plain_swap(w, x)
                    return
                if router(w, x):
                    return
        raise InternalError("no viable rotation for forced bar")

    def _plain_swap(self, w: int, x: int) -> None:
        bw, bx = self.bar_of[w], self.bar_of[x]
        bw.birth_atomic, bx.birth_atomic = bx.birth_atomic, bw.birth_atomic
        bw.birth_snap, bx.birth_snap = bx.birth_snap, bw.birth_snap
        bw.split_from, bx.split_from = bx.split_from, bw.split_from
        self.beta[w], self.beta[x] = self.beta[x], self.beta[w]

    def _tie_break(self, a: int, b: int) -> int:
        """Equal forced births: remove the path starting with fewer nodes."""
        bar_a, bar_b = self.bar_of[a], self.bar_of[b]
        if self.colored:
            sa, sb = bar_a.start_size(), bar_b.start_size()
            if sa != sb:
                return a if sa < sb else b
            ma = min(min(m) for m in bar_a.members.values()) if bar_a.members else POS_INF
            mb = min(min(m) for m in bar_b.members.values()) if bar_b.members else POS_INF
            if ma != mb:
                return a if ma < mb else b
        return a if bar_a.id < bar_b.id else b

    def _drop_leaf(self, leaf: int) -> None:
        del self.beta[leaf]
        del self.bar_of[leaf]
        del self.meets[leaf]
        del self.reach[leaf]
        for row in self.meets.values():
            row.pop(leaf, None)
