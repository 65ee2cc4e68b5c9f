"""Zigzag filtration construction, atomization, and the reference engine.

The filtration alternates snapshots and unions of consecutive snapshots,
``G_0 -> G_0 u G_1 <- G_1 -> ...`` (2n-1 spaces for n snapshots).
Atomization expands every transition into unit events touching a single
simplex: forward transitions add nodes then edges, ascending by id;
backward transitions remove edges then nodes, ascending by id.  Each event
receives a distinct rational time strictly inside the transition's anchor
span, so replaying the stream from the empty graph reproduces every space.

``compute_colored_barcode`` consumes an atomic stream one event at a time.
It is the contract-level reference: simple, exact, and used to validate
the batched production engine on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from ..graph import ParameterError
from ..slicing import SnapshotSequence
from .barcode import BarcodeResult, OutputBar
from .forest import BarcodeForest, InternalError


@dataclass(frozen=True)
class Space:
    nodes: frozenset[int]
    edges: frozenset[tuple[int, int]]


class ZigzagFiltration:
    """Alternating snapshot/union spaces with inclusion arrows."""

    def __init__(self, seq: SnapshotSequence):
        if seq.count < 1:
            raise ParameterError("empty snapshot sequence")
        self.seq = seq

    def __len__(self) -> int:
        return 2 * self.seq.count - 1

    def space(self, i: int) -> Space:
        if not 0 <= i < len(self):
            raise ParameterError(f"space index {i} out of range")
        k = i // 2
        snap = self.seq.snapshot(k)
        if i % 2 == 0:
            return Space(snap.nodes, snap.edges)
        nxt = self.seq.snapshot(k + 1)
        edges = snap.edges | nxt.edges
        nodes = snap.nodes | nxt.nodes
        return Space(frozenset(nodes), frozenset(edges))

    def arrow(self, i: int) -> str:
        """Direction of the inclusion between spaces i and i+1."""
        if not 0 <= i < len(self) - 1:
            raise ParameterError(f"arrow index {i} out of range")
        return "forward" if i % 2 == 0 else "backward"

    def spaces(self) -> Iterator[Space]:
        return (self.space(i) for i in range(len(self)))


def build_filtration(seq: SnapshotSequence) -> ZigzagFiltration:
    return ZigzagFiltration(seq)


@dataclass(frozen=True)
class AtomicEvent:
    kind: str  # add-node | add-edge | remove-edge | remove-node
    payload: tuple
    time: Fraction
    snapshot: int  # snapshot index of the transition's right end
    position: int  # zigzag space index the event moves toward


@dataclass
class AtomicEventStream:
    filtration: ZigzagFiltration
    events: list[AtomicEvent]

    def __len__(self) -> int:
        return len(self.events)

    def replay_check(self) -> None:
        """Apply events from the empty graph; every space must be realized."""
        nodes: set[int] = set()
        edges: set[tuple[int, int]] = set()
        per_position: dict[int, int] = {}
        for idx, ev in enumerate(self.events):
            _apply(nodes, edges, ev)
            per_position[ev.position] = idx
        n_spaces = len(self.filtration)
        nodes.clear()
        edges.clear()
        checkpoints = {per_position.get(i): i for i in range(n_spaces) if i in per_position}
        for idx, ev in enumerate(self.events):
            _apply(nodes, edges, ev)
            pos = checkpoints.get(idx)
            if pos is not None:
                space = self.filtration.space(pos)
                if nodes != set(space.nodes) or edges != set(space.edges):
                    raise InternalError(f"replay mismatch at zigzag position {pos}")
        # positions with no events must equal their predecessor space
        for i in range(1, n_spaces):
            if i not in per_position:
                a, b = self.filtration.space(i - 1), self.filtration.space(i)
                if a != b:
                    raise InternalError(f"position {i} has no events but differs")


def _apply(nodes: set, edges: set, ev: AtomicEvent) -> None:
    if ev.kind == "add-node":
        nodes.add(ev.payload[0])
    elif ev.kind == "remove-node":
        nodes.discard(ev.payload[0])
    elif ev.kind == "add-edge":
        edges.add(ev.payload)
    else:
        edges.discard(ev.payload)


def atomize(filtration: ZigzagFiltration) -> AtomicEventStream:
    """Expand the filtration into unit events with unique rational times."""
    seq = filtration.seq
    events: list[AtomicEvent] = []

    def span_times(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
        step = (hi - lo) / (n + 1)
        return [lo + step * (i + 1) for i in range(n)]

    first = filtration.space(0)
    lead = _forward_events(Space(frozenset(), frozenset()), first)
    times = span_times(seq.anchor(0) - 1, seq.anchor(0), len(lead))
    events.extend(
        AtomicEvent(kind, payload, t, 0, 0) for (kind, payload), t in zip(lead, times)
    )
    for k in range(seq.count - 1):
        cur = filtration.space(2 * k)
        union = filtration.space(2 * k + 1)
        nxt = filtration.space(2 * k + 2)
        fwd = _forward_events(cur, union)
        bwd = _backward_events(union, nxt)
        times = span_times(seq.anchor(k), seq.anchor(k + 1), len(fwd) + len(bwd))
        for (kind, payload), t in zip(fwd, times[: len(fwd)]):
            events.append(AtomicEvent(kind, payload, t, k + 1, 2 * k + 1))
        for (kind, payload), t in zip(bwd, times[len(fwd) :]):
            events.append(AtomicEvent(kind, payload, t, k + 1, 2 * k + 2))
    return AtomicEventStream(filtration, events)


def _forward_events(src: Space, dst: Space) -> list[tuple[str, tuple]]:
    out = [("add-node", (n,)) for n in sorted(dst.nodes - src.nodes)]
    out += [("add-edge", e) for e in sorted(dst.edges - src.edges)]
    return out


def _backward_events(src: Space, dst: Space) -> list[tuple[str, tuple]]:
    out = [("remove-edge", e) for e in sorted(src.edges - dst.edges)]
    out += [("remove-node", (n,)) for n in sorted(src.nodes - dst.nodes)]
    return out


def compute_colored_barcode(
    stream: AtomicEventStream, colored: bool = True
) -> BarcodeResult:
    """Reference engine: one forest event per atomic simplex change."""
    from .barcode import MembershipRouter

    seq = stream.filtration.seq
    forest = BarcodeForest(colored=colored)
    adj: dict[int, set[int]] = {}
    comp_of: dict[int, int] = {}
    members: dict[int, set[int]] = {}
    router = MembershipRouter(forest, members) if colored else None
    recorded = -1

    def record(k: int) -> None:
        if colored:
            for leaf, nodes in members.items():
                bar = forest.bar_of[leaf]
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
        if router is not None:
            router.now_k = k

    events = stream.events
    i = 0
    for k in range(seq.count):
        # consume all events positioned before or at snapshot 2k
        while i < len(events) and events[i].position <= 2 * k:
            _step(events[i], forest, adj, comp_of, members, k, recorded, router)
            i += 1
        record(k)
        recorded = k
        # forward half of the next transition
        while i < len(events) and events[i].position == 2 * k + 1:
            _step(events[i], forest, adj, comp_of, members, k + 1, recorded, router)
            i += 1
    forest.finish(seq.count - 1)
    return _finalize(forest, seq, colored)


def _step(
    ev: AtomicEvent,
    forest: BarcodeForest,
    adj: dict[int, set[int]],
    comp_of: dict[int, int],
    members: dict[int, set[int]],
    birth_snap: int,
    last_snap: int,
    router,
) -> None:
    if ev.kind == "add-node":
        (n,) = ev.payload
        leaf = forest.entrance(birth_snap)
        comp_of[n] = leaf
        members[leaf] = {n}
        adj.setdefault(n, set())
        if forest.colored:
            forest.bar_of[leaf].rep = n
    elif ev.kind == "add-edge":
        u, v = ev.payload
        adj[u].add(v)
        adj[v].add(u)
        la, lb = comp_of[u], comp_of[v]
        if la == lb:
            return
        if len(members[la]) < len(members[lb]) or (
            len(members[la]) == len(members[lb]) and lb < la
        ):
            la, lb = lb, la
        forest.merge(la, lb, last_snap, router=router)
        moved = members.pop(lb)
        for x in moved:
            comp_of[x] = la
        members[la].update(moved)
    elif ev.kind == "remove-edge":
        u, v = ev.payload
        adj[u].discard(v)
        adj[v].discard(u)
        leaf = comp_of[u]
        side = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in side:
                    side.add(y)
                    stack.append(y)
        if v in side:
            return
        rest = members[leaf] - side
        groups = sorted([side, rest], key=min)
        inheritor = 0
        if forest.colored:
            bar = forest.bar_of[leaf]
            if bar.rep is not None and any(bar.rep in g for g in groups):
                inheritor = 0 if bar.rep in groups[0] else 1
            else:
                prev = bar.members.get(last_snap) if bar.members else None
                if prev and not (groups[0] & prev) and (groups[1] & prev):
                    inheritor = 1
        children = forest.split(leaf, inheritor, 2, birth_snap)
        del members[leaf]
        for child, group in zip(children, groups):
            members[child] = group
            for x in group:
                comp_of[x] = child
            if forest.colored:
                bar = forest.bar_of[child]
                if bar.rep is None or bar.rep not in group:
                    bar.rep = min(group)
    else:  # remove-node
        (n,) = ev.payload
        if adj.get(n):
            raise InternalError("removing a non-isolated node")
        leaf = comp_of.pop(n)
        adj.pop(n, None)
        group = members[leaf]
        group.discard(n)
        if not group:
            forest.depart(leaf, last_snap, router=router)
            del members[leaf]


def _finalize(forest: BarcodeForest, seq: SnapshotSequence, colored: bool) -> BarcodeResult:
    bars = []
    for bar in forest.result_bars():
        mem = None
        if colored:
            mem = {j: m for j, m in bar.members.items() if bar.birth_snap <= j <= bar.death_snap}
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
                members=mem,
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
    )
