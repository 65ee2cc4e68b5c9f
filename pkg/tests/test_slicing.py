import random

import pytest

from resoscope.graph import ParameterError, parse_edges
from resoscope.slicing import (
    default_grid,
    merge_intervals,
    partition_slices,
    sliding_slices,
)
from tests.conftest import random_temporal_graph


def test_partition_counts_and_coverage(toy_graph):
    r = 2
    seq = partition_slices(toy_graph, r)
    assert len(seq) == toy_graph.max_time // r + 1 == 3
    # every event appears in exactly one snapshot
    m = toy_graph.max_time // r
    for u, v, t in toy_graph.events():
        edge = (min(u, v), max(u, v))
        hits = [k for k in range(len(seq)) if edge in seq.snapshot(k).edges]
        expected = min(t // r, m)
        assert expected in hits
        window_of = [min(tt // r, m) for uu, vv, tt in toy_graph.events()
                     if (min(uu, vv), max(uu, vv)) == edge]
        assert set(hits) == set(window_of)


def test_partition_r1_matches_per_tick_graphs(toy_graph):
    seq = partition_slices(toy_graph, 1)
    assert len(seq) == 6
    snap3 = seq.snapshot(3)
    assert snap3.edges == frozenset({(0, 1), (0, 2)})  # orange edge + bridge


def test_partition_whole_range_single_snapshot(toy_graph):
    seq = partition_slices(toy_graph, toy_graph.max_time + 1)
    assert len(seq) == 1
    snap = seq.snapshot(0)
    assert snap.nodes == frozenset(range(6))


def test_partition_boundary_exactly_one_window():
    g = parse_edges("a b 0\na b 2\na b 4\n", format="triple")
    seq = partition_slices(g, 2)
    # t=2 belongs to window 1 = [2,4), not window 0 = [0,2)
    assert (0, 1) in seq.snapshot(1).edges
    assert (0, 1) not in seq.snapshot(0).edges or g.times.tolist().count(0)


def test_partition_blue_absent_twice_at_r1(toy_graph):
    seq = partition_slices(toy_graph, 1)
    blue = frozenset({4, 5})
    absent = [k for k in range(6) if not blue & seq.snapshot(k).nodes]
    assert len(absent) == 2
    assert absent == [3, 4]


def test_partition_r2_blue_present_everywhere(toy_graph):
    seq = partition_slices(toy_graph, 2)
    for k in range(3):
        assert {4, 5} <= set(seq.snapshot(k).nodes)


def test_partition_rejects_bad_resolution(toy_graph):
    with pytest.raises(ParameterError):
        partition_slices(toy_graph, 0)


def test_sliding_requires_even(toy_graph):
    with pytest.raises(ParameterError):
        sliding_slices(toy_graph, 3)
    with pytest.raises(ParameterError):
        sliding_slices(toy_graph, 0)


def test_sliding_window_membership():
    g = parse_edges("a b 5\na c 0\n", format="triple")
    seq = sliding_slices(g, 4)
    ks = [k for k in range(len(seq)) if (0, 1) in seq.snapshot(k).edges]
    assert ks == [3, 4, 5]  # clipped at max_time = 5; window is [t-2, t+2]


def test_sliding_window_closed_interval():
    g = parse_edges("a b 5\nc d 0\nc d 9\n", format="triple")
    seq = sliding_slices(g, 4)
    ks = [k for k in range(len(seq)) if (0, 1) in seq.snapshot(k).edges]
    assert ks == [3, 4, 5, 6, 7]


def test_sliding_one_snapshot_per_tick(toy_graph):
    seq = sliding_slices(toy_graph, 2)
    assert len(seq) == toy_graph.max_time + 1


def test_sliding_r2_union_of_three_windows(toy_graph):
    base = partition_slices(toy_graph, 1)
    seq = sliding_slices(toy_graph, 2)
    for k in range(len(seq)):
        expect = set()
        for j in (k - 1, k, k + 1):
            if 0 <= j <= toy_graph.max_time:
                expect |= set(base.snapshot(j).edges)
        assert set(seq.snapshot(k).edges) == expect


def test_sliding_monotone_in_resolution():
    rng = random.Random(7)
    for _ in range(20):
        g = random_temporal_graph(rng)
        small = sliding_slices(g, 2)
        big = sliding_slices(g, 4)
        for k in range(len(small)):
            assert small.snapshot(k).edges <= big.snapshot(k).edges


def test_multiplicity_does_not_change_membership():
    g1 = parse_edges("a b 3\n", format="triple")
    g2 = parse_edges("a b 3\na b 3\n", format="triple")
    assert g1.num_events == g2.num_events  # dedup upstream
    s1 = sliding_slices(g1, 2)
    s2 = sliding_slices(g2, 2)
    for k in range(len(s1)):
        assert s1.snapshot(k).edges == s2.snapshot(k).edges


def test_isolated_nodes_discarded(toy_graph):
    seq = partition_slices(toy_graph, 1)
    snap = seq.snapshot(3)
    assert snap.nodes == {n for e in snap.edges for n in e}


def test_anchor_midpoint_partition(toy_graph):
    seq = partition_slices(toy_graph, 2)
    assert [float(seq.anchor(k)) for k in range(3)] == [1.0, 3.0, 5.0]
    assert all(seq.anchor(k) < seq.anchor(k + 1) for k in range(2))


def test_anchor_identity_sliding(toy_graph):
    seq = sliding_slices(toy_graph, 2)
    assert [float(seq.anchor(k)) for k in range(3)] == [0.0, 1.0, 2.0]


def test_bar_time_coordinates(toy_graph):
    seq = partition_slices(toy_graph, 2)
    assert seq.birth_time(0) == 0
    assert seq.death_time(0) == 1
    assert seq.death_time(2) == 5  # last window clipped to max_time


def test_boundary_events_consistency(toy_graph):
    for seq in (partition_slices(toy_graph, 2), sliding_slices(toy_graph, 2)):
        starts, ends = seq.boundary_events()
        active = set()
        for k in range(len(seq)):
            active |= set(starts[k])
            assert active == set(seq.snapshot(k).edges)
            active -= set(ends[k])


def test_merge_intervals_coalesces_adjacent():
    assert merge_intervals([(0, 2), (3, 4), (7, 9)]) == [(0, 4), (7, 9)]


def test_default_grid():
    g = parse_edges("\n".join(f"a b {t}" for t in range(0, 101)), format="triple")
    assert default_grid(g, "sliding") == list(range(2, 26, 2))
    assert default_grid(g, "partition") == list(range(1, 26))
    assert default_grid(g, "sliding", max_r=8) == [2, 4, 6, 8]
