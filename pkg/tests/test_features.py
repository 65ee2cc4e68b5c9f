import random

import pytest

from resoscope.features import (
    burstiness,
    feature_curves,
    fidelity,
    global_features,
    lifecycle,
    mds_1d,
    snapshot_features,
    stability,
    total_persistence,
)
from resoscope.graph import parse_edges
from resoscope.slicing import partition_slices, sliding_slices, timeslice
from resoscope.zigzag import compute_barcode
from tests.conftest import random_temporal_graph

import numpy as np


def rows_for(g, method, r):
    seq = timeslice(g, method, r)
    return seq, snapshot_features(compute_barcode(seq, with_features=True))


def test_triangle_features():
    g = parse_edges("a b 0\nb c 0\na c 0\n")
    _, rows = rows_for(g, "partition", 1)
    row = rows[0]
    assert row.density == 1.0
    assert row.transitivity == 1.0
    assert row.components == 1
    assert row.mean_degree == 2.0


def test_path_on_four_nodes_has_two_triads_no_triangles():
    g = parse_edges("a b 0\nb c 0\nc d 0\n")
    seq = timeslice(g, "partition", 1)
    result = compute_barcode(seq, with_features=True)
    counts = result.counts[0]
    assert counts.triads == 2
    assert counts.triangles == 0
    assert snapshot_features(result)[0].transitivity == 0.0


def test_empty_snapshot_all_zero():
    g = parse_edges("a b 0\na b 4\n")
    _, rows = rows_for(g, "partition", 1)
    mid = rows[2]
    assert (mid.nodes, mid.edges, mid.density, mid.components, mid.mean_degree,
            mid.transitivity) == (0, 0, 0.0, 0, 0.0, 0.0)


def test_density_and_degree_ranges():
    rng = random.Random(3)
    for _ in range(20):
        g = random_temporal_graph(rng, max_nodes=8, max_t=8)
        _, rows = rows_for(g, "sliding", 2)
        for row in rows:
            assert 0.0 <= row.density <= 1.0
            assert 0.0 <= row.transitivity <= 1.0
            assert row.components <= max(row.nodes, 1)
            if row.nodes:
                assert row.mean_degree == pytest.approx(2 * row.edges / row.nodes)


def test_constant_graph_flat_curves():
    g = parse_edges("\n".join(f"a b {t}\nc d {t}" for t in range(20)))
    fc = feature_curves("sliding", [2, 4, 6], lambda r: rows_for(g, "sliding", r))
    for name in ("nodes", "edges", "density"):
        assert all(d == pytest.approx(0.0) for d in fc.derivatives[name])
        assert all(d == pytest.approx(0.0) for d in fc.distribution_l2[name])


def test_sliding_mean_nodes_edges_density_nondecreasing():
    rng = random.Random(17)
    for _ in range(10):
        g = random_temporal_graph(rng, max_nodes=8, max_t=14, burst=5)
        fc = feature_curves("sliding", [2, 4, 6, 8], lambda r: rows_for(g, "sliding", r))
        for name in ("nodes", "edges", "density"):
            vals = fc.means[name]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:])), (name, vals)


def test_burstiness_periodic_is_minus_one():
    g = parse_edges("\n".join(f"a b {t}" for t in range(0, 21, 5)))
    seq = partition_slices(g, 1)
    assert burstiness(seq) == pytest.approx(-1.0)


def test_burstiness_none_without_gaps():
    g = parse_edges("\n".join(f"a b {t}" for t in range(4)))
    assert burstiness(partition_slices(g, 1)) is None


def test_lifecycle_mean_run_length():
    g = parse_edges("a b 0\na b 1\na b 5\n")
    # runs: [0,1] and [5,5] -> lengths 2 and 1
    assert lifecycle(partition_slices(g, 1)) == pytest.approx(1.5)


def test_stability_identical_snapshots():
    g = parse_edges("\n".join(f"a b {t}" for t in range(6)))
    result = compute_barcode(partition_slices(g, 1), with_features=True)
    assert stability(result) == pytest.approx(1.0)


def test_fidelity_r1_is_one(toy_graph):
    seq = partition_slices(toy_graph, 1)
    assert fidelity(toy_graph, seq) == pytest.approx(1.0)


def test_fidelity_decreases_for_coarser_sliding(toy_graph):
    f2 = fidelity(toy_graph, sliding_slices(toy_graph, 2))
    f4 = fidelity(toy_graph, sliding_slices(toy_graph, 4))
    assert 0.0 < f4 <= f2 <= 1.0


def test_total_persistence_single_bar():
    assert total_persistence([(0, 9)]) == pytest.approx(10.0)
    assert total_persistence([]) is None


def test_total_persistence_matches_recomputation(toy_graph):
    pairs = compute_barcode(partition_slices(toy_graph, 1)).pairs()
    spans = [d - b + 1 for b, d in pairs]
    expect = (sum(s * s for s in spans) / len(spans)) ** 0.5
    assert total_persistence(pairs) == pytest.approx(expect)


def test_mds_recovers_line_distances():
    pts = np.array([0.0, 1.0, 3.0, 7.0])
    mat = np.abs(pts[:, None] - pts[None, :])
    coords, stress = mds_1d(mat)
    recon = np.abs(coords[:, None] - coords[None, :])
    assert np.allclose(recon, mat, atol=1e-9)
    assert stress == pytest.approx(0.0, abs=1e-12)


def test_global_features_table(toy_graph):
    gf = global_features(
        toy_graph,
        "partition",
        [1, 2],
        lambda r: compute_barcode(partition_slices(toy_graph, r), with_features=True),
        with_mds=True,
    )
    assert len(gf.resolutions) == 2
    assert gf.total_persistence[0] == pytest.approx(total_persistence(
        compute_barcode(partition_slices(toy_graph, 1)).pairs()))
    assert gf.mds is not None and len(gf.mds) == 2
