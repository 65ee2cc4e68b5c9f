import random

import pytest

from resoscope.graph import ParameterError, parse_edges
from resoscope.slicing import partition_slices, sliding_slices
from resoscope.zigzag import ZigzagOracle, build_filtration, oracle_barcode
from tests.conftest import random_temporal_graph


def test_single_everlasting_component():
    g = parse_edges("\n".join(f"a b {t}" for t in range(4)))
    filt = build_filtration(partition_slices(g, 1))
    assert oracle_barcode(filt) == [(0, 3)]


def test_two_disjoint_components():
    lines = [f"a b {t}" for t in range(3)] + [f"c d {t}" for t in range(3)]
    filt = build_filtration(partition_slices(parse_edges("\n".join(lines)), 1))
    assert oracle_barcode(filt) == [(0, 2), (0, 2)]


def test_disappearing_component():
    lines = [f"a b {t}" for t in (0, 1, 4)]
    filt = build_filtration(partition_slices(parse_edges("\n".join(lines)), 1))
    assert oracle_barcode(filt) == [(0, 1), (4, 4)]


def test_merge_counts_one_death(toy_graph):
    filt = build_filtration(partition_slices(toy_graph, 1))
    assert oracle_barcode(filt) == [(0, 2), (0, 2), (0, 5), (5, 5)]


def test_pointwise_dimensions_consistent():
    rng = random.Random(99)
    for _ in range(15):
        g = random_temporal_graph(rng, max_nodes=5, max_t=5)
        seq = partition_slices(g, 1)
        orc = ZigzagOracle(build_filtration(seq))
        orc.position_intervals()  # raises on any inconsistency


def test_rank_monotone_in_window():
    g = parse_edges("a b 0\nb c 1\nc d 2\na b 2\n")
    orc = ZigzagOracle(build_filtration(partition_slices(g, 1)))
    n = len(orc.spaces)
    for i in range(n):
        for j in range(i, n):
            r = orc.rank(i, j)
            if j + 1 < n:
                assert orc.rank(i, j + 1) <= r
            if i - 1 >= 0:
                assert orc.rank(i - 1, j) <= r


def test_oracle_refuses_large_instances():
    lines = [f"n{i} n{i+1} {t}" for t in range(40) for i in range(3)]
    g = parse_edges("\n".join(lines))
    with pytest.raises(ParameterError):
        oracle_barcode(build_filtration(partition_slices(g, 1)))
