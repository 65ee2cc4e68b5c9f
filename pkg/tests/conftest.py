import itertools
import random
from pathlib import Path

import pytest

from resoscope.graph import parse_edges

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def toy_lines():
    """Six-node fixture: a pair that persists, a pair that merges into it,
    and a pair that disappears and comes back at the last tick."""
    lines = []
    for t in range(6):
        lines.append(f"o1 o2 {t}")
    for t in range(3):
        lines.append(f"r1 r2 {t}")
    for t in range(3, 6):
        lines.append(f"r1 o1 {t}")
    for t in (0, 1, 2, 5):
        lines.append(f"b1 b2 {t}")
    return lines


@pytest.fixture(scope="session")
def toy_graph():
    return parse_edges("\n".join(toy_lines()))


@pytest.fixture(scope="session")
def toy_labels():
    return {"o1": "orange", "o2": "orange", "r1": "red", "r2": "red", "b1": "blue", "b2": "blue"}


@pytest.fixture(scope="session")
def toy_graph_labeled(toy_graph, toy_labels):
    ids = {name: i for i, name in enumerate(toy_graph.node_names)}
    return toy_graph.with_labels({ids[n]: lab for n, lab in toy_labels.items()})


def flicker_lines(t1=4, t2=10, t_end=13):
    """Two-node fixture whose single edge pauses on [t1+1, t2-1]."""
    lines = [f"a b {t}" for t in range(0, t1 + 1)]
    lines += [f"a b {t}" for t in range(t2, t_end + 1)]
    return lines


@pytest.fixture(scope="session")
def flicker_graph():
    return parse_edges("\n".join(flicker_lines()))


def random_temporal_graph(rng: random.Random, max_nodes=6, max_t=7, burst=4):
    n = rng.randint(2, max_nodes)
    t_max = rng.randint(1, max_t)
    pairs = list(itertools.combinations(range(n), 2))
    lines = []
    for t in range(t_max + 1):
        k = rng.randint(0, min(burst, len(pairs)))
        for (u, v) in rng.sample(pairs, k):
            lines.append(f"n{u} n{v} {t}")
    if not lines:
        lines.append("n0 n1 0")
    return parse_edges("\n".join(lines))


def check_membership_invariants(result, allow_recorded_breaks=True):
    """Partition at every snapshot; continuity except documented breaks."""
    for k in range(result.count):
        alive = result.alive_at(k)
        total = 0
        union = set()
        for b in alive:
            m = b.members[k]
            total += len(m)
            union |= m
        assert total == len(union), f"partition overlap at snapshot {k}"
    breaks = 0
    for b in result.bars:
        for k in range(b.birth_index, b.death_index):
            if not (b.members[k] & b.members[k + 1]):
                assert allow_recorded_breaks and (k + 1) in b.seam_breaks, (
                    f"continuity break without record: bar {b.id} at {k + 1}"
                )
                breaks += 1
    return breaks


def dataset_path(name: str):
    p = DATA_DIR / name
    return p if p.exists() else None


def require_dataset(name: str):
    p = dataset_path(name)
    if p is None:
        pytest.skip(
            f"dataset {name} not present under {DATA_DIR}; "
            "run scripts/fetch_datasets.py on a machine with network access"
        )
    return p
