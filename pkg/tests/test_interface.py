import json
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from resoscope import serialize
from resoscope.cli import EXIT_OK, EXIT_PARAMETER, EXIT_PARSE, build_parser, main
from resoscope.engine import Explorer
from resoscope.graph import load_graph
from resoscope.server import create_app
from tests.conftest import toy_lines


@pytest.fixture(scope="module")
def toy_files(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("toy")
    edges = tmp / "toy.txt"
    edges.write_text("\n".join(toy_lines()) + "\n")
    labels = tmp / "labels.csv"
    labels.write_text("o1,orange\no2,orange\nr1,red\nr2,red\nb1,blue\nb2,blue\n")
    return edges, labels


@pytest.fixture(scope="module")
def explorer(toy_files):
    edges, labels = toy_files
    return Explorer(load_graph(str(edges), str(labels)), name="toy")


@pytest.fixture(scope="module")
def client(explorer):
    return TestClient(create_app(explorer), raise_server_exceptions=False)


# -- CLI -------------------------------------------------------------------------


def test_cli_suggest_writes_artifacts(toy_files, tmp_path, capsys):
    edges, labels = toy_files
    rc = main([
        "suggest", "--edges", str(edges), "--labels", str(labels),
        "--method", "partition", "--out", str(tmp_path),
    ])
    assert rc == EXIT_OK
    assert (tmp_path / "curve.csv").exists()
    data = json.loads((tmp_path / "suggestions.json").read_text())
    assert data["schema"] == "v1"
    header = (tmp_path / "curve.csv").read_text().splitlines()[0]
    assert header == "r_left,r_right,raw,shift,normalized,is_peak,prominence"


def test_cli_constant_graph_empty_suggestions(tmp_path, capsys):
    edges = tmp_path / "const.txt"
    edges.write_text("\n".join(f"a b {t}\nc d {t}" for t in range(30)) + "\n")
    rc = main(["suggest", "--edges", str(edges), "--method", "sliding", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    assert capsys.readouterr().out.strip() == ""
    data = json.loads((tmp_path / "suggestions.json").read_text())
    assert data["resolutions"] == []


def test_cli_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("not an edge list\n")
    rc = main(["suggest", "--edges", str(bad), "--out", str(tmp_path)])
    assert rc == EXIT_PARSE


def test_cli_io_error_exit_code(tmp_path):
    rc = main(["suggest", "--edges", str(tmp_path / "missing.txt"), "--out", str(tmp_path)])
    assert rc in (EXIT_PARSE, 4)  # FileNotFoundError is an OSError
    assert rc == 4


def test_cli_parameter_error_exit_code(toy_files, tmp_path):
    edges, _ = toy_files
    rc = main([
        "suggest", "--edges", str(edges), "--method", "sliding",
        "--max-r", "3", "--out", str(tmp_path),
    ])
    # sliding grid with max_r=3 yields a single resolution -> parameter error
    assert rc == EXIT_PARAMETER


def test_cli_barcode_and_layout(toy_files, tmp_path, capsys):
    edges, labels = toy_files
    rc = main([
        "barcode", "--edges", str(edges), "--labels", str(labels),
        "--method", "partition", "-r", "1", "--members", "--out", str(tmp_path),
    ])
    assert rc == EXIT_OK
    payload = json.loads((tmp_path / "barcode_partition_r1.json").read_text())
    assert len(payload["bars"]) == 4
    rc = main([
        "layout", "--edges", str(edges), "--labels", str(labels),
        "--method", "partition", "-r", "1", "--out", str(tmp_path),
    ])
    assert rc == EXIT_OK


# -- HTTP ------------------------------------------------------------------------


def test_meta_endpoint(client):
    payload = client.get("/api/meta").json()
    assert payload["nodes"] == 6
    assert payload["events"] == 16
    assert payload["max_time"] == 5


def test_barcode_endpoint(client):
    resp = client.get("/api/barcode", params={"r": 1, "method": "partition"})
    assert resp.status_code == 200
    assert len(resp.json()["bars"]) == 4


def test_parameter_errors_are_400(client):
    assert client.get("/api/barcode", params={"r": 0, "method": "partition"}).status_code == 400
    assert client.get("/api/barcode", params={"r": 3, "method": "sliding"}).status_code == 400
    assert client.get("/api/layout", params={"r": 2, "method": "partition", "ordering": "weird"}).status_code == 400
    assert client.get("/api/snapshot", params={"r": 2, "t": 999, "method": "partition"}).status_code == 400
    assert client.get("/api/features", params={"rs": "", "method": "sliding"}).status_code == 400


def test_unknown_job_is_404(client):
    assert client.get("/api/status", params={"job": "zz"}).status_code == 404


def test_suggest_job_flow(client):
    resp = client.get("/api/suggest", params={"method": "partition"})
    body = resp.json()
    if "job" in body:
        for _ in range(100):
            st = client.get("/api/status", params={"job": body["job"]}).json()
            if st["state"] == "done":
                break
            time.sleep(0.05)
        assert st["state"] == "done"
        body = client.get("/api/suggest", params={"method": "partition"}).json()
    assert "resolutions" in body


def test_single_flight_job_reuse(explorer):
    a = explorer.submit_suggest("partition", "bottleneck", None, 5)
    b = explorer.submit_suggest("partition", "bottleneck", None, 5)
    assert a.id == b.id


def test_cli_http_byte_identical(client, explorer):
    http = client.get("/api/barcode", params={"r": 1, "method": "partition", "members": True})
    local = serialize.canonical_json(
        serialize.barcode_dict(explorer.barcode("partition", 1, "colored"), include_members=True)
    )
    assert http.content == local

    http = client.get("/api/layout", params={"r": 2, "method": "partition"})
    local = serialize.canonical_json(serialize.layout_dict(explorer.layout("partition", 2)))
    assert http.content == local

    http = client.get("/api/explain", params={"r1": 1, "r2": 2, "method": "partition"})
    local = serialize.canonical_json(
        serialize.explanation_dict(
            explorer.explain("partition", 1, 2), explorer.graph.node_names
        )
    )
    assert http.content == local

    http = client.get("/api/snapshot", params={"r": 1, "t": 0, "method": "partition"})
    local = serialize.canonical_json(serialize.snapshot_dict(explorer.snapshot("partition", 1, 0)))
    assert http.content == local

    http = client.get("/api/features", params={"rs": "1,2", "method": "partition"})
    gf = explorer.global_features("partition", [1, 2])
    payload = serialize.global_features_dict(gf)
    payload["mean_features"] = serialize.feature_curves_dict(
        explorer.feature_curves("partition", [1, 2])
    )
    assert http.content == serialize.canonical_json(payload)


def test_explain_endpoint_names_blue(client):
    payload = client.get("/api/explain", params={"r1": 1, "r2": 2, "method": "partition"}).json()
    assert payload["distance"] == 3
    assert set(payload["node_names"]) == {"b1", "b2"}


def test_flows_endpoint(client, explorer):
    barcode = explorer.barcode("partition", 1, "colored")
    red = next(b for b in barcode.bars if b.members[0] == frozenset({2, 3}))
    payload = client.get(
        "/api/flows", params={"r": 1, "method": "partition", "mode": "component", "key": red.id}
    ).json()
    assert payload["merges"][0]["at_index"] == 2


def test_snapshot_endpoint(client):
    payload = client.get("/api/snapshot", params={"r": 76, "t": 0, "method": "sliding"}).json() \
        if False else client.get("/api/snapshot", params={"r": 2, "t": 5, "method": "sliding"}).json()
    assert payload["index"] == 5
    assert payload["nodes"]


def test_barcode_members_roundtrip(client):
    payload = client.get(
        "/api/barcode", params={"r": 1, "method": "partition", "members": True}
    ).json()
    for bar in payload["bars"]:
        assert len(bar["members"]) == bar["death_index"] - bar["birth_index"] + 1
        assert [len(m) for m in bar["members"]] == bar["sizes"]
        total = sum(sum(v) for v in bar["labels"].values())
        assert total == sum(bar["sizes"])


def test_parallel_workers_deterministic(tmp_path):
    import random

    from resoscope.graph import parse_edges

    rng = random.Random(6)
    lines = []
    for t in range(60):
        for _ in range(rng.randint(1, 3)):
            u, v = rng.sample(range(8), 2)
            lines.append(f"n{u} n{v} {t}")
    g = parse_edges("\n".join(lines))
    serial = Explorer(g, workers=1).suggest("sliding", "bottleneck", None, 5)
    parallel = Explorer(g, workers=2).suggest("sliding", "bottleneck", None, 5)
    assert serial.raw == parallel.raw
    assert [s.resolution for s in serial.peaks] == [s.resolution for s in parallel.peaks]
