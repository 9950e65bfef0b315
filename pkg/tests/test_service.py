from __future__ import annotations

import threading

import pytest
from fastapi.testclient import TestClient

from conftest import GOAL
from planprov.scenarios import (
    rover_appraisals_dicts,
    rover_domain_dict,
    rover_problem_dict,
)
from planprov.service import MAX_GRAPH_NODES, create_app


@pytest.fixture()
def client(rover_graph):
    return TestClient(create_app({"rover": rover_graph}))


@pytest.fixture()
def session_id(client):
    response = client.post("/sessions", json={"graph_id": "rover"})
    assert response.status_code == 201
    return response.json()["session_id"]


def test_post_graph_and_fetch(client, rover_graph):
    response = client.post("/graphs", json=rover_graph.to_dict())
    assert response.status_code == 201
    graph_id = response.json()["graph_id"]
    fetched = client.get(f"/graphs/{graph_id}")
    assert fetched.status_code == 200
    assert len(fetched.json()["nodes"]) == len(rover_graph)


def test_post_graph_validation_failure(client):
    doc = {
        "nodes": [{"id": "x", "kind": "Entity", "subtype": "Task", "label": "x"}],
        "edges": [],
        "appraisals": [],
    }
    response = client.post("/graphs", json=doc)
    assert response.status_code == 422
    assert "SubtypeMismatch" in response.json()["detail"]


def test_post_graph_too_large(client):
    doc = {
        "nodes": [
            {"id": f"b{i}", "kind": "Entity", "subtype": "Belief", "label": ""}
            for i in range(MAX_GRAPH_NODES + 1)
        ],
        "edges": [],
        "appraisals": [],
    }
    response = client.post("/graphs", json=doc)
    assert response.status_code == 413


def test_plan_endpoint_builds_graph(client):
    created = client.post("/graphs", json={"nodes": [], "edges": [], "appraisals": []})
    graph_id = created.json()["graph_id"]
    response = client.post(
        f"/graphs/{graph_id}/plan",
        json={
            "domain": rover_domain_dict(),
            "problem": rover_problem_dict(),
            "appraisals": rover_appraisals_dicts(),
        },
    )
    assert response.status_code == 200
    assert response.json()["plans"] == 2
    doc = client.get(f"/graphs/{graph_id}").json()
    assert len(doc["nodes"]) == 25


def test_catalog_endpoint(client):
    response = client.get("/graphs/rover/catalog")
    assert response.status_code == 200
    payload = response.json()
    assert payload["agents"] == ["flier1", "rover0"]
    assert "take_image" in payload["operation_classes"]


def test_unknown_graph_404(client):
    assert client.get("/graphs/nope").status_code == 404
    assert client.post("/sessions", json={"graph_id": "nope"}).status_code == 404


def test_refute_class_selector_flow(client, session_id):
    response = client.put(
        f"/sessions/{session_id}/refuted",
        json=[{"dimension": "agents", "key": "flier1"}],
    )
    assert response.status_code == 200
    nodes = response.json()["nodes"]
    assert nodes[GOAL] == {"status": "IN", "confidence": 0.2}
    assert nodes["flier1"]["status"] == "REFUTED"
    flier_tasks = [
        n for n, s in nodes.items() if n.startswith("task:") and s["status"] == "OUT"
    ]
    assert len(flier_tasks) == 3


def test_refute_reset(client, session_id):
    client.put(f"/sessions/{session_id}/refuted", json=["flier1"])
    response = client.put(f"/sessions/{session_id}/refuted", json=[])
    nodes = response.json()["nodes"]
    assert all(s["status"] == "IN" for s in nodes.values())
    assert nodes[GOAL]["confidence"] == 0.8


def test_refute_unknown_node_404(client, session_id):
    response = client.put(f"/sessions/{session_id}/refuted", json=["ghost"])
    assert response.status_code == 404


def test_refute_unknown_selector_409(client, session_id):
    response = client.put(
        f"/sessions/{session_id}/refuted",
        json=[{"dimension": "operation_classes", "key": "teleport"}],
    )
    assert response.status_code == 409


def test_refute_malformed_422(client, session_id):
    assert (
        client.put(f"/sessions/{session_id}/refuted", json={"not": "a list"}).status_code
        == 422
    )
    assert (
        client.put(f"/sessions/{session_id}/refuted", json=[42]).status_code == 422
    )


def test_appraisal_override_propagates(client, session_id):
    client.put(f"/sessions/{session_id}/refuted", json=["flier1"])
    response = client.put(
        f"/sessions/{session_id}/appraisals", json={"TerrainMap": 0.9}
    )
    assert response.status_code == 200
    assert response.json()["nodes"][GOAL]["confidence"] == 0.9


def test_appraisal_range_and_subject_errors(client, session_id):
    assert (
        client.put(f"/sessions/{session_id}/appraisals", json={"TerrainMap": 1.5}).status_code
        == 422
    )
    assert (
        client.put(f"/sessions/{session_id}/appraisals", json={"ghost": 0.5}).status_code
        == 404
    )


def test_explain_route(client, session_id):
    client.put(f"/sessions/{session_id}/refuted", json=["flier1"])
    response = client.get(
        f"/sessions/{session_id}/explain",
        params={"kind": "replan", "focus": GOAL, "threshold": 0.5},
    )
    assert response.status_code == 200
    payload = response.json()
    assert payload["verdicts"]["needs_replan"] is True
    assert payload["confidence"] == 0.2


def test_explain_unknown_focus_404(client, session_id):
    response = client.get(
        f"/sessions/{session_id}/explain",
        params={"kind": "reliability", "focus": "ghost"},
    )
    assert response.status_code == 404


def test_state_is_byte_identical_for_identical_overlays(client):
    first = client.post("/sessions", json={"graph_id": "rover"}).json()["session_id"]
    second = client.post("/sessions", json={"graph_id": "rover"}).json()["session_id"]
    for sid in (first, second):
        client.put(f"/sessions/{sid}/refuted", json=["TerrainMap"])
    a = client.get(f"/sessions/{first}/state").content
    b = client.get(f"/sessions/{second}/state").content
    assert a == b


def test_session_isolation_under_interleaving(client):
    sessions = [
        client.post("/sessions", json={"graph_id": "rover"}).json()["session_id"]
        for _ in range(2)
    ]
    client.put(f"/sessions/{sessions[0]}/refuted", json=["flier1"])
    client.put(f"/sessions/{sessions[1]}/refuted", json=["TerrainMap"])
    client.put(f"/sessions/{sessions[0]}/appraisals", json={"TerrainMap": 0.9})

    state0 = client.get(f"/sessions/{sessions[0]}/state").json()["nodes"]
    state1 = client.get(f"/sessions/{sessions[1]}/state").json()["nodes"]
    assert state0["flier1"]["status"] == "REFUTED"
    assert state1["flier1"]["status"] == "IN"
    assert state0[GOAL]["confidence"] == 0.9
    assert state1[GOAL]["confidence"] == 0.8


def test_concurrent_sessions_do_not_interfere(client):
    ids = [
        client.post("/sessions", json={"graph_id": "rover"}).json()["session_id"]
        for _ in range(4)
    ]
    results = {}

    def worker(sid, target):
        client.put(f"/sessions/{sid}/refuted", json=[target])
        results[sid] = client.get(f"/sessions/{sid}/state").json()["nodes"]

    threads = [
        threading.Thread(target=worker, args=(sid, target))
        for sid, target in zip(ids, ["flier1", "rover0", "TerrainMap", "ElevationMap"])
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results[ids[0]]["flier1"]["status"] == "REFUTED"
    assert results[ids[2]]["TerrainMap"]["status"] == "REFUTED"
    assert results[ids[2]]["flier1"]["status"] == "IN"
