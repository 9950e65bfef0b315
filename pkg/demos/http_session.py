"""Drive the HTTP API in-process: sessions, class refutation, live recompute.

The same flow the web UI uses: store a graph, open a session, toggle
refutations and appraisal overrides, and read back per-node status and
confidence from /state.

Run: python3 demos/http_session.py
"""

from fastapi.testclient import TestClient

from planprov.scenarios import (
    rover_appraisals_dicts,
    rover_domain_dict,
    rover_problem_dict,
)
from planprov.service import create_app

client = TestClient(create_app())

# Start from an empty graph and let the service plan + map in one call.
graph_id = client.post(
    "/graphs", json={"nodes": [], "edges": [], "appraisals": []}
).json()["graph_id"]
result = client.post(
    f"/graphs/{graph_id}/plan",
    json={
        "domain": rover_domain_dict(),
        "problem": rover_problem_dict(),
        "appraisals": rover_appraisals_dicts(),
    },
).json()
print("planned:", result["plans"], "plans;", result["report"]["nodes_by_subtype"])

goal = result["report"]["goal_entities"][0]
session = client.post("/sessions", json={"graph_id": graph_id}).json()["session_id"]

state = client.get(f"/sessions/{session}/state").json()["nodes"]
print(f"\nbaseline: goal {state[goal]}")

# Refute the whole flier via the class selector the UI checkboxes use.
state = client.put(
    f"/sessions/{session}/refuted",
    json=[{"dimension": "agents", "key": "flier1"}],
).json()["nodes"]
print(f"refute flier1: goal {state[goal]}")

# Appraisal overrides propagate instantly without touching the graph.
state = client.put(
    f"/sessions/{session}/appraisals", json={"TerrainMap": 0.9}
).json()["nodes"]
print(f"override TerrainMap=0.9: goal {state[goal]}")

answer = client.get(
    f"/sessions/{session}/explain",
    params={"kind": "replan", "focus": goal, "threshold": 0.5},
).json()
print("\nreplan assessment:", answer["verdicts"], "-", answer["reasons"])

# Un-toggling restores the original picture; sessions never mutate the graph.
client.put(f"/sessions/{session}/appraisals", json={})
state = client.put(f"/sessions/{session}/refuted", json=[]).json()["nodes"]
print(f"\nreset: goal {state[goal]}")
