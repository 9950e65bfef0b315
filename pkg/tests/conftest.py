from __future__ import annotations

import json

import pytest

from planprov import htn, mapping, scenarios

GOAL = "goal:have_image(objective1,high_res)"


@pytest.fixture(scope="session")
def rover_domain():
    return scenarios.rover_domain()


@pytest.fixture(scope="session")
def rover_problem():
    return scenarios.rover_problem()


@pytest.fixture(scope="session")
def rover_plans(rover_domain, rover_problem):
    return htn.all_plans(rover_domain, rover_problem, limit=10)


@pytest.fixture(scope="session")
def rover_graph(rover_plans, rover_problem):
    graph, _ = mapping.plan_to_prov(
        rover_plans, rover_problem, scenarios.rover_appraisals()
    )
    return graph


@pytest.fixture(scope="session")
def rover_report(rover_plans, rover_problem):
    _, report = mapping.plan_to_prov(
        rover_plans, rover_problem, scenarios.rover_appraisals()
    )
    return report


@pytest.fixture()
def rover_graph_file(rover_graph, tmp_path):
    path = tmp_path / "rover_graph.json"
    path.write_text(json.dumps(rover_graph.to_dict()))
    return str(path)


def activity_of(graph, operator: str, agent: str) -> str:
    """Locate the one activity node for (operator, agent) in a mapped graph."""
    hits = [
        n.id
        for n in graph.nodes.values()
        if n.kind == "Activity"
        and n.attributes.get("operator") == operator
        and n.attributes.get("agent") == agent
    ]
    assert len(hits) == 1, f"expected one {operator}@{agent}, found {hits}"
    return hits[0]
