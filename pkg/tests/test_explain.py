from __future__ import annotations

import pytest

from conftest import GOAL, activity_of
from planprov import dynamics, environments
from planprov.dynamics import Overlay
from planprov.explain import (
    NotAGoal,
    NotAnActivity,
    answer,
    assumptions_for,
    reliability,
    replan_assessment,
    sensitivity,
    why_action,
)


@pytest.fixture(scope="module")
def labels(rover_graph):
    return environments.compute_labels(rover_graph)


def test_why_action_take_image(rover_graph):
    take_image = activity_of(rover_graph, "take_image", "flier1")
    explanation = why_action(rover_graph, Overlay(), take_image)
    assert explanation.goals == [GOAL]
    assert "belief:visible(objective1,waypoint0)" in explanation.upstream
    assert explanation.verdicts["supported"] is True


def test_why_action_on_out_activity(rover_graph):
    take_image = activity_of(rover_graph, "take_image", "rover0")
    explanation = why_action(
        rover_graph, Overlay(refuted=frozenset({"TerrainMap"})), take_image
    )
    assert explanation.verdicts["supported"] is False
    assert explanation.reasons == ["unsupported under current overlay"]


def test_why_action_communicate_upstream_includes_take_image(rover_graph):
    communicate = activity_of(rover_graph, "communicate", "rover0")
    take_image = activity_of(rover_graph, "take_image", "rover0")
    explanation = why_action(rover_graph, Overlay(), communicate)
    assert take_image in explanation.upstream
    assert "belief:image_taken(rover0,objective1,high_res)" in explanation.upstream


def test_why_action_rejects_non_activity(rover_graph):
    with pytest.raises(NotAnActivity):
        why_action(rover_graph, Overlay(), "TerrainMap")


def test_reliability_goal_via_flier_path(rover_graph):
    explanation = reliability(rover_graph, Overlay(), GOAL)
    assert explanation.confidence == 0.80
    (via,) = explanation.via
    assert rover_graph.nodes[via].attributes["agent"] == "flier1"


def test_reliability_of_appraised_root(rover_graph):
    explanation = reliability(rover_graph, Overlay(), "TerrainMap")
    assert explanation.confidence == 0.20


def test_reliability_goal_with_flier_refuted(rover_graph):
    explanation = reliability(
        rover_graph, Overlay(refuted=frozenset({"flier1"})), GOAL
    )
    assert explanation.confidence == 0.20
    (via,) = explanation.via
    assert rover_graph.nodes[via].attributes["agent"] == "rover0"


def test_sensitivity_uses_labels_for_root_sets(rover_graph, labels):
    explanation = sensitivity(rover_graph, labels, GOAL, {"flier1", "rover0"})
    assert explanation.method == "labels"
    assert explanation.verdicts["necessary"] is True
    assert explanation.surviving_environments == []


def test_sensitivity_falls_back_to_fixpoint_for_interior_nodes(rover_graph, labels):
    take_image = activity_of(rover_graph, "take_image", "flier1")
    explanation = sensitivity(rover_graph, labels, GOAL, {take_image})
    assert explanation.method == "fixpoint"
    assert explanation.verdicts["necessary"] is False  # rover path still stands


def test_assumptions_for_goal(rover_graph, labels):
    explanation = assumptions_for(rover_graph, labels, GOAL)
    assert explanation.necessary == {"ids": [], "assumptions": []}
    assert len(explanation.sufficient) == 2
    all_strings = {
        s for entry in explanation.sufficient for s in entry["assumptions"]
    }
    assert all_strings == {
        "the terrain survey is current",
        "the elevation data is georegistered",
    }


def test_assumptions_for_sourced_belief(rover_graph, labels):
    explanation = assumptions_for(
        rover_graph, labels, "belief:visible(objective1,waypoint0)"
    )
    assert explanation.necessary["ids"] == ["ElevationMap"]
    assert explanation.necessary["assumptions"] == [
        "the elevation data is georegistered"
    ]


def test_assumptions_for_root_is_its_own(rover_graph, labels):
    explanation = assumptions_for(rover_graph, labels, "TerrainMap")
    assert explanation.necessary["ids"] == ["TerrainMap"]
    assert explanation.necessary["assumptions"] == ["the terrain survey is current"]


def test_replan_not_needed_after_terrain_refutation(rover_graph):
    explanation = replan_assessment(
        rover_graph, Overlay(refuted=frozenset({"TerrainMap"})), GOAL, threshold=0.5
    )
    assert explanation.verdicts["needs_replan"] is False
    assert explanation.confidence == 0.80


def test_replan_needed_after_flier_refutation(rover_graph):
    explanation = replan_assessment(
        rover_graph, Overlay(refuted=frozenset({"flier1"})), GOAL, threshold=0.5
    )
    assert explanation.verdicts["needs_replan"] is True
    assert explanation.confidence == 0.20


def test_replan_clean_overlay_threshold_zero(rover_graph):
    explanation = replan_assessment(rover_graph, Overlay(), GOAL, threshold=0.0)
    assert explanation.verdicts["needs_replan"] is False


def test_replan_rejects_non_goal(rover_graph):
    with pytest.raises(NotAGoal):
        replan_assessment(rover_graph, Overlay(), "TerrainMap")


def test_explanations_reproducible_from_engines(rover_graph):
    take_image = activity_of(rover_graph, "take_image", "flier1")
    overlay = Overlay(refuted=frozenset({"TerrainMap"}))
    explanation = answer(rover_graph, overlay, "pertinence", [take_image])
    assert set(explanation.emphasized) == set(
        dynamics.pertinence(rover_graph, overlay, [take_image])
    )
    explanation = answer(rover_graph, overlay, "impact", [take_image])
    assert set(explanation.impacted) == set(
        dynamics.impact(rover_graph, overlay, [take_image])
    )


def test_answer_rejects_unknown_kind(rover_graph):
    with pytest.raises(ValueError):
        answer(rover_graph, Overlay(), "vibes", [GOAL])
