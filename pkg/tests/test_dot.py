from __future__ import annotations

from planprov.dot import confidence_color, export_dot
from planprov.dynamics import Overlay, propagate_confidence, support_fixpoint
from planprov.model import ProvGraph


def test_empty_graph_is_valid_digraph():
    text = export_dot(ProvGraph())
    assert text.startswith("digraph provenance {")
    assert text.rstrip().endswith("}")


def test_confidence_buckets():
    assert confidence_color(0.9) != confidence_color(0.5) != confidence_color(0.1)
    assert confidence_color(0.7) == confidence_color(1.0)
    assert confidence_color(0.3) == confidence_color(0.69)
    assert confidence_color(None) not in {
        confidence_color(0.9),
        confidence_color(0.5),
        confidence_color(0.1),
    }


def test_stable_output(rover_graph):
    status = support_fixpoint(rover_graph)
    confidence = propagate_confidence(rover_graph, status=status)
    assert export_dot(rover_graph, status, confidence) == export_dot(
        rover_graph, status, confidence
    )


def test_edges_carry_relation_labels(rover_graph):
    text = export_dot(rover_graph)
    assert 'label="WasGeneratedBy"' in text
    assert 'label="Used"' in text


def test_refuted_and_out_nodes_dashed(rover_graph):
    overlay = Overlay(refuted=frozenset({"TerrainMap"}))
    status = support_fixpoint(rover_graph, overlay)
    confidence = propagate_confidence(rover_graph, overlay, status)
    text = export_dot(rover_graph, status, confidence)
    for line in text.splitlines():
        if line.strip().startswith('"TerrainMap"'):
            assert "dashed" in line
    assert text.count("dashed") == sum(1 for s in status.values() if s != "IN")
