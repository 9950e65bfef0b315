"""Graphviz DOT export with stable ordering for golden-file comparison.

Nodes are colored by confidence bucket (>=0.7, 0.3-0.7, <0.3), refuted and
unsupported nodes render dashed, and edges carry their relation as a label.
Render with e.g. ``dot -Tsvg graph.gv -O``.
"""

from __future__ import annotations

from typing import Optional

from . import model
from .dynamics import IN, REFUTED

_SHAPES = {model.ENTITY: "ellipse", model.ACTIVITY: "box", model.AGENT: "house"}

HIGH_COLOR = "#c8e6c9"
MID_COLOR = "#fff9c4"
LOW_COLOR = "#ffcdd2"
NEUTRAL_COLOR = "#eceff1"


def confidence_color(value: Optional[float]) -> str:
    if value is None:
        return NEUTRAL_COLOR
    if value >= 0.7:
        return HIGH_COLOR
    if value >= 0.3:
        return MID_COLOR
    return LOW_COLOR


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    graph: model.ProvGraph,
    status: Optional[dict] = None,
    confidence: Optional[dict] = None,
) -> str:
    status = status or {}
    confidence = confidence or {}
    lines = [
        "digraph provenance {",
        "  rankdir=LR;",
        '  node [style="filled"];',
    ]
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        attrs = {
            "label": node.label or node.id,
            "shape": _SHAPES.get(node.kind, "ellipse"),
            "fillcolor": confidence_color(confidence.get(node_id)),
        }
        node_status = status.get(node_id, IN)
        if node_status != IN:
            attrs["style"] = "filled,dashed"
            attrs["fillcolor"] = NEUTRAL_COLOR
        if node_status == REFUTED:
            attrs["color"] = "#b71c1c"
        rendered = ", ".join(f"{k}={_quote(v)}" for k, v in sorted(attrs.items()))
        lines.append(f"  {_quote(node_id)} [{rendered}];")
    for edge in sorted(graph.edges, key=lambda e: (e.src, e.dst, e.relation)):
        lines.append(
            f"  {_quote(edge.src)} -> {_quote(edge.dst)} "
            f"[label={_quote(edge.relation)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
