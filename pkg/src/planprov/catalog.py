"""Catalogs the four plan dimensions for emphasis and class refutation.

Dimensions: contributing agents, source entities, source classes (belief
predicates under ``pred:`` and collection disciplines under ``disc:``), and
operation classes (one per operator name). Class lookups are O(1) and feed
both the UI sidebar and the {dimension, key} refutation selectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import model


class UnknownClass(Exception):
    pass


DIMENSIONS = ("agents", "source_entities", "source_classes", "operation_classes")

_ALIASES = {
    "agents": "agents",
    "agent": "agents",
    "source_entities": "source_entities",
    "sources": "source_entities",
    "source": "source_entities",
    "source_classes": "source_classes",
    "src": "source_classes",
    "class": "source_classes",
    "operation_classes": "operation_classes",
    "op": "operation_classes",
    "operation": "operation_classes",
    "ops": "operation_classes",
}


@dataclass
class Catalog:
    agents: frozenset = frozenset()
    source_entities: frozenset = frozenset()
    source_classes: dict = field(default_factory=dict)
    operation_classes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "agents": sorted(self.agents),
            "source_entities": sorted(self.source_entities),
            "source_classes": {
                k: sorted(v) for k, v in sorted(self.source_classes.items())
            },
            "operation_classes": {
                k: sorted(v) for k, v in sorted(self.operation_classes.items())
            },
        }


def _operator_name(node: model.ProvNode) -> str:
    op = node.attributes.get("operator")
    if op:
        return op
    label = node.label or node.id
    return label.split("(", 1)[0]


def build_catalog(graph: model.ProvGraph) -> Catalog:
    """Mine the graph's predicates, sources, disciplines, and operators."""
    agents = frozenset(n.id for n in graph.nodes_of_kind(model.AGENT))
    source_entities = frozenset(
        n.id for n in graph.nodes.values() if n.subtype == model.INFORMATION_SOURCE
    )
    source_classes: dict[str, set] = {}
    operation_classes: dict[str, set] = {}
    for node in graph.nodes.values():
        if node.subtype == model.BELIEF:
            pred = node.attributes.get("predicate") or _operator_name(node)
            source_classes.setdefault(f"pred:{pred}", set()).add(node.id)
        if node.kind == model.ACTIVITY:
            operation_classes.setdefault(_operator_name(node), set()).add(node.id)
        for tag in node.attributes.get("disciplines", ()):
            source_classes.setdefault(f"disc:{tag}", set()).add(node.id)
    for appraisal in graph.appraisals:
        for tag in appraisal.disciplines:
            if appraisal.subject in graph:
                source_classes.setdefault(f"disc:{tag}", set()).add(appraisal.subject)
    return Catalog(
        agents=agents,
        source_entities=source_entities,
        source_classes={k: frozenset(v) for k, v in source_classes.items()},
        operation_classes={k: frozenset(v) for k, v in operation_classes.items()},
    )


def class_members(catalog: Catalog, dimension: str, key: str) -> frozenset:
    """Resolve a {dimension, key} selector to its member node ids."""
    canonical = _ALIASES.get(dimension)
    if canonical is None:
        raise UnknownClass(f"unknown dimension: {dimension!r}")
    if canonical == "agents":
        if key not in catalog.agents:
            raise UnknownClass(f"unknown agent: {key!r}")
        return frozenset({key})
    if canonical == "source_entities":
        if key not in catalog.source_entities:
            raise UnknownClass(f"unknown source entity: {key!r}")
        return frozenset({key})
    table = getattr(catalog, canonical)
    if key not in table:
        raise UnknownClass(f"unknown {canonical} key: {key!r}")
    return table[key]
