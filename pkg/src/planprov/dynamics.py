"""What-if dynamics over a graph plus a session overlay.

The overlay never mutates the graph: it names refuted nodes and confidence
overrides, and every query here is a pure function of (graph, overlay).

Support status is the least fixpoint of: a root is IN unless refuted; any
other node is IN iff it is not refuted and some support alternative has all
members IN. Confidence propagates forward over the same structure with
min/max semantics: a conjunction is as reliable as its least reliable input,
a disjunction as reliable as its most reliable alternative. A node's own
appraisal (or override) seeds it when it is a root and caps the value flowing
through it otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from . import model
from .environments import support_order, support_rules

IN = "IN"
OUT = "OUT"
REFUTED = "REFUTED"


class UnknownNode(Exception):
    pass


@dataclass
class Overlay:
    """A session's mutable what-if state, layered over an immutable graph."""

    refuted: frozenset = frozenset()
    confidence_overrides: dict = field(default_factory=dict)

    def validate_for(self, graph: model.ProvGraph) -> None:
        for node_id in self.refuted:
            if node_id not in graph:
                raise UnknownNode(f"refuted id not in graph: {node_id}")
        for node_id, value in self.confidence_overrides.items():
            if node_id not in graph:
                raise UnknownNode(f"override id not in graph: {node_id}")
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"confidence override out of range: {node_id}={value}")

    def with_refuted(self, extra: Iterable[str]) -> "Overlay":
        return Overlay(self.refuted | frozenset(extra), dict(self.confidence_overrides))


def support_fixpoint(
    graph: model.ProvGraph,
    overlay: Optional[Overlay] = None,
    rules: Optional[dict] = None,
) -> dict:
    """Status (IN / OUT / REFUTED) for every node under the overlay."""
    overlay = overlay or Overlay()
    rules = rules if rules is not None else support_rules(graph)
    status: dict[str, str] = {}
    for node in support_order(rules):
        if node in overlay.refuted:
            status[node] = REFUTED
            continue
        alts = rules[node]
        if not alts:
            status[node] = IN
        elif any(all(status[m] == IN for m in alt) for alt in alts):
            status[node] = IN
        else:
            status[node] = OUT
    return status


def propagate_confidence(
    graph: model.ProvGraph,
    overlay: Optional[Overlay] = None,
    status: Optional[dict] = None,
    rules: Optional[dict] = None,
) -> dict:
    """Confidence for every IN node; refuted and unsupported nodes are absent.

    Roots take their override, else their appraisal, else 1.0. Interior nodes
    take max over IN alternatives of the min over members, capped by their own
    override or appraisal when one is present and lower.
    """
    overlay = overlay or Overlay()
    rules = rules if rules is not None else support_rules(graph)
    if status is None:
        status = support_fixpoint(graph, overlay, rules)
    appraised: dict[str, float] = {}
    for a in graph.appraisals:
        if a.confidence is not None:
            appraised[a.subject] = a.confidence
    confidence: dict[str, float] = {}
    for node in support_order(rules):
        if status[node] != IN:
            continue
        own = overlay.confidence_overrides.get(node)
        if own is None:
            own = appraised.get(node)
        alts = rules[node]
        if not alts:
            confidence[node] = own if own is not None else 1.0
            continue
        best = None
        for alt in alts:
            if not all(status[m] == IN for m in alt):
                continue
            value = min(confidence[m] for m in alt) if alt else 1.0
            if best is None or value > best:
                best = value
        value = best if best is not None else 1.0
        if own is not None and own < value:
            value = own
        confidence[node] = value
    return confidence


def impact(
    graph: model.ProvGraph,
    overlay: Optional[Overlay] = None,
    m: Union[str, Iterable[str]] = (),
) -> frozenset:
    """Downstream nodes that lose support or confidence when m is refuted.

    Computed by differencing the fixpoint and propagation before and after
    adding m to the refuted set; covers both severed support and nodes that
    survive with strictly lower confidence.
    """
    overlay = overlay or Overlay()
    focus = frozenset({m} if isinstance(m, str) else m)
    for node_id in focus:
        if node_id not in graph:
            raise UnknownNode(f"impact focus not in graph: {node_id}")
    rules = support_rules(graph)
    before_status = support_fixpoint(graph, overlay, rules)
    before_conf = propagate_confidence(graph, overlay, before_status, rules)
    after = overlay.with_refuted(focus)
    after_status = support_fixpoint(graph, after, rules)
    after_conf = propagate_confidence(graph, after, after_status, rules)
    hit = set()
    for node in graph.nodes:
        if node in focus or before_status[node] != IN:
            continue
        if after_status[node] != IN:
            hit.add(node)
        elif after_conf[node] < before_conf[node]:
            hit.add(node)
    return frozenset(hit)


def pertinence(
    graph: model.ProvGraph,
    overlay: Optional[Overlay] = None,
    focus: Union[str, Iterable[str]] = (),
) -> frozenset:
    """Upstream closure of the focus through fully-IN support alternatives.

    Everything returned participates in some live derivation of a focus node;
    nodes whose support collapsed under the overlay contribute nothing beyond
    themselves.
    """
    overlay = overlay or Overlay()
    wanted = [focus] if isinstance(focus, str) else list(focus)
    if not wanted:
        raise ValueError("pertinence requires a nonempty focus")
    for node_id in wanted:
        if node_id not in graph:
            raise UnknownNode(f"pertinence focus not in graph: {node_id}")
    rules = support_rules(graph)
    status = support_fixpoint(graph, overlay, rules)
    seen: set[str] = set()
    stack = list(wanted)
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        for alt in rules[node]:
            if all(status[m] == IN for m in alt):
                stack.extend(m for m in alt if m not in seen)
    return frozenset(seen)


def dependents_closure(graph: model.ProvGraph, focus: Iterable[str]) -> frozenset:
    """Transitive dependents of the focus along stored support edges,
    regardless of overlay state (structural reachability)."""
    incoming: dict[str, list] = {}
    for e in graph.edges:
        if e.relation in model.SUPPORT_RELATIONS:
            incoming.setdefault(e.dst, []).append(e.src)
    seen: set[str] = set()
    stack = list(focus)
    while stack:
        node = stack.pop()
        for dependent in incoming.get(node, ()):
            if dependent not in seen:
                seen.add(dependent)
                stack.append(dependent)
    return frozenset(seen - set(focus))
