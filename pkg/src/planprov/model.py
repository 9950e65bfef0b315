"""PROV-DM subset: typed nodes, relations, appraisals, and the validated graph.

The graph is tripartite (Agents, Activities, Entities) with a fixed table of
typed relations. A small subset of the relations carries *support* semantics
(what a node needs in order to be believed, achieved, or enacted); the rest
are stored and rendered but never analyzed. Stored edges point upstream: an
edge from X to Y means Y helps establish X.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Optional

ENTITY = "Entity"
ACTIVITY = "Activity"
AGENT = "Agent"

BELIEF = "Belief"
INFORMATION_SOURCE = "InformationSource"
GOAL = "Goal"
TASK = "Task"
ACTOR = "Actor"

SUBTYPES_BY_KIND = {
    ENTITY: (BELIEF, INFORMATION_SOURCE, GOAL),
    ACTIVITY: (TASK,),
    AGENT: (ACTOR,),
}

USED = "Used"
WAS_GENERATED_BY = "WasGeneratedBy"
WAS_ASSOCIATED_WITH = "WasAssociatedWith"
WAS_DERIVED_FROM = "WasDerivedFrom"
WAS_INFORMED_BY = "WasInformedBy"
ACTED_ON_BEHALF_OF = "ActedOnBehalfOf"
WAS_ATTRIBUTED_TO = "WasAttributedTo"

# relation -> (required kind of `from`, required kind of `to`)
ENDPOINT_KINDS = {
    USED: (ACTIVITY, ENTITY),
    WAS_GENERATED_BY: (ENTITY, ACTIVITY),
    WAS_ASSOCIATED_WITH: (ACTIVITY, AGENT),
    WAS_DERIVED_FROM: (ENTITY, ENTITY),
    WAS_INFORMED_BY: (ACTIVITY, ACTIVITY),
    ACTED_ON_BEHALF_OF: (AGENT, AGENT),
    WAS_ATTRIBUTED_TO: (ENTITY, AGENT),
}

# Relations that carry support semantics (see environments.support_rules).
SUPPORT_RELATIONS = frozenset(
    {USED, WAS_GENERATED_BY, WAS_ASSOCIATED_WITH, WAS_DERIVED_FROM}
)
# Relations whose subgraph must stay acyclic.
ACYCLIC_RELATIONS = frozenset(
    {USED, WAS_GENERATED_BY, WAS_DERIVED_FROM, WAS_INFORMED_BY}
)


class GraphError(Exception):
    """Base class for graph construction errors."""


class DuplicateId(GraphError):
    pass


class MissingEndpoint(GraphError):
    pass


class KindMismatch(GraphError):
    pass


class CycleIntroduced(GraphError):
    pass


class MissingSubject(GraphError):
    pass


@dataclass
class ProvNode:
    id: str
    kind: str
    subtype: str
    label: str = ""
    attributes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "subtype": self.subtype,
            "label": self.label,
            "attributes": self.attributes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProvNode":
        return cls(
            id=d["id"],
            kind=d["kind"],
            subtype=d["subtype"],
            label=d.get("label", ""),
            attributes=dict(d.get("attributes", {})),
        )


@dataclass(frozen=True)
class ProvEdge:
    src: str
    dst: str
    relation: str

    def to_dict(self) -> dict:
        return {"from": self.src, "to": self.dst, "relation": self.relation}

    @classmethod
    def from_dict(cls, d: dict) -> "ProvEdge":
        return cls(src=d["from"], dst=d["to"], relation=d["relation"])


@dataclass(frozen=True)
class Appraisal:
    """An agent's judgment about a node: confidence, assumptions, disciplines.

    ``appraiser`` is either the id of an Agent node or the literal marker
    ``"analyst"`` for judgments entered interactively.
    """

    appraiser: str
    subject: str
    confidence: Optional[float] = None
    assumptions: tuple = ()
    disciplines: tuple = ()

    def to_dict(self) -> dict:
        return {
            "appraiser": self.appraiser,
            "subject": self.subject,
            "confidence": self.confidence,
            "assumptions": list(self.assumptions),
            "disciplines": list(self.disciplines),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Appraisal":
        return cls(
            appraiser=d.get("appraiser", "analyst"),
            subject=d["subject"],
            confidence=d.get("confidence"),
            assumptions=tuple(d.get("assumptions", ())),
            disciplines=tuple(d.get("disciplines", ())),
        )


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.subject}: {self.detail}"


class ProvGraph:
    """Container for nodes, edges, and appraisals with validation.

    Construction is single-writer; once loaded and validated, instances are
    treated as immutable and may be shared freely across threads.
    """

    def __init__(self) -> None:
        self.nodes: dict[str, ProvNode] = {}
        self.edges: list[ProvEdge] = []
        self.appraisals: list[Appraisal] = []
        self._edge_set: set[ProvEdge] = set()
        self._out: dict[str, list[ProvEdge]] = {}
        self._in: dict[str, list[ProvEdge]] = {}

    # -- construction ------------------------------------------------------

    def add_node(self, node: ProvNode) -> None:
        if node.id in self.nodes:
            raise DuplicateId(f"node id already present: {node.id}")
        self.nodes[node.id] = node
        self._out.setdefault(node.id, [])
        self._in.setdefault(node.id, [])

    def add_edge(self, edge: ProvEdge, check_cycle: bool = True) -> None:
        """Add an edge, enforcing endpoint kinds and support acyclicity.

        Duplicate (from, to, relation) triples are ignored, which makes graph
        merging idempotent.
        """
        if edge in self._edge_set:
            return
        if edge.src not in self.nodes or edge.dst not in self.nodes:
            raise MissingEndpoint(f"edge endpoints must exist: {edge}")
        want = ENDPOINT_KINDS.get(edge.relation)
        if want is None:
            raise KindMismatch(f"unknown relation: {edge.relation}")
        src_kind = self.nodes[edge.src].kind
        dst_kind = self.nodes[edge.dst].kind
        if (src_kind, dst_kind) != want:
            raise KindMismatch(
                f"{edge.relation} requires {want[0]}->{want[1]}, "
                f"got {src_kind}->{dst_kind} ({edge.src}->{edge.dst})"
            )
        if (
            check_cycle
            and edge.relation in ACYCLIC_RELATIONS
            and self._reaches(edge.dst, edge.src)
        ):
            raise CycleIntroduced(f"edge would close a support cycle: {edge}")
        self.edges.append(edge)
        self._edge_set.add(edge)
        self._out[edge.src].append(edge)
        self._in[edge.dst].append(edge)

    def add_appraisal(self, appraisal: Appraisal) -> None:
        if appraisal.subject not in self.nodes:
            raise MissingSubject(f"appraisal subject not in graph: {appraisal.subject}")
        self.appraisals.append(appraisal)

    def _reaches(self, start: str, target: str) -> bool:
        if start == target:
            return True
        stack = [start]
        seen = {start}
        while stack:
            n = stack.pop()
            for e in self._out.get(n, ()):
                if e.relation not in ACYCLIC_RELATIONS:
                    continue
                if e.dst == target:
                    return True
                if e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        return False

    # -- queries -----------------------------------------------------------

    def node(self, node_id: str) -> ProvNode:
        return self.nodes[node_id]

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def out_edges(self, node_id: str, relation: Optional[str] = None) -> list[ProvEdge]:
        edges = self._out.get(node_id, [])
        if relation is None:
            return list(edges)
        return [e for e in edges if e.relation == relation]

    def in_edges(self, node_id: str, relation: Optional[str] = None) -> list[ProvEdge]:
        edges = self._in.get(node_id, [])
        if relation is None:
            return list(edges)
        return [e for e in edges if e.relation == relation]

    def nodes_of_kind(self, kind: str) -> Iterator[ProvNode]:
        return (n for n in self.nodes.values() if n.kind == kind)

    def appraisals_for(self, subject: str) -> list[Appraisal]:
        return [a for a in self.appraisals if a.subject == subject]

    def effective_confidence(self, subject: str) -> Optional[float]:
        """Confidence from the latest appraisal carrying one (last write wins)."""
        value = None
        for a in self.appraisals:
            if a.subject == subject and a.confidence is not None:
                value = a.confidence
        return value

    def roots(self) -> set[str]:
        """Nodes with no support of their own; Agents are always roots."""
        out = set()
        for node_id in self.nodes:
            if not any(
                e.relation in SUPPORT_RELATIONS for e in self._out.get(node_id, ())
            ):
                out.add(node_id)
        return out

    def sinks(self) -> set[str]:
        """Nodes nothing depends on (never the target of a support edge)."""
        supported = {
            e.dst for e in self.edges if e.relation in SUPPORT_RELATIONS
        }
        return set(self.nodes) - supported

    # -- validation --------------------------------------------------------

    def validate(self) -> list[Violation]:
        """Return all invariant violations; empty list means the graph is valid."""
        violations: list[Violation] = []
        for node in self.nodes.values():
            allowed = SUBTYPES_BY_KIND.get(node.kind)
            if allowed is None:
                violations.append(
                    Violation("UnknownKind", node.id, f"kind {node.kind!r}")
                )
            elif node.subtype not in allowed:
                violations.append(
                    Violation(
                        "SubtypeMismatch",
                        node.id,
                        f"subtype {node.subtype!r} not valid for kind {node.kind!r}",
                    )
                )
        for edge in self.edges:
            if edge.src not in self.nodes or edge.dst not in self.nodes:
                violations.append(
                    Violation("MissingEndpoint", f"{edge.src}->{edge.dst}", str(edge))
                )
                continue
            want = ENDPOINT_KINDS.get(edge.relation)
            if want is None:
                violations.append(
                    Violation("UnknownRelation", f"{edge.src}->{edge.dst}", edge.relation)
                )
                continue
            got = (self.nodes[edge.src].kind, self.nodes[edge.dst].kind)
            if got != want:
                violations.append(
                    Violation(
                        "KindMismatch",
                        f"{edge.src}->{edge.dst}",
                        f"{edge.relation} requires {want[0]}->{want[1]}, got {got[0]}->{got[1]}",
                    )
                )
        cycle = self._find_support_cycle()
        if cycle is not None:
            violations.append(
                Violation("SupportCycle", cycle, "support subgraph is not acyclic")
            )
        for a in self.appraisals:
            if a.subject not in self.nodes:
                violations.append(Violation("MissingSubject", a.subject, "appraisal subject"))
            if a.confidence is not None and not (0.0 <= a.confidence <= 1.0):
                violations.append(
                    Violation("ConfidenceRange", a.subject, f"confidence {a.confidence}")
                )
        for node in self.nodes.values():
            if node.subtype != GOAL:
                continue
            dependents = [
                e for e in self._in.get(node.id, ()) if e.relation in SUPPORT_RELATIONS
            ]
            if dependents:
                violations.append(
                    Violation(
                        "GoalNotSink",
                        node.id,
                        f"goal supports other nodes: {sorted(e.src for e in dependents)}",
                    )
                )
        return violations

    def _find_support_cycle(self) -> Optional[str]:
        # Kahn's algorithm over the acyclic-relation subgraph; any node left
        # after peeling sits on a cycle.
        indeg: dict[str, int] = {n: 0 for n in self.nodes}
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in self.edges:
            if e.relation in ACYCLIC_RELATIONS and e.src in self.nodes and e.dst in self.nodes:
                adj[e.src].append(e.dst)
                indeg[e.dst] += 1
        queue = [n for n, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            n = queue.pop()
            seen += 1
            for m in adj[n]:
                indeg[m] -= 1
                if indeg[m] == 0:
                    queue.append(m)
        if seen == len(self.nodes):
            return None
        return sorted(n for n, d in indeg.items() if d > 0)[0]

    # -- merge & serialization ---------------------------------------------

    def merge(self, other: "ProvGraph") -> "ProvGraph":
        """Union of two graphs; identical nodes/edges/appraisals deduplicate."""
        out = ProvGraph()
        for node in self.nodes.values():
            out.add_node(node)
        for node in other.nodes.values():
            if node.id in out.nodes:
                if out.nodes[node.id] != node:
                    raise DuplicateId(
                        f"merge conflict: node {node.id} differs between graphs"
                    )
                continue
            out.add_node(node)
        for edge in list(self.edges) + list(other.edges):
            out.add_edge(edge, check_cycle=False)
        seen_appraisals = set()
        for a in list(self.appraisals) + list(other.appraisals):
            key = (a.appraiser, a.subject, a.confidence, a.assumptions, a.disciplines)
            if key in seen_appraisals:
                continue
            seen_appraisals.add(key)
            out.add_appraisal(a)
        return out

    def to_dict(self) -> dict:
        return {
            "nodes": [n.to_dict() for n in self.nodes.values()],
            "edges": [e.to_dict() for e in self.edges],
            "appraisals": [a.to_dict() for a in self.appraisals],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProvGraph":
        g = cls()
        for nd in d.get("nodes", ()):
            g.add_node(ProvNode.from_dict(nd))
        for ed in d.get("edges", ()):
            g.add_edge(ProvEdge.from_dict(ed), check_cycle=False)
        for ad in d.get("appraisals", ()):
            g.add_appraisal(Appraisal.from_dict(ad))
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProvGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and set(self.edges) == set(other.edges)
            and self.appraisals == other.appraisals
        )


def dumps(graph: ProvGraph, indent: Optional[int] = 2) -> str:
    return json.dumps(graph.to_dict(), indent=indent, sort_keys=True)


def loads(text: str) -> ProvGraph:
    return ProvGraph.from_dict(json.loads(text))
