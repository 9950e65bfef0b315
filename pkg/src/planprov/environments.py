"""Assumption environments: minimal sufficient root sets for every node.

For each node m the label E(m) is a set of environments, each a minimal set
of root assumptions (sources, agents, unsourced beliefs) sufficient to derive
m. Labels are computed in one backward pass over the support DAG:

- an Activity is supported conjunctively by everything it Used plus its
  associated agents (refuting the agent kills the activity);
- an Entity is supported disjunctively: one alternative per generating
  activity, plus one conjunctive alternative over all its derived-from
  parents (generation and derivation are independent establishment routes);
- Agents and nodes with no support edges are roots, labelled {{self}}.

Labels larger than the cap are truncated to the cap smallest environments and
flagged: a truncated label is still sound (every kept environment suffices)
but incomplete, and the flag is sticky downstream, so necessity queries must
refuse to answer from an overflowed label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import model

DEFAULT_CAP = 256


class CyclicSupport(Exception):
    pass


class OverflowUnsound(Exception):
    """The label was truncated, so emptiness-under-contraction proves nothing."""


@dataclass(frozen=True)
class Label:
    environments: frozenset
    overflow: bool = False

    def __iter__(self):
        return iter(self.environments)

    def __len__(self) -> int:
        return len(self.environments)


class LabelMap(dict):
    """node id -> Label, plus bookkeeping from the single-pass traversal."""

    def __init__(self, *args, cap: int = DEFAULT_CAP, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.cap = cap
        self.evaluations = 0


def support_rules(graph: model.ProvGraph) -> dict:
    """node id -> tuple of alternatives; each alternative is a conjunctive
    frozenset of supporting node ids. An empty tuple marks a root."""
    rules: dict[str, tuple] = {}
    for node in graph.nodes.values():
        if node.kind == model.AGENT:
            rules[node.id] = ()
        elif node.kind == model.ACTIVITY:
            parents = sorted(
                {e.dst for e in graph.out_edges(node.id, model.USED)}
                | {e.dst for e in graph.out_edges(node.id, model.WAS_ASSOCIATED_WITH)}
            )
            rules[node.id] = (frozenset(parents),) if parents else ()
        else:
            alts = [
                frozenset({e.dst})
                for e in sorted(
                    graph.out_edges(node.id, model.WAS_GENERATED_BY),
                    key=lambda e: e.dst,
                )
            ]
            derived = sorted(
                {e.dst for e in graph.out_edges(node.id, model.WAS_DERIVED_FROM)}
            )
            if derived:
                alts.append(frozenset(derived))
            rules[node.id] = tuple(alts)
    return rules


def support_order(rules: dict) -> list:
    """Topological order of the support DAG, supporters before dependents."""
    children: dict[str, list] = {n: [] for n in rules}
    pending = {}
    for node, alts in rules.items():
        parents = set().union(*alts) if alts else set()
        pending[node] = len(parents)
        for p in parents:
            children.setdefault(p, []).append(node)
    queue = sorted(n for n, count in pending.items() if count == 0)
    order = []
    while queue:
        n = queue.pop()
        order.append(n)
        for child in children.get(n, ()):
            pending[child] -= 1
            if pending[child] == 0:
                queue.append(child)
    if len(order) != len(rules):
        raise CyclicSupport("support subgraph contains a cycle")
    return order


def _minimize(envs: Iterable[frozenset]) -> list:
    """Antichain of the given sets: drop duplicates and supersets."""
    ordered = sorted(set(envs), key=lambda s: (len(s), tuple(sorted(s))))
    kept: list[frozenset] = []
    for candidate in ordered:
        if not any(k <= candidate for k in kept):
            kept.append(candidate)
    return kept


def compute_labels(graph: model.ProvGraph, cap: int = DEFAULT_CAP) -> LabelMap:
    """Label every node in one memoized backward traversal."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    rules = support_rules(graph)
    labels = LabelMap(cap=cap)
    for node in support_order(rules):
        labels.evaluations += 1
        alts = rules[node]
        if not alts:
            labels[node] = Label(frozenset({frozenset({node})}))
            continue
        overflow = False
        combined: list[frozenset] = []
        for alt in alts:
            partial = [frozenset()]
            for member in sorted(alt):
                mlabel = labels[member]
                overflow = overflow or mlabel.overflow
                partial = _minimize(
                    env | menv for env in partial for menv in mlabel.environments
                )
            combined.extend(partial)
        envs = _minimize(combined)
        if len(envs) > cap:
            envs = sorted(envs, key=lambda s: (len(s), tuple(sorted(s))))[:cap]
            overflow = True
        labels[node] = Label(frozenset(envs), overflow)
    return labels


def contract(label: Label, refuted: Iterable[str]) -> Label:
    """Environments that survive refuting ``refuted``: {S in E : N ∩ S = ∅}."""
    n = frozenset(refuted)
    return Label(
        frozenset(s for s in label.environments if not (n & s)), label.overflow
    )


def is_necessary(labels: dict, m: str, refuted: Iterable[str]) -> bool:
    """True iff refuting the given nodes leaves no environment for m."""
    label = labels[m]
    if label.overflow:
        raise OverflowUnsound(
            f"label for {m} overflowed; fall back to the support fixpoint"
        )
    return not contract(label, refuted).environments


def necessary_assumptions(labels: dict, m: str) -> frozenset:
    """Assumptions common to every environment of m."""
    label = labels[m]
    if label.overflow:
        raise OverflowUnsound(f"label for {m} overflowed")
    envs = list(label.environments)
    if not envs:
        return frozenset()
    out = set(envs[0])
    for env in envs[1:]:
        out &= env
    return frozenset(out)


def sufficient_sets(labels: dict, m: str) -> tuple:
    """The environments of m, each sufficient on its own, sorted for display."""
    label = labels[m]
    if label.overflow:
        raise OverflowUnsound(f"label for {m} overflowed")
    return tuple(sorted(label.environments, key=lambda s: (len(s), tuple(sorted(s)))))


def assumption_strings(graph: model.ProvGraph, node_ids: Iterable[str]) -> list:
    """Appraisal assumption strings carried by the given nodes, sorted."""
    out = set()
    for node_id in node_ids:
        for appraisal in graph.appraisals_for(node_id):
            out.update(appraisal.assumptions)
    return sorted(out)


def labels_to_dict(labels: dict) -> dict:
    """JSON-friendly dump: node -> sorted list of sorted id lists."""
    return {
        node: {
            "environments": [sorted(env) for env in sorted(
                label.environments, key=lambda s: (len(s), tuple(sorted(s)))
            )],
            "overflow": label.overflow,
        }
        for node, label in sorted(labels.items())
    }
