"""Converts plan trees plus problem annotations into a merged PROV graph.

The mapping rules:

- every leaf action instance becomes a Task Activity (marked planned, since
  these activities have not occurred and may never occur);
- each acting agent becomes an Actor Agent, linked WasAssociatedWith; the
  acting agent of an action is its first argument naming a declared agent,
  with a synthetic "planner" Actor as the fallback so no Activity is left
  unattributed;
- every ground belief consumed or produced becomes a Belief Entity,
  deduplicated by literal: consumers link Used, producers link the belief
  WasGeneratedBy the producing Activity;
- annotated initial facts link WasDerivedFrom their InformationSource Entity;
  unsourced initial facts stand as root assumptions;
- axiom-derived conditions expand into intermediate Belief Entities linked
  WasDerivedFrom each antecedent belief;
- declared goal literals merge into one Goal Entity per literal, with a
  WasGeneratedBy edge from every activity (in any plan) that achieves it;
- consecutive actions of one plan are chained WasInformedBy for display
  ordering only.

Negative-condition links and method-precondition links stay in the plan tree;
they never become Used edges (only action-consumer positive conditions carry
support semantics).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from . import model
from .htn import PlanTree, Problem, UnknownSource
from .logic import ActionEffect, Establisher, InitialFact, Literal

PLANNER_AGENT = "planner"


class MappingError(Exception):
    pass


class UnreplayablePlan(MappingError):
    pass


@dataclass
class MappingReport:
    plans_mapped: int = 0
    nodes_by_subtype: dict = field(default_factory=dict)
    edges_by_relation: dict = field(default_factory=dict)
    unsourced_facts: list = field(default_factory=list)
    goal_entities: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "plans_mapped": self.plans_mapped,
            "nodes_by_subtype": dict(self.nodes_by_subtype),
            "edges_by_relation": dict(self.edges_by_relation),
            "unsourced_facts": list(self.unsourced_facts),
            "goal_entities": list(self.goal_entities),
        }


def belief_id(literal: Literal) -> str:
    return f"belief:{literal}"


def goal_id(literal: Literal) -> str:
    return f"goal:{literal}"


def activity_id(plan_key: str, step: int, name: str) -> str:
    return f"task:{plan_key}:{step}:{name}"


class _Builder:
    """Tracks created-node/edge counts while assembling the graph."""

    def __init__(self) -> None:
        self.graph = model.ProvGraph()
        self.report = MappingReport()

    def node(self, node: model.ProvNode) -> str:
        if node.id not in self.graph:
            self.graph.add_node(node)
            tally = self.report.nodes_by_subtype
            tally[node.subtype] = tally.get(node.subtype, 0) + 1
        return node.id

    def edge(self, src: str, dst: str, relation: str) -> None:
        e = model.ProvEdge(src, dst, relation)
        if e not in self.graph._edge_set:
            self.graph.add_edge(e, check_cycle=False)
            tally = self.report.edges_by_relation
            tally[relation] = tally.get(relation, 0) + 1


def plan_to_prov(
    plans: Sequence[PlanTree],
    problem: Problem,
    appraisals: Iterable[Union[model.Appraisal, dict]] = (),
) -> tuple[model.ProvGraph, MappingReport]:
    """Map one or more plans into a single merged, validated PROV graph."""
    unique_plans: list[PlanTree] = []
    seen = set()
    for plan in plans:
        sig = plan.signature()
        if sig not in seen:
            seen.add(sig)
            unique_plans.append(plan)
    for plan in unique_plans:
        _check_replayable(plan, problem)

    b = _Builder()
    b.report.plans_mapped = len(unique_plans)

    for agent in problem.agents:
        b.node(model.ProvNode(agent, model.AGENT, model.ACTOR, label=agent))
    for source in problem.sources.values():
        b.node(
            model.ProvNode(
                source.id,
                model.ENTITY,
                model.INFORMATION_SOURCE,
                label=source.label or source.id,
                attributes={"disciplines": list(source.disciplines)},
            )
        )
    for lit, source in problem.facts:
        bid = b.node(_belief_node(lit))
        if source is None:
            b.report.unsourced_facts.append(str(lit))
        else:
            b.edge(bid, source, model.WAS_DERIVED_FROM)

    for plan in unique_plans:
        _map_plan(b, plan, problem)

    for goal in problem.goals:
        gid = b.node(
            model.ProvNode(
                goal_id(goal),
                model.ENTITY,
                model.GOAL,
                label=str(goal),
                attributes={"predicate": goal.pred, "args": list(goal.args)},
            )
        )
        if gid not in b.report.goal_entities:
            b.report.goal_entities.append(gid)
        for plan in unique_plans:
            key = plan.plan_key()
            for action in plan.actions:
                if goal in action.add:
                    b.edge(gid, activity_id(key, action.step, action.name), model.WAS_GENERATED_BY)

    graph = b.graph
    for appraisal in appraisals:
        if isinstance(appraisal, dict):
            appraisal = model.Appraisal.from_dict(appraisal)
        attach_appraisal(graph, appraisal)

    violations = graph.validate()
    if violations:
        raise MappingError(f"mapping produced an invalid graph: {violations[:3]}")
    return graph, b.report


def attach_appraisal(graph: model.ProvGraph, appraisal: model.Appraisal) -> None:
    """Append an appraisal; later appraisals on a subject shadow earlier
    confidences (last write wins)."""
    graph.add_appraisal(appraisal)


def _belief_node(lit: Literal, extra: Optional[dict] = None) -> model.ProvNode:
    attrs = {"predicate": lit.pred, "args": list(lit.args)}
    if extra:
        attrs.update(extra)
    return model.ProvNode(
        belief_id(lit), model.ENTITY, model.BELIEF, label=str(lit), attributes=attrs
    )


def _map_plan(b: _Builder, plan: PlanTree, problem: Problem) -> None:
    key = plan.plan_key()
    act_ids = {}
    for action in plan.actions:
        agent = _acting_agent(action.args, problem)
        if agent == PLANNER_AGENT:
            b.node(model.ProvNode(PLANNER_AGENT, model.AGENT, model.ACTOR, label=PLANNER_AGENT))
        aid = b.node(
            model.ProvNode(
                activity_id(key, action.step, action.name),
                model.ACTIVITY,
                model.TASK,
                label=str(action.literal),
                attributes={
                    "operator": action.operator,
                    "step": action.step,
                    "agent": agent,
                    "plan": key,
                    "planned": True,
                },
            )
        )
        act_ids[action.step] = aid
        b.edge(aid, agent, model.WAS_ASSOCIATED_WITH)

    for prev, nxt in zip(plan.actions, plan.actions[1:]):
        b.edge(act_ids[nxt.step], act_ids[prev.step], model.WAS_INFORMED_BY)

    for link in plan.links:
        step = link.consumer_step
        if step is None or link.condition.neg:
            continue
        bid = _materialize(b, link.establisher, key, act_ids, problem)
        b.edge(act_ids[step], bid, model.USED)


def _materialize(
    b: _Builder,
    est: Establisher,
    plan_key: str,
    act_ids: dict,
    problem: Problem,
) -> str:
    if isinstance(est, InitialFact):
        if est.source is not None and est.source not in problem.sources:
            raise UnknownSource(f"establisher cites undeclared source {est.source!r}")
        bid = b.node(_belief_node(est.literal))
        if est.source is not None:
            b.edge(bid, est.source, model.WAS_DERIVED_FROM)
        return bid
    if isinstance(est, ActionEffect):
        if est.producer not in act_ids:
            raise UnreplayablePlan(
                f"effect establisher cites missing action step {est.producer}"
            )
        bid = b.node(_belief_node(est.literal))
        b.edge(bid, act_ids[est.producer], model.WAS_GENERATED_BY)
        return bid
    bid = b.node(_belief_node(est.literal, {"axiom": est.axiom_id}))
    for antecedent in est.antecedents:
        child = _materialize(b, antecedent, plan_key, act_ids, problem)
        b.edge(bid, child, model.WAS_DERIVED_FROM)
    return bid


def _acting_agent(args: tuple, problem: Problem) -> str:
    declared = set(problem.agents)
    for arg in args:
        if arg in declared:
            return arg
    return PLANNER_AGENT


def _check_replayable(plan: PlanTree, problem: Problem) -> None:
    """Verify the recorded links replay: establishers hold when consumed."""
    state = {lit for lit, _ in problem.facts}
    actions = sorted(plan.actions, key=lambda a: a.step)

    def holds(est: Establisher, consumer_step: int) -> bool:
        if isinstance(est, InitialFact):
            if est.literal.neg:
                return est.literal.positive() not in state
            return est.literal in state
        if isinstance(est, ActionEffect):
            return est.producer < consumer_step and est.literal in state
        return all(holds(a, consumer_step) for a in est.antecedents)

    for action in actions:
        for link in plan.action_links(action.step):
            if not holds(link.establisher, action.step):
                raise UnreplayablePlan(
                    f"link for {link.condition} does not replay at step {action.step}"
                )
        state -= set(action.delete)
        state |= set(action.add)
