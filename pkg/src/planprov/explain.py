"""High-level question API: structured answers built on the analysis engines.

This layer composes the environments and dynamics modules into renderable
answers; every node set in an Explanation is reproducible by direct calls to
those modules, and serialization is deterministic so the CLI and the HTTP
service return byte-identical JSON for the same question.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import dynamics, environments, model
from .dynamics import IN, Overlay


class NotAnActivity(Exception):
    pass


class NotAGoal(Exception):
    pass


@dataclass
class Explanation:
    kind: str
    focus: tuple
    verdicts: dict = field(default_factory=dict)
    status: Optional[str] = None
    confidence: Optional[float] = None
    via: Optional[list] = None
    emphasized: Optional[list] = None
    impacted: Optional[list] = None
    lost_support: Optional[list] = None
    degraded: Optional[dict] = None
    upstream: Optional[list] = None
    downstream: Optional[list] = None
    goals: Optional[list] = None
    refuted: Optional[list] = None
    threshold: Optional[float] = None
    necessary: Optional[dict] = None
    sufficient: Optional[list] = None
    surviving_environments: Optional[list] = None
    method: Optional[str] = None
    reasons: Optional[list] = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "focus": sorted(self.focus)}
        for name in (
            "verdicts",
            "status",
            "confidence",
            "via",
            "emphasized",
            "impacted",
            "lost_support",
            "degraded",
            "upstream",
            "downstream",
            "goals",
            "refuted",
            "threshold",
            "necessary",
            "sufficient",
            "surviving_environments",
            "method",
            "reasons",
        ):
            value = getattr(self, name)
            if value is None or (name == "verdicts" and not value):
                continue
            out[name] = value
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _statuses(graph, overlay):
    status = dynamics.support_fixpoint(graph, overlay)
    confidence = dynamics.propagate_confidence(graph, overlay, status)
    return status, confidence


def why_action(graph: model.ProvGraph, overlay: Overlay, action_id: str) -> Explanation:
    """Upstream support, downstream dependents, and the goals an action serves."""
    node = graph.nodes.get(action_id)
    if node is None or node.kind != model.ACTIVITY:
        raise NotAnActivity(f"not an activity: {action_id}")
    status, confidence = _statuses(graph, overlay)
    upstream = dynamics.pertinence(graph, overlay, action_id)
    downstream = dynamics.impact(graph, overlay, action_id)
    reached = dynamics.dependents_closure(graph, [action_id])
    goals = sorted(
        n for n in reached if graph.nodes[n].subtype == model.GOAL
    )
    verdicts = {"supported": status[action_id] == IN}
    explanation = Explanation(
        kind="why_action",
        focus=(action_id,),
        verdicts=verdicts,
        status=status[action_id],
        confidence=confidence.get(action_id),
        upstream=sorted(upstream - {action_id}),
        downstream=sorted(downstream),
        goals=goals,
    )
    if status[action_id] != IN:
        explanation.reasons = ["unsupported under current overlay"]
    return explanation


def reliability(graph: model.ProvGraph, overlay: Overlay, m: str) -> Explanation:
    """Propagated confidence at m, plus the alternative that delivers the max."""
    if m not in graph:
        raise dynamics.UnknownNode(f"not in graph: {m}")
    rules = environments.support_rules(graph)
    status = dynamics.support_fixpoint(graph, overlay, rules)
    confidence = dynamics.propagate_confidence(graph, overlay, status, rules)
    via: Optional[list] = None
    if status[m] == IN and rules[m]:
        best_value, best_alt = None, None
        for alt in rules[m]:
            if not all(status[x] == IN for x in alt):
                continue
            value = min(confidence[x] for x in alt) if alt else 1.0
            if best_value is None or value > best_value:
                best_value, best_alt = value, alt
        via = sorted(best_alt) if best_alt is not None else []
    elif status[m] == IN:
        via = []
    return Explanation(
        kind="reliability",
        focus=(m,),
        status=status[m],
        confidence=confidence.get(m),
        via=via,
    )


def sensitivity(
    graph: model.ProvGraph,
    labels: dict,
    m: str,
    refuted: Iterable[str],
    overlay: Optional[Overlay] = None,
) -> Explanation:
    """Are the refuted nodes necessary for m?

    Answered from precomputed labels when the refuted set is all roots and
    the label did not overflow; otherwise by differencing support fixpoints.
    """
    refuted_set = frozenset(refuted)
    roots = graph.roots()
    use_labels = refuted_set <= roots and m in labels and not labels[m].overflow
    if use_labels:
        surviving = environments.contract(labels[m], refuted_set)
        necessary = not surviving.environments
        return Explanation(
            kind="sensitivity",
            focus=(m,),
            refuted=sorted(refuted_set),
            verdicts={"necessary": necessary},
            surviving_environments=[
                sorted(env)
                for env in sorted(
                    surviving.environments, key=lambda s: (len(s), tuple(sorted(s)))
                )
            ],
            method="labels",
        )
    base = overlay or Overlay()
    status = dynamics.support_fixpoint(graph, base.with_refuted(refuted_set))
    necessary = status[m] != IN
    return Explanation(
        kind="sensitivity",
        focus=(m,),
        refuted=sorted(refuted_set),
        verdicts={"necessary": necessary},
        method="fixpoint",
    )


def assumptions_for(graph: model.ProvGraph, labels: dict, m: str) -> Explanation:
    """Necessary and sufficient assumption sets for m, with the appraisal
    assumption strings carried by those nodes."""
    necessary_ids = sorted(environments.necessary_assumptions(labels, m))
    sufficient = [
        {
            "ids": sorted(env),
            "assumptions": environments.assumption_strings(graph, env),
        }
        for env in environments.sufficient_sets(labels, m)
    ]
    return Explanation(
        kind="assumptions",
        focus=(m,),
        necessary={
            "ids": necessary_ids,
            "assumptions": environments.assumption_strings(graph, necessary_ids),
        },
        sufficient=sufficient,
    )


def impact_analysis(
    graph: model.ProvGraph, overlay: Overlay, focus: Iterable[str]
) -> Explanation:
    """Where the focus has influenced the plan: everything that loses support
    or confidence if the focus is refuted."""
    focus_set = frozenset(focus)
    hit = dynamics.impact(graph, overlay, focus_set)
    status_before = dynamics.support_fixpoint(graph, overlay)
    conf_before = dynamics.propagate_confidence(graph, overlay, status_before)
    after = overlay.with_refuted(focus_set)
    status_after = dynamics.support_fixpoint(graph, after)
    conf_after = dynamics.propagate_confidence(graph, after, status_after)
    lost = sorted(n for n in hit if status_after[n] != IN)
    degraded = {
        n: [conf_before[n], conf_after[n]]
        for n in sorted(hit)
        if status_after[n] == IN
    }
    return Explanation(
        kind="impact",
        focus=tuple(sorted(focus_set)),
        impacted=sorted(hit),
        lost_support=lost,
        degraded=degraded,
    )


def pertinence_analysis(
    graph: model.ProvGraph, overlay: Overlay, focus: Iterable[str]
) -> Explanation:
    """What upstream information the focus relies on (hover emphasis set)."""
    focus_set = frozenset(focus)
    emphasized = dynamics.pertinence(graph, overlay, focus_set)
    return Explanation(
        kind="pertinence",
        focus=tuple(sorted(focus_set)),
        emphasized=sorted(emphasized),
    )


def replan_assessment(
    graph: model.ProvGraph,
    overlay: Overlay,
    goal: str,
    threshold: float = 0.0,
) -> Explanation:
    """Does the plan need revision? Yes when the goal lost support or its
    confidence fell below the threshold; the refutations and degraded
    alternatives are cited as the reason."""
    node = graph.nodes.get(goal)
    if node is None or node.kind != model.ENTITY or goal not in graph.sinks():
        raise NotAGoal(f"not a goal (sink entity): {goal}")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold out of range: {threshold}")
    status, confidence = _statuses(graph, overlay)
    goal_conf = confidence.get(goal)
    needs = status[goal] != IN or (goal_conf is not None and goal_conf < threshold)
    reasons = []
    if status[goal] != IN:
        reasons.append("goal has lost all support")
    elif goal_conf is not None and goal_conf < threshold:
        reasons.append(
            f"goal confidence {goal_conf:g} is below threshold {threshold:g}"
        )
    else:
        reasons.append("sufficient paths to the goal remain at acceptable confidence")
    if overlay.refuted:
        reasons.append("refuted: " + ", ".join(sorted(overlay.refuted)))
    return Explanation(
        kind="replan",
        focus=(goal,),
        verdicts={"needs_replan": needs},
        status=status[goal],
        confidence=goal_conf,
        threshold=threshold,
        refuted=sorted(overlay.refuted),
        reasons=reasons,
    )


def answer(
    graph: model.ProvGraph,
    overlay: Overlay,
    kind: str,
    focus: Iterable[str],
    threshold: float = 0.0,
    labels: Optional[dict] = None,
) -> Explanation:
    """Dispatch a question by kind; shared by the CLI and the HTTP service."""
    focus = list(focus)
    if not focus:
        raise ValueError("focus required")
    if kind == "reliability":
        return reliability(graph, overlay, focus[0])
    if kind == "sensitivity":
        if labels is None:
            labels = environments.compute_labels(graph)
        return sensitivity(graph, labels, focus[0], overlay.refuted)
    if kind == "impact":
        return impact_analysis(graph, overlay, focus)
    if kind == "pertinence":
        return pertinence_analysis(graph, overlay, focus)
    if kind == "assumptions":
        if labels is None:
            labels = environments.compute_labels(graph)
        return assumptions_for(graph, labels, focus[0])
    if kind == "replan":
        return replan_assessment(graph, overlay, focus[0], threshold)
    if kind == "why_action":
        return why_action(graph, overlay, focus[0])
    raise ValueError(f"unknown question kind: {kind!r}")
