"""Total-order HTN planner that records the dependencies of every decision.

Planning decomposes each task in order, trying methods in declared order and
precondition bindings in state insertion order, backtracking on failure. The
search is deterministic: identical inputs produce identical plans.

While searching, the planner records a causal link for every precondition it
checks (for actions and for methods), tracing the condition back to the
initial fact, prior action effect, or axiom chain that established it. The
returned plan tree carries the decomposition structure, the leaf actions in
execution order, the causal links, and the model links (which operator or
method each decision came from).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .logic import (
    ActionEffect,
    Axiom,
    Establisher,
    InitialFact,
    Literal,
    State,
    _SearchFlags,
    _axioms_by_pred,
    _prove_conj,
    establisher_from_dict,
    establisher_to_dict,
    parse_literal,
    unify,
)

DEFAULT_DEPTH_BOUND = 64


class PlanningError(Exception):
    pass


class DomainError(PlanningError):
    pass


class Unsolvable(PlanningError):
    pass


class DepthExceeded(PlanningError):
    pass


class UnknownSource(PlanningError):
    pass


@dataclass(frozen=True)
class Operator:
    name: str
    parameters: tuple
    preconditions: tuple
    add: tuple
    delete: tuple


@dataclass(frozen=True)
class Method:
    id: str
    task: Literal
    preconditions: tuple
    subtasks: tuple


@dataclass(frozen=True)
class SourceDecl:
    id: str
    label: str = ""
    disciplines: tuple = ()


class Domain:
    def __init__(
        self,
        operators: Iterable[Operator] = (),
        methods: Iterable[Method] = (),
        axioms: Iterable[Axiom] = (),
    ) -> None:
        self.operators: dict[str, Operator] = {}
        for op in operators:
            if op.name in self.operators:
                raise DomainError(f"duplicate operator name: {op.name}")
            self.operators[op.name] = op
        self.methods: list[Method] = list(methods)
        seen = set()
        for m in self.methods:
            if m.id in seen:
                raise DomainError(f"duplicate method id: {m.id}")
            seen.add(m.id)
        self.axioms: list[Axiom] = list(axioms)
        self._axiom_table = _axioms_by_pred(self.axioms)
        self._validate()

    def _validate(self) -> None:
        for op in self.operators.values():
            scope = set(op.parameters)
            for pre in op.preconditions:
                scope |= pre.variables()
            for lit in (*op.add, *op.delete):
                loose = lit.variables() - scope
                if loose:
                    raise DomainError(
                        f"operator {op.name}: effect variables {sorted(loose)} "
                        "not bound by parameters or preconditions"
                    )
        for ax in self.axioms:
            scope = ax.head.variables()
            for lit in ax.body:
                scope |= lit.variables()
            loose = ax.head.variables() - scope
            if loose:
                raise DomainError(f"axiom {ax.id}: unbound head variables {sorted(loose)}")

    def methods_for(self, task: Literal) -> list[Method]:
        return [
            m
            for m in self.methods
            if m.task.pred == task.pred and len(m.task.args) == len(task.args)
        ]

    def to_dict(self) -> dict:
        return {
            "operators": [
                {
                    "name": op.name,
                    "parameters": list(op.parameters),
                    "preconditions": [str(p) for p in op.preconditions],
                    "add": [str(a) for a in op.add],
                    "delete": [str(d) for d in op.delete],
                }
                for op in self.operators.values()
            ],
            "methods": [
                {
                    "id": m.id,
                    "task": str(m.task),
                    "preconditions": [str(p) for p in m.preconditions],
                    "subtasks": [str(s) for s in m.subtasks],
                }
                for m in self.methods
            ],
            "axioms": [
                {
                    "id": ax.id,
                    "head": str(ax.head),
                    "body": [str(b) for b in ax.body],
                }
                for ax in self.axioms
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Domain":
        operators = [
            Operator(
                name=o["name"],
                parameters=tuple(o.get("parameters", ())),
                preconditions=tuple(parse_literal(p) for p in o.get("preconditions", ())),
                add=tuple(parse_literal(a) for a in o.get("add", ())),
                delete=tuple(parse_literal(x) for x in o.get("delete", ())),
            )
            for o in d.get("operators", ())
        ]
        methods = [
            Method(
                id=m["id"],
                task=parse_literal(m["task"]),
                preconditions=tuple(parse_literal(p) for p in m.get("preconditions", ())),
                subtasks=tuple(parse_literal(s) for s in m.get("subtasks", ())),
            )
            for m in d.get("methods", ())
        ]
        axioms = [
            Axiom(
                id=a["id"],
                head=parse_literal(a["head"]),
                body=tuple(parse_literal(b) for b in a.get("body", ())),
            )
            for a in d.get("axioms", ())
        ]
        return cls(operators, methods, axioms)


class Problem:
    """Initial state (facts optionally annotated with a source), ordered tasks,
    declared information sources and agents, and optional goal literals."""

    def __init__(
        self,
        facts: Iterable[tuple[Literal, Optional[str]]] = (),
        tasks: Iterable[Literal] = (),
        sources: Iterable[SourceDecl] = (),
        agents: Iterable[str] = (),
        goals: Iterable[Literal] = (),
    ) -> None:
        self.facts = list(facts)
        self.tasks = tuple(tasks)
        self.sources = {s.id: s for s in sources}
        self.agents = tuple(agents)
        self.goals = tuple(goals)
        for lit, source in self.facts:
            if source is not None and source not in self.sources:
                raise UnknownSource(f"fact {lit} cites undeclared source {source!r}")

    def initial_state(self) -> State:
        return State((lit, InitialFact(lit, source)) for lit, source in self.facts)

    def to_dict(self) -> dict:
        return {
            "state": [
                {"literal": str(lit), "source": source} if source else str(lit)
                for lit, source in self.facts
            ],
            "tasks": [str(t) for t in self.tasks],
            "goals": [str(g) for g in self.goals],
            "sources": [
                {"id": s.id, "label": s.label, "disciplines": list(s.disciplines)}
                for s in self.sources.values()
            ],
            "agents": list(self.agents),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Problem":
        facts = []
        for entry in d.get("state", ()):
            if isinstance(entry, str):
                facts.append((parse_literal(entry), None))
            else:
                facts.append((parse_literal(entry["literal"]), entry.get("source")))
        sources = [
            SourceDecl(
                id=s["id"],
                label=s.get("label", s["id"]),
                disciplines=tuple(s.get("disciplines", ())),
            )
            for s in d.get("sources", ())
        ]
        agents = [a if isinstance(a, str) else a["id"] for a in d.get("agents", ())]
        return cls(
            facts=facts,
            tasks=[parse_literal(t) for t in d.get("tasks", ())],
            sources=sources,
            agents=agents,
            goals=[parse_literal(g) for g in d.get("goals", ())],
        )


# -- plan structure ------------------------------------------------------------


@dataclass(frozen=True)
class ActionInstance:
    step: int
    name: str
    args: tuple
    preconditions: tuple  # ground, including negations
    add: tuple
    delete: tuple

    @property
    def literal(self) -> Literal:
        return Literal(self.name, self.args)

    @property
    def operator(self) -> str:
        return self.name

    def __str__(self) -> str:
        return str(self.literal)


@dataclass(frozen=True)
class CausalLink:
    """Ties a consumed condition to whatever established it.

    ``consumer`` identifies an action step (``action:<step>``) or a method
    application (``method:<method id>:<ground task>``).
    """

    consumer: str
    condition: Literal
    establisher: Establisher

    @property
    def consumer_step(self) -> Optional[int]:
        if self.consumer.startswith("action:"):
            return int(self.consumer.split(":", 1)[1])
        return None


@dataclass(frozen=True)
class PlanNode:
    """Decomposition tree node; leaves carry the step index of their action."""

    task: Literal
    method_id: Optional[str] = None
    children: tuple = ()
    step: Optional[int] = None

    def is_leaf(self) -> bool:
        return self.step is not None


@dataclass
class PlanTree:
    root_tasks: tuple
    roots: tuple
    actions: tuple
    links: tuple

    def signature(self) -> tuple:
        return tuple(str(a.literal) for a in self.actions)

    def plan_key(self) -> str:
        payload = "|".join(self.signature()) + "//" + "|".join(
            str(t) for t in self.root_tasks
        )
        return hashlib.sha1(payload.encode()).hexdigest()[:8]

    def action_links(self, step: int) -> list[CausalLink]:
        key = f"action:{step}"
        return [l for l in self.links if l.consumer == key]

    def model_links(self) -> list[tuple[str, str]]:
        """(plan element, model component) pairs: actions to operators,
        decompositions to methods."""
        out = [(f"action:{a.step}", f"operator:{a.operator}") for a in self.actions]

        def walk(node: PlanNode) -> None:
            if node.method_id is not None:
                out.append((f"task:{node.task}", f"method:{node.method_id}"))
            for child in node.children:
                walk(child)

        for root in self.roots:
            walk(root)
        return out

    def to_dict(self) -> dict:
        def node_dict(node: PlanNode) -> dict:
            if node.is_leaf():
                return {"task": str(node.task), "step": node.step}
            return {
                "task": str(node.task),
                "method": node.method_id,
                "children": [node_dict(c) for c in node.children],
            }

        return {
            "root_tasks": [str(t) for t in self.root_tasks],
            "tree": [node_dict(r) for r in self.roots],
            "actions": [
                {
                    "step": a.step,
                    "name": a.name,
                    "args": list(a.args),
                    "preconditions": [str(p) for p in a.preconditions],
                    "add": [str(x) for x in a.add],
                    "delete": [str(x) for x in a.delete],
                }
                for a in self.actions
            ],
            "links": [
                {
                    "consumer": l.consumer,
                    "condition": str(l.condition),
                    "establisher": establisher_to_dict(l.establisher),
                }
                for l in self.links
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlanTree":
        def node_from(nd: dict) -> PlanNode:
            if "step" in nd:
                return PlanNode(task=parse_literal(nd["task"]), step=nd["step"])
            return PlanNode(
                task=parse_literal(nd["task"]),
                method_id=nd.get("method"),
                children=tuple(node_from(c) for c in nd.get("children", ())),
            )

        actions = tuple(
            ActionInstance(
                step=a["step"],
                name=a["name"],
                args=tuple(a["args"]),
                preconditions=tuple(parse_literal(p) for p in a.get("preconditions", ())),
                add=tuple(parse_literal(x) for x in a.get("add", ())),
                delete=tuple(parse_literal(x) for x in a.get("delete", ())),
            )
            for a in d.get("actions", ())
        )
        links = tuple(
            CausalLink(
                consumer=l["consumer"],
                condition=parse_literal(l["condition"]),
                establisher=establisher_from_dict(l["establisher"]),
            )
            for l in d.get("links", ())
        )
        return cls(
            root_tasks=tuple(parse_literal(t) for t in d.get("root_tasks", ())),
            roots=tuple(node_from(n) for n in d.get("tree", ())),
            actions=actions,
            links=links,
        )


# -- search --------------------------------------------------------------------


def _ground_or_fail(lit: Literal, context: str) -> Literal:
    if not lit.is_ground():
        raise PlanningError(f"{context}: task not ground: {lit}")
    return lit


def _plan_candidates(
    domain: Domain, problem: Problem, depth_bound: int, flags: _SearchFlags
) -> Iterator[PlanTree]:
    """Enumerate every decomposition of the task list, deepest-first."""
    state = problem.initial_state()

    def solve_seq(tasks, state, step0, depth):
        if not tasks:
            yield (), (), (), state
            return
        for node, acts, links, st1 in solve_one(tasks[0], state, step0, depth):
            for nodes_r, acts_r, links_r, st2 in solve_seq(
                tasks[1:], st1, step0 + len(acts), depth
            ):
                yield (node, *nodes_r), acts + acts_r, links + links_r, st2

    def solve_one(task, state, step0, depth):
        task = _ground_or_fail(task, "decomposition")
        if task.pred in domain.operators:
            yield from apply_operator(task, state, step0)
            return
        methods = domain.methods_for(task)
        if depth <= 0:
            flags.depth_hit = True
            return
        for method in methods:
            base = unify(method.task, task)
            if base is None:
                continue
            consumer = f"method:{method.id}:{task}"
            for binding, traces in _prove_conj(
                method.preconditions, base, state, domain._axiom_table, depth_bound, flags
            ):
                mlinks = tuple(
                    CausalLink(consumer, pre.substitute(binding), trace)
                    for pre, trace in zip(method.preconditions, traces)
                )
                subtasks = [s.substitute(binding) for s in method.subtasks]
                for nodes, acts, links, st in solve_seq(subtasks, state, step0, depth - 1):
                    yield (
                        PlanNode(task=task, method_id=method.id, children=nodes),
                        acts,
                        mlinks + links,
                        st,
                    )

    def apply_operator(task, state, step0):
        op = domain.operators[task.pred]
        if len(op.parameters) != len(task.args):
            raise PlanningError(f"arity mismatch for operator {op.name}: {task}")
        base = dict(zip(op.parameters, task.args))
        consumer = f"action:{step0}"
        for binding, traces in _prove_conj(
            op.preconditions, base, state, domain._axiom_table, depth_bound, flags
        ):
            pres = tuple(p.substitute(binding) for p in op.preconditions)
            adds = tuple(a.substitute(binding) for a in op.add)
            dels = tuple(x.substitute(binding) for x in op.delete)
            action = ActionInstance(step0, op.name, task.args, pres, adds, dels)
            links = tuple(
                CausalLink(consumer, pre, trace) for pre, trace in zip(pres, traces)
            )
            st = state.copy()
            for lit in dels:
                st.remove(lit)
            for lit in adds:
                st.add(lit, ActionEffect(lit, step0))
            yield PlanNode(task=task, step=step0), (action,), links, st

    for nodes, acts, links, _ in solve_seq(list(problem.tasks), state, 0, depth_bound):
        yield PlanTree(
            root_tasks=problem.tasks, roots=nodes, actions=acts, links=links
        )


def seek_plan(
    domain: Domain, problem: Problem, depth_bound: int = DEFAULT_DEPTH_BOUND
) -> PlanTree:
    """First plan found by depth-first search with backtracking.

    Raises Unsolvable when the search space is exhausted, or DepthExceeded
    when it is exhausted but the depth bound pruned at least one branch (so
    unsolvability cannot be certified).
    """
    flags = _SearchFlags()
    for plan in _plan_candidates(domain, problem, depth_bound, flags):
        return plan
    if flags.depth_hit:
        raise DepthExceeded(f"no plan within depth bound {depth_bound}")
    raise Unsolvable(f"no plan for tasks: {[str(t) for t in problem.tasks]}")


def all_plans(
    domain: Domain,
    problem: Problem,
    limit: int = 16,
    depth_bound: int = DEFAULT_DEPTH_BOUND,
) -> list[PlanTree]:
    """Distinct plans (by action sequence) via exhaustive backtracking.

    Returns an empty list for unsolvable problems; raises DepthExceeded only
    when nothing was found and the bound pruned a branch.
    """
    if limit < 1:
        raise PlanningError("limit must be >= 1")
    flags = _SearchFlags()
    plans: list[PlanTree] = []
    seen: set[tuple] = set()
    for plan in _plan_candidates(domain, problem, depth_bound, flags):
        sig = plan.signature()
        if sig in seen:
            continue
        seen.add(sig)
        plans.append(plan)
        if len(plans) >= limit:
            break
    if not plans and flags.depth_hit:
        raise DepthExceeded(f"no plan within depth bound {depth_bound}")
    return plans


# -- replay (executability oracle) ----------------------------------------------


@dataclass(frozen=True)
class FirstFailure:
    index: int
    literal: Literal

    def __str__(self) -> str:
        return f"action {self.index}: unsatisfied {self.literal}"


def replay(
    domain: Domain,
    problem: Problem,
    plan_actions: Iterable[ActionInstance],
    depth_bound: int = DEFAULT_DEPTH_BOUND,
) -> Optional[FirstFailure]:
    """Simulate the actions in order; None means every precondition held.

    Preconditions are re-proved against the simulated state (axioms included),
    independently of the bindings the planner chose, so this is an honest
    executability check for any ground action sequence.
    """
    state = problem.initial_state()
    flags = _SearchFlags()
    for index, action in enumerate(plan_actions):
        op = domain.operators.get(action.name)
        if op is None:
            return FirstFailure(index, action.literal)
        binding = dict(zip(op.parameters, action.args))
        solved = None
        for b, _ in _prove_conj(
            op.preconditions, binding, state, domain._axiom_table, depth_bound, flags
        ):
            solved = b
            break
        if solved is None:
            return FirstFailure(index, _first_unsatisfied(op, binding, state, domain, depth_bound))
        for lit in (x.substitute(solved) for x in op.delete):
            state.remove(lit)
        for lit in (a.substitute(solved) for a in op.add):
            state.add(lit, ActionEffect(lit, index))
    return None


def _first_unsatisfied(op, binding, state, domain, depth_bound) -> Literal:
    """Greedy walk to name the first precondition with no proof."""
    flags = _SearchFlags()
    b = dict(binding)
    for pre in op.preconditions:
        found = None
        for b2, _ in _prove_conj([pre], b, state, domain._axiom_table, depth_bound, flags):
            found = b2
            break
        if found is None:
            return pre.substitute(b)
        b = found
    return op.preconditions[-1].substitute(b) if op.preconditions else Literal("true")


def load_domain(path: str) -> Domain:
    with open(path, "r", encoding="utf-8") as fh:
        return Domain.from_dict(json.load(fh))


def load_problem(path: str) -> Problem:
    with open(path, "r", encoding="utf-8") as fh:
        return Problem.from_dict(json.load(fh))
