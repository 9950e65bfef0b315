"""Ground literals, unification, and backward chaining over Horn axioms.

Literal syntax is ``pred(arg1,arg2,...)`` with variables prefixed ``?``.
Negation (``not pred(...)``) is allowed only in preconditions and queries and
is evaluated by negation-as-failure against the current state; the negated
literal must be ground by the time it is checked.

Every successful proof carries a derivation trace that bottoms out in the
facts that established it, so callers can record where each condition came
from: an initial fact (optionally annotated with an information source), the
effect of an earlier action, or a chain of axiom applications.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Optional, Union

_LITERAL_RE = re.compile(r"^\s*([A-Za-z_][\w-]*)\s*(?:\((.*)\))?\s*$")


class LogicError(Exception):
    pass


@dataclass(frozen=True)
class Literal:
    pred: str
    args: tuple = ()
    neg: bool = False

    def __str__(self) -> str:
        body = f"{self.pred}({','.join(self.args)})" if self.args else self.pred
        return f"not {body}" if self.neg else body

    def positive(self) -> "Literal":
        return replace(self, neg=False) if self.neg else self

    def negated(self) -> "Literal":
        return replace(self, neg=not self.neg)

    def is_ground(self) -> bool:
        return not any(is_var(a) for a in self.args)

    def variables(self) -> set[str]:
        return {a for a in self.args if is_var(a)}

    def substitute(self, binding: dict) -> "Literal":
        if not self.args:
            return self
        return replace(self, args=tuple(_walk(a, binding) for a in self.args))


def is_var(term: str) -> bool:
    return term.startswith("?")


def parse_literal(text: str) -> Literal:
    s = text.strip()
    neg = False
    if s.startswith("not "):
        neg = True
        s = s[4:].strip()
    m = _LITERAL_RE.match(s)
    if m is None:
        raise LogicError(f"cannot parse literal: {text!r}")
    pred, argtext = m.group(1), m.group(2)
    if argtext is None or argtext.strip() == "":
        return Literal(pred, (), neg)
    args = tuple(a.strip() for a in argtext.split(","))
    if any(not a for a in args):
        raise LogicError(f"empty argument in literal: {text!r}")
    return Literal(pred, args, neg)


def _walk(term: str, binding: dict) -> str:
    while is_var(term) and term in binding:
        term = binding[term]
    return term


def unify(a: Literal, b: Literal, binding: Optional[dict] = None) -> Optional[dict]:
    """Unify two literals (atomic terms only); returns an extended binding."""
    if a.pred != b.pred or len(a.args) != len(b.args) or a.neg != b.neg:
        return None
    out = dict(binding) if binding else {}
    for ta, tb in zip(a.args, b.args):
        ta, tb = _walk(ta, out), _walk(tb, out)
        if ta == tb:
            continue
        if is_var(ta):
            out[ta] = tb
        elif is_var(tb):
            out[tb] = ta
        else:
            return None
    return out


# -- derivation traces -------------------------------------------------------


@dataclass(frozen=True)
class InitialFact:
    """The condition held in the initial state (or is a negation check)."""

    literal: Literal
    source: Optional[str] = None


@dataclass(frozen=True)
class ActionEffect:
    """The condition was added by the plan action at ``producer`` (step index)."""

    literal: Literal
    producer: int


@dataclass(frozen=True)
class AxiomDerivation:
    """The condition was inferred by an axiom from the antecedent derivations."""

    literal: Literal
    axiom_id: str
    antecedents: tuple


Establisher = Union[InitialFact, ActionEffect, AxiomDerivation]


def establisher_to_dict(e: Establisher) -> dict:
    if isinstance(e, InitialFact):
        return {"type": "initial", "literal": str(e.literal), "source": e.source}
    if isinstance(e, ActionEffect):
        return {"type": "effect", "literal": str(e.literal), "producer": e.producer}
    return {
        "type": "axiom",
        "literal": str(e.literal),
        "axiom": e.axiom_id,
        "antecedents": [establisher_to_dict(a) for a in e.antecedents],
    }


def establisher_from_dict(d: dict) -> Establisher:
    lit = parse_literal(d["literal"])
    if d["type"] == "initial":
        return InitialFact(lit, d.get("source"))
    if d["type"] == "effect":
        return ActionEffect(lit, d["producer"])
    return AxiomDerivation(
        lit, d["axiom"], tuple(establisher_from_dict(a) for a in d["antecedents"])
    )


# -- state -------------------------------------------------------------------


class State:
    """Ordered set of ground facts, each tagged with its establisher.

    Insertion order is the tie-breaking order for unification, which makes
    search deterministic. Re-adding a present fact keeps its original
    establisher (the state did not change).
    """

    def __init__(self, facts: Iterable[tuple[Literal, Establisher]] = ()) -> None:
        self._facts: dict[Literal, Establisher] = {}
        for lit, est in facts:
            self.add(lit, est)

    def add(self, literal: Literal, establisher: Establisher) -> None:
        if literal.neg or not literal.is_ground():
            raise LogicError(f"state facts must be ground and positive: {literal}")
        if literal not in self._facts:
            self._facts[literal] = establisher

    def remove(self, literal: Literal) -> None:
        self._facts.pop(literal, None)

    def establisher(self, literal: Literal) -> Establisher:
        return self._facts[literal]

    def facts(self) -> Iterable[Literal]:
        return self._facts.keys()

    def copy(self) -> "State":
        s = State()
        s._facts = dict(self._facts)
        return s

    def __contains__(self, literal: Literal) -> bool:
        return literal in self._facts

    def __len__(self) -> int:
        return len(self._facts)


# -- axioms and backward chaining ---------------------------------------------


@dataclass(frozen=True)
class Axiom:
    id: str
    head: Literal
    body: tuple

    def __post_init__(self) -> None:
        if self.head.neg:
            raise LogicError(f"axiom head may not be negated: {self.id}")


class _SearchFlags:
    """Mutable search bookkeeping shared across a proof attempt."""

    def __init__(self) -> None:
        self.depth_hit = False
        self.rename_counter = 0


def _rename(axiom: Axiom, flags: _SearchFlags) -> Axiom:
    flags.rename_counter += 1
    suffix = f"_{flags.rename_counter}"
    table = {}
    for lit in (axiom.head, *axiom.body):
        for v in lit.variables():
            table.setdefault(v, v + suffix)
    def ren(lit: Literal) -> Literal:
        return replace(lit, args=tuple(table.get(a, a) for a in lit.args))
    return Axiom(axiom.id, ren(axiom.head), tuple(ren(b) for b in axiom.body))


def _axioms_by_pred(axioms: Iterable[Axiom]) -> dict[str, list[Axiom]]:
    table: dict[str, list[Axiom]] = {}
    for ax in axioms:
        table.setdefault(ax.head.pred, []).append(ax)
    return table


def solutions(
    state: State,
    goal: Literal,
    axioms: Iterable[Axiom],
    depth_bound: int = 64,
    binding: Optional[dict] = None,
    flags: Optional[_SearchFlags] = None,
) -> Iterator[tuple[dict, Establisher]]:
    """Lazily enumerate (binding, trace) proofs of ``goal`` against ``state``."""
    if depth_bound < 1:
        raise LogicError("depth_bound must be >= 1")
    table = axioms if isinstance(axioms, dict) else _axioms_by_pred(axioms)
    yield from _prove_goal(
        goal, binding or {}, state, table, depth_bound, flags or _SearchFlags()
    )


def _prove_goal(goal, binding, state, axioms, depth, flags):
    g = goal.substitute(binding)
    if g.neg:
        if not g.is_ground():
            raise LogicError(f"negated condition must be ground when checked: {goal}")
        for _ in _prove_goal(g.positive(), binding, state, axioms, depth, flags):
            return
        yield binding, InitialFact(g, None)
        return
    for fact in list(state.facts()):
        b = unify(g, fact, binding)
        if b is not None:
            yield b, state.establisher(fact)
    for axiom in axioms.get(g.pred, ()):
        if depth <= 1:
            flags.depth_hit = True
            continue
        ax = _rename(axiom, flags)
        b = unify(g, ax.head, binding)
        if b is None:
            continue
        for b2, antecedents in _prove_conj(ax.body, b, state, axioms, depth - 1, flags):
            yield b2, AxiomDerivation(g.substitute(b2), ax.id, tuple(antecedents))


def _prove_conj(literals, binding, state, axioms, depth, flags):
    """Prove a conjunction left to right, yielding (binding, [traces])."""
    if not literals:
        yield binding, []
        return
    first, rest = literals[0], literals[1:]
    for b, trace in _prove_goal(first, binding, state, axioms, depth, flags):
        for b2, traces in _prove_conj(rest, b, state, axioms, depth, flags):
            yield b2, [trace] + traces


def prove(
    state: State,
    goal: Literal,
    axioms: Iterable[Axiom],
    depth_bound: int = 64,
) -> list[tuple[dict, Establisher]]:
    """All proofs of ``goal``; bindings are restricted to the goal's variables.

    Hitting the depth bound silently fails that branch (the bound guards
    non-terminating axiom sets); exhaustive failure returns an empty list.
    """
    goal_vars = goal.variables()
    out = []
    for binding, trace in solutions(state, goal, axioms, depth_bound):
        resolved = {v: _walk(v, binding) for v in goal_vars}
        out.append((resolved, trace))
    return out
