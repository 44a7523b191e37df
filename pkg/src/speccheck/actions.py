"""Correction actions and the decision tables that select them.

Each labeled behavior, once evaluated, maps to an action telling the
developer what to fix: nothing (the evidence agrees), weaken or strengthen
one of the predicates, revise the implementation, or make a predicate
well-defined when evaluation hit a fault. Composite actions bundle
alternatives: And means both parts are needed, Or means the developer must
pick one branch.

All selector functions are pure table lookups over truth values; witnesses
are carried along so the rendered advice can show which valuation drove it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InvalidKind
from .syntax import GOOD, BAD, DONT_CARE, format_valuation
from .tribool import TriBool

PRE = "P"
POST = "Q"


@dataclass(frozen=True)
class Witness:
    """The valuation that justified an action."""
    input: dict
    output: Optional[dict] = None

    def render(self) -> str:
        if self.output is None:
            return format_valuation(self.input)
        return f"({format_valuation(self.input)}, {format_valuation(self.output)})"

    def to_json(self):
        j = {"input": {k: _json_value(v) for k, v in self.input.items()}}
        if self.output is not None:
            j["output"] = {k: _json_value(v) for k, v in self.output.items()}
        return j


def _json_value(v):
    return list(v) if isinstance(v, list) else v


@dataclass(frozen=True)
class Skip:
    note: str = ""

    def render(self):
        return "skip"


@dataclass(frozen=True)
class Weaken:
    target: str  # PRE or POST
    witness: Witness

    def render(self):
        return f"weaken({self.target}, {self.witness.render()})"


@dataclass(frozen=True)
class Strengthen:
    target: str
    witness: Witness

    def render(self):
        return f"strengthen({self.target}, {self.witness.render()})"


@dataclass(frozen=True)
class ReviseImpl:
    witness: Witness

    def render(self):
        return f"reviseImpl({self.witness.render()})"


@dataclass(frozen=True)
class MakeWellDefined:
    target: str
    witness: Witness

    def render(self):
        return f"makeWellDefined({self.target}, {self.witness.render()})"


@dataclass(frozen=True)
class And:
    parts: tuple

    def render(self):
        return " AND ".join(p.render() for p in self.parts)


@dataclass(frozen=True)
class Or:
    parts: tuple

    def render(self):
        return " OR ".join(p.render() for p in self.parts)


Action = object


def action_to_json(a: Action):
    match a:
        case Skip(note=note):
            j = {"op": "basic", "kind": "skip"}
            if note:
                j["note"] = note
            return j
        case Weaken(target=t, witness=w):
            return {"op": "basic", "kind": "weaken", "target": t,
                    "witness": w.to_json()}
        case Strengthen(target=t, witness=w):
            return {"op": "basic", "kind": "strengthen", "target": t,
                    "witness": w.to_json()}
        case ReviseImpl(witness=w):
            return {"op": "basic", "kind": "reviseImpl", "witness": w.to_json()}
        case MakeWellDefined(target=t, witness=w):
            return {"op": "basic", "kind": "makeWellDefined", "target": t,
                    "witness": w.to_json()}
        case And(parts=ps):
            return {"op": "and", "parts": [action_to_json(p) for p in ps]}
        case Or(parts=ps):
            return {"op": "or", "parts": [action_to_json(p) for p in ps]}
        case _:
            raise TypeError(f"not an action: {a!r}")


# -- decision tables ---------------------------------------------------------

def precondition_action(kind: str, p: TriBool, witness: Witness) -> Action:
    """How the precondition verdict on a labeled input maps to advice.

    good/bad inputs must be admitted (false means the precondition rejects
    a case the developer cares about); dontCare inputs must be rejected
    (true means it admits a case the developer ruled out)."""
    if p.is_undefined():
        return MakeWellDefined(PRE, witness)
    if kind in (GOOD, BAD):
        return Skip() if p.is_true() else Weaken(PRE, witness)
    if kind == DONT_CARE:
        return Strengthen(PRE, witness) if p.is_true() else Skip()
    raise InvalidKind(kind, "precondition table")


def postcondition_action(kind: str, q: TriBool, witness: Witness) -> Action:
    """How the postcondition verdict on a labeled pair maps to advice.

    A dontCare pair has no postcondition obligation; asking is a usage error."""
    if kind == DONT_CARE:
        raise InvalidKind(kind, "postcondition table")
    if q.is_undefined():
        return MakeWellDefined(POST, witness)
    if kind == GOOD:
        return Skip() if q.is_true() else Weaken(POST, witness)
    if kind == BAD:
        return Strengthen(POST, witness) if q.is_true() else Skip()
    raise InvalidKind(kind, "postcondition table")


def triple_action(g: bool, q: TriBool, witness: Witness) -> Action:
    """Advice for an executed pair whose input satisfies the precondition.

    g: whether the developer accepts the produced output for this input.
    q: the postcondition verdict on the produced pair."""
    if q.is_undefined():
        return MakeWellDefined(POST, witness)
    if g:
        return Skip() if q.is_true() else Weaken(POST, witness)
    if q.is_true():
        return And((Strengthen(POST, witness), ReviseImpl(witness)))
    return ReviseImpl(witness)


def neg_triple_action(g: bool, q: TriBool, witness: Witness) -> Action:
    """Advice for an executed pair whose input fails the precondition.

    Outside the promised domain nothing is owed, so most cells skip; the
    mixed cells surface a real choice and leave it to the developer."""
    if q.is_undefined():
        return MakeWellDefined(POST, witness)
    if g:
        if q.is_true():
            return Skip()
        return Or((Strengthen(POST, witness), Skip()))
    if q.is_true():
        return Or((Strengthen(PRE, Witness(witness.input)), ReviseImpl(witness)))
    return Skip()
