"""Three-valued truth: true, false, or undefined-with-a-reason.

Connective rules follow strong-Kleene with masking: a false conjunct decides
a conjunction even when the other side is undefined, and dually for
disjunction. Implication is not(a) or b. The undefined payload carries a
fault record for diagnostics; truth-level equality ignores it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .syntax import Loc

# fault kinds seen in the wild
INDEX_OOB = "index-out-of-bounds"
SLICE_OOB = "slice-out-of-bounds"
DIV_ZERO = "division-by-zero"
TYPE_MISMATCH = "type-mismatch"
RECURSION_BUDGET = "recursion-budget-exceeded"
STEP_BUDGET = "step-budget-exceeded"
UNIMPLEMENTED_CALL = "call-to-unimplemented"
MISSING_RETURN = "missing-return"


@dataclass(frozen=True)
class Fault:
    kind: str
    detail: str = ""
    loc: Optional[Loc] = field(default=None, compare=False, repr=False)

    def __str__(self):
        return f"{self.kind}: {self.detail}" if self.detail else self.kind


@dataclass(frozen=True)
class TriBool:
    truth: str  # "true" | "false" | "undefined"
    fault: Optional[Fault] = None

    def is_true(self):
        return self.truth == "true"

    def is_false(self):
        return self.truth == "false"

    def is_undefined(self):
        return self.truth == "undefined"

    def __bool__(self):
        raise TypeError("TriBool is not a python bool; test .truth explicitly")

    def __str__(self):
        return self.truth


TRUE = TriBool("true")
FALSE = TriBool("false")


def undefined(fault: Fault) -> TriBool:
    return TriBool("undefined", fault)


def from_bool(b: bool) -> TriBool:
    return TRUE if b else FALSE


def tri_and(a: TriBool, b: TriBool) -> TriBool:
    if a.is_false():
        return a
    if b.is_false():
        return b
    if a.is_undefined():
        return a
    if b.is_undefined():
        return b
    return TRUE


def tri_or(a: TriBool, b: TriBool) -> TriBool:
    if a.is_true():
        return a
    if b.is_true():
        return b
    if a.is_undefined():
        return a
    if b.is_undefined():
        return b
    return FALSE


def tri_not(a: TriBool) -> TriBool:
    if a.is_true():
        return FALSE
    if a.is_false():
        return TRUE
    return a


def tri_implies(a: TriBool, b: TriBool) -> TriBool:
    return tri_or(tri_not(a), b)


def tri_all(items) -> TriBool:
    """Fold a conjunction with masking; evaluates every item."""
    acc = TRUE
    for r in items:
        acc = tri_and(acc, r)
    return acc
