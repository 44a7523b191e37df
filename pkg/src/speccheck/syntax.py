"""AST for annotated programs.

A program is a list of function definitions. A function may carry three kinds
of annotation blocks besides its statements: a named precondition, a named
postcondition, and labeled behaviors (good / bad / dontCare input-output
pairs). Expression nodes are shared between predicates and statement bodies;
quantifiers and slices are only legal in predicates, which the parser and
validator enforce.

Node equality is structural and ignores source locations, so a parse of the
pretty-printed form of a program compares equal to the original parse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class Loc:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


def _loc_field():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------------------
# Expressions (predicates and body expressions share these nodes)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Var:
    name: str
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Index:
    arr: "Expr"
    index: "Expr"
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Slice:
    # a[lo : hi], inclusive on both ends; lo > hi denotes the empty array
    arr: "Expr"
    lo: "Expr"
    hi: "Expr"
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Unary:
    op: str  # "-" | "!"
    operand: "Expr"
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Binary:
    # arithmetic: + - * / %   comparison: = != < <= > >=   boolean: && || =>
    op: str
    left: "Expr"
    right: "Expr"
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Quantifier:
    kind: str  # "forall" | "exists"
    var: str
    lo: "Expr"
    hi: "Expr"
    body: "Expr"
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    loc: Optional[Loc] = _loc_field()


Expr = Union[IntLit, BoolLit, Var, Index, Slice, Unary, Binary, Quantifier, Call]

ARITH_OPS = {"+", "-", "*", "/", "%"}
CMP_OPS = {"=", "!=", "<", "<=", ">", ">="}
BOOL_OPS = {"&&", "||", "=>"}


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VarDecl:
    type: str  # "int" | "bool" | "int[]"
    name: str
    init: Expr
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Assign:
    target: str
    index: Optional[Expr]  # None for scalar assignment, else a[index] = value
    value: Expr
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple
    els: Optional[tuple]
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Break:
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class Return:
    value: Optional[Expr]
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True)
class ExprStmt:
    call: Call
    loc: Optional[Loc] = _loc_field()


Stmt = Union[VarDecl, Assign, If, While, Break, Return, ExprStmt]


# ---------------------------------------------------------------------------
# Annotations and program structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NamedPredicate:
    """A named clause list; the clauses are implicitly conjoined."""
    spec_name: str
    clauses: tuple
    loc: Optional[Loc] = _loc_field()


GOOD = "good"
BAD = "bad"
DONT_CARE = "dontCare"
BEHAVIOR_KINDS = (GOOD, BAD, DONT_CARE)

# Runtime values are plain python: int, bool, list[int]. bool must be tested
# before int (bool is an int subtype in python).
Value = Union[int, bool, list]


@dataclass(frozen=True, eq=False)
class Behavior:
    kind: str
    input: dict  # param name -> Value, covers every declared parameter
    output: dict  # "rv" and any reference-typed outputs
    loc: Optional[Loc] = _loc_field()

    def __eq__(self, other):
        if not isinstance(other, Behavior):
            return NotImplemented
        return (self.kind == other.kind
                and valuation_key(self.input) == valuation_key(other.input)
                and valuation_key(self.output) == valuation_key(other.output))


@dataclass(frozen=True)
class Param:
    type: str
    name: str
    loc: Optional[Loc] = _loc_field()


@dataclass(frozen=True, eq=False)
class FunctionDef:
    name: str
    return_type: str
    params: tuple
    body: tuple  # statements; empty tuple means spec-only / interface
    pre: Optional[NamedPredicate]
    post: Optional[NamedPredicate]
    behaviors: tuple
    loc: Optional[Loc] = _loc_field()

    def __eq__(self, other):
        if not isinstance(other, FunctionDef):
            return NotImplemented
        return (self.name == other.name
                and self.return_type == other.return_type
                and self.params == other.params
                and self.body == other.body
                and self.pre == other.pre
                and self.post == other.post
                and tuple(self.behaviors) == tuple(other.behaviors))

    @property
    def spec_name(self):
        if self.pre is not None:
            return self.pre.spec_name
        if self.post is not None:
            return self.post.spec_name
        return self.name

    def param(self, name):
        for p in self.params:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True, eq=False)
class AnnotatedProgram:
    functions: tuple
    entry: str  # name of the function under analysis

    def __eq__(self, other):
        if not isinstance(other, AnnotatedProgram):
            return NotImplemented
        return self.functions == other.functions and self.entry == other.entry

    def function(self, name) -> Optional[FunctionDef]:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    @property
    def entry_fn(self) -> FunctionDef:
        fn = self.function(self.entry)
        assert fn is not None, "entry always names a defined function"
        return fn


# ---------------------------------------------------------------------------
# Value helpers
# ---------------------------------------------------------------------------

def type_of_value(v) -> str:
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, list):
        return "int[]"
    raise TypeError(f"not a language value: {v!r}")


def values_equal(a, b) -> bool:
    """Type-strict equality (python would say True == 1)."""
    if type_of_value(a) != type_of_value(b):
        return False
    return a == b


def copy_value(v):
    return list(v) if isinstance(v, list) else v


def freeze_value(v):
    """Hashable canonical form, tagged so 1 and true stay distinct."""
    if isinstance(v, bool):
        return ("bool", v)
    if isinstance(v, int):
        return ("int", v)
    return ("int[]", tuple(v))


def valuation_key(m: dict) -> tuple:
    return tuple(sorted((k, freeze_value(v)) for k, v in m.items()))


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return "{" + ", ".join(str(x) for x in v) + "}"


def format_valuation(m: dict) -> str:
    return "{" + ", ".join(f"{k}={format_value(v)}" for k, v in m.items()) + "}"


def free_vars(e: Expr) -> set:
    """Free variable names of an expression."""
    match e:
        case IntLit() | BoolLit():
            return set()
        case Var(name=n):
            return {n}
        case Index(arr=a, index=i):
            return free_vars(a) | free_vars(i)
        case Slice(arr=a, lo=lo, hi=hi):
            return free_vars(a) | free_vars(lo) | free_vars(hi)
        case Unary(operand=x):
            return free_vars(x)
        case Binary(left=l, right=r):
            return free_vars(l) | free_vars(r)
        case Quantifier(var=v, lo=lo, hi=hi, body=b):
            return free_vars(lo) | free_vars(hi) | (free_vars(b) - {v})
        case Call(args=args):
            out = set()
            for a in args:
                out |= free_vars(a)
            return out
    raise TypeError(f"not an expression: {e!r}")
