"""Execution and predicate evaluation.

Two entangled evaluators live here. exec_function runs statement bodies with
big-step semantics: scalars by value, arrays by reference (callers observe
element writes), division truncating toward zero, budgets on statement steps
and call depth. eval_bool evaluates predicates into three-valued truth:
runtime faults (index out of bounds, slice bounds, division by zero, faults
inside called functions, exhausted budgets) surface as Undefined, and the
connectives mask per tribool's rules. Quantifiers evaluate their range
bounds first, then scan it in ascending order, stopping at the first
deciding value or the first Undefined body.

Predicates may call defined functions; those calls run the function body
under the same budget, so a fault or exhausted budget inside the callee
becomes Undefined at the predicate level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import tribool
from .errors import UnboundVariable
from .syntax import (AnnotatedProgram, Assign, Binary, BoolLit, Break, Call,
                     ExprStmt, FunctionDef, If, Index, IntLit, NamedPredicate,
                     Quantifier, Return, Slice, Unary, Var, VarDecl, While,
                     copy_value, type_of_value)
from .tribool import (DIV_ZERO, FALSE, Fault, INDEX_OOB, MISSING_RETURN,
                      RECURSION_BUDGET, SLICE_OOB, STEP_BUDGET, TRUE, TriBool,
                      TYPE_MISMATCH, UNIMPLEMENTED_CALL, from_bool, tri_and,
                      tri_not, tri_or, undefined)

DEFAULT_STEP_BUDGET = 1_000_000
DEFAULT_DEPTH_BUDGET = 10_000


@dataclass
class Budget:
    max_steps: int = DEFAULT_STEP_BUDGET
    max_depth: int = DEFAULT_DEPTH_BUDGET
    steps: int = 0
    depth: int = 0

    def tick(self, loc=None):
        self.steps += 1
        if self.steps > self.max_steps:
            raise _Stop(Fault(STEP_BUDGET, f"exceeded {self.max_steps} steps", loc))

    def push_call(self, loc=None):
        self.depth += 1
        if self.depth > self.max_depth:
            raise _Stop(Fault(RECURSION_BUDGET,
                              f"exceeded call depth {self.max_depth}", loc))

    def pop_call(self):
        self.depth -= 1


class _Stop(Exception):
    """Internal: a fault or budget exhaustion unwinding to the boundary."""

    def __init__(self, fault: Fault):
        self.fault = fault


class _BreakSignal(Exception):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


# -- built-ins ----------------------------------------------------------------

@dataclass(frozen=True)
class Builtin:
    name: str
    param_types: tuple
    return_type: str
    fn: object = field(compare=False)


def _scasize(a):
    return len(a)


def _scalpha(c):
    return 65 <= c <= 90 or 97 <= c <= 122


def _scnum(c):
    return 48 <= c <= 57


def _scblank(c):
    # the newline (10) is not a blank
    return c == 32


BUILTINS = {
    "scasize": Builtin("scasize", ("int[]",), "int", _scasize),
    "scalpha": Builtin("scalpha", ("int",), "bool", _scalpha),
    "scnum": Builtin("scnum", ("int",), "bool", _scnum),
    "scblank": Builtin("scblank", ("int",), "bool", _scblank),
}


def eval_builtin(name: str, args: list):
    """Apply a built-in to already-evaluated values. Raises _Stop on a type
    mismatch (Undefined in predicate position, Fault during execution)."""
    b = BUILTINS[name]
    if len(args) != len(b.param_types):
        raise _Stop(Fault(TYPE_MISMATCH, f"{name} arity {len(b.param_types)}, "
                                         f"got {len(args)}"))
    for v, t in zip(args, b.param_types):
        if type_of_value(v) != t:
            raise _Stop(Fault(TYPE_MISMATCH, f"{name} expects {t}, "
                                             f"got {type_of_value(v)}"))
    return b.fn(*args)


# -- execution outcomes ---------------------------------------------------------

@dataclass(frozen=True)
class Returned:
    rv: object
    final_ref_state: dict  # int[] param name -> list after execution


@dataclass(frozen=True)
class ExecFault:
    fault: Fault


@dataclass(frozen=True)
class BudgetExceeded:
    kind: str  # "steps" | "depth"
    fault: Fault


ExecOutcome = object


@dataclass
class _Ctx:
    program: AnnotatedProgram
    budget: Budget


def exec_function(program: AnnotatedProgram, fn: FunctionDef, args: list,
                  budget: Optional[Budget] = None) -> ExecOutcome:
    """Run fn on argument values. Deterministic; never hangs (budgets)."""
    if not fn.body:
        raise ValueError(f"{fn.name} has no body to execute")
    if len(args) != len(fn.params):
        raise ValueError(f"{fn.name} takes {len(fn.params)} args, got {len(args)}")
    ctx = _Ctx(program, budget or Budget())
    frame = {p.name: a for p, a in zip(fn.params, args)}
    try:
        rv = _run_body(ctx, fn, frame)
    except _Stop as s:
        if s.fault.kind in (STEP_BUDGET, RECURSION_BUDGET):
            kind = "steps" if s.fault.kind == STEP_BUDGET else "depth"
            return BudgetExceeded(kind, s.fault)
        return ExecFault(s.fault)
    refs = {p.name: frame[p.name] for p in fn.params if p.type == "int[]"}
    return Returned(rv, refs)


def _run_body(ctx, fn, frame):
    """Execute statements in a fresh frame; returns the return value."""
    try:
        _exec_block(ctx, fn.body, frame)
    except _ReturnSignal as r:
        return r.value
    if fn.return_type == "void":
        return None
    raise _Stop(Fault(MISSING_RETURN, f"{fn.name} fell off the end", fn.loc))


def _exec_block(ctx, stmts, frame):
    for s in stmts:
        _exec_stmt(ctx, s, frame)


def _exec_stmt(ctx, s, frame):
    ctx.budget.tick(s.loc)
    match s:
        case VarDecl(name=n, init=e):
            frame[n] = _eval_value(ctx, e, frame)
        case Assign(target=t, index=None, value=e):
            if t not in frame:
                raise UnboundVariable(t, s.loc)
            frame[t] = _eval_value(ctx, e, frame)
        case Assign(target=t, index=idx, value=e):
            arr = _lookup(frame, t, s.loc)
            i = _want_int(_eval_value(ctx, idx, frame), idx)
            v = _want_int(_eval_value(ctx, e, frame), e)
            if not isinstance(arr, list):
                raise _Stop(Fault(TYPE_MISMATCH, f"{t} is not an array", s.loc))
            if not 0 <= i < len(arr):
                raise _Stop(Fault(INDEX_OOB, f"{t}[{i}], size {len(arr)}", s.loc))
            arr[i] = v
        case If(cond=c, then=then, els=els):
            if _want_bool(_eval_value(ctx, c, frame), c):
                _exec_block(ctx, then, frame)
            elif els is not None:
                _exec_block(ctx, els, frame)
        case While(cond=c, body=body):
            while True:
                ctx.budget.tick(s.loc)  # one step per iteration
                if not _want_bool(_eval_value(ctx, c, frame), c):
                    break
                try:
                    _exec_block(ctx, body, frame)
                except _BreakSignal:
                    break
        case Break():
            raise _BreakSignal()
        case Return(value=None):
            raise _ReturnSignal(None)
        case Return(value=e):
            raise _ReturnSignal(_eval_value(ctx, e, frame))
        case ExprStmt(call=c):
            _eval_value(ctx, c, frame)
        case _:
            raise TypeError(f"not a statement: {s!r}")


# -- value evaluation (shared by bodies and predicate atoms) -----------------

def _lookup(frame, name, loc):
    if name not in frame:
        raise UnboundVariable(name, loc)
    return frame[name]


def _want_int(v, e):
    if isinstance(v, bool) or not isinstance(v, int):
        raise _Stop(Fault(TYPE_MISMATCH, f"expected int, got {type_of_value(v)}",
                          e.loc))
    return v


def _want_bool(v, e):
    if not isinstance(v, bool):
        raise _Stop(Fault(TYPE_MISMATCH, f"expected bool, got {type_of_value(v)}",
                          e.loc))
    return v


def _trunc_div(a, b, loc):
    if b == 0:
        raise _Stop(Fault(DIV_ZERO, f"{a} / 0", loc))
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def _trunc_mod(a, b, loc):
    # remainder takes the sign of the dividend
    if b == 0:
        raise _Stop(Fault(DIV_ZERO, f"{a} % 0", loc))
    return a - b * _trunc_div(a, b, loc)


def _eval_value(ctx, e, frame):
    """Evaluate to a plain value. Boolean connectives inside a value position
    bridge through the tri-valued evaluator; their Undefined re-raises."""
    match e:
        case IntLit(value=v):
            return v
        case BoolLit(value=v):
            return v
        case Var(name=n):
            return _lookup(frame, n, e.loc)
        case Index(arr=a, index=i):
            arr = _eval_value(ctx, a, frame)
            idx = _want_int(_eval_value(ctx, i, frame), i)
            if not isinstance(arr, list):
                raise _Stop(Fault(TYPE_MISMATCH, "indexing a non-array", e.loc))
            if not 0 <= idx < len(arr):
                raise _Stop(Fault(INDEX_OOB, f"index {idx}, size {len(arr)}", e.loc))
            return arr[idx]
        case Slice(arr=a, lo=lo, hi=hi):
            arr = _eval_value(ctx, a, frame)
            i = _want_int(_eval_value(ctx, lo, frame), lo)
            j = _want_int(_eval_value(ctx, hi, frame), hi)
            if not isinstance(arr, list):
                raise _Stop(Fault(TYPE_MISMATCH, "slicing a non-array", e.loc))
            if i > j:
                return []  # empty by definition, bounds irrelevant
            if i < 0 or j >= len(arr):
                raise _Stop(Fault(SLICE_OOB, f"[{i}:{j}], size {len(arr)}", e.loc))
            return arr[i:j + 1]
        case Unary(op="-", operand=x):
            return -_want_int(_eval_value(ctx, x, frame), x)
        case Unary(op="!", operand=x):
            return _bridge_bool(ctx, e, frame)
        case Binary(op=op) if op in ("&&", "||", "=>"):
            return _bridge_bool(ctx, e, frame)
        case Binary(op=op, left=l, right=r) if op in ("=", "!="):
            lv = _eval_value(ctx, l, frame)
            rv = _eval_value(ctx, r, frame)
            if type_of_value(lv) != type_of_value(rv):
                raise _Stop(Fault(TYPE_MISMATCH,
                                  f"comparing {type_of_value(lv)} with "
                                  f"{type_of_value(rv)}", e.loc))
            eq = lv == rv
            return eq if op == "=" else not eq
        case Binary(op=op, left=l, right=r) if op in ("<", "<=", ">", ">="):
            lv = _want_int(_eval_value(ctx, l, frame), l)
            rv = _want_int(_eval_value(ctx, r, frame), r)
            return {"<": lv < rv, "<=": lv <= rv,
                    ">": lv > rv, ">=": lv >= rv}[op]
        case Binary(op=op, left=l, right=r):
            lv = _want_int(_eval_value(ctx, l, frame), l)
            rv = _want_int(_eval_value(ctx, r, frame), r)
            if op == "+":
                return lv + rv
            if op == "-":
                return lv - rv
            if op == "*":
                return lv * rv
            if op == "/":
                return _trunc_div(lv, rv, e.loc)
            if op == "%":
                return _trunc_mod(lv, rv, e.loc)
            raise TypeError(f"unknown operator {op!r}")
        case Quantifier():
            return _bridge_bool(ctx, e, frame)
        case Call(func=name, args=args):
            vals = [_eval_value(ctx, a, frame) for a in args]
            return _apply_call(ctx, name, vals, e.loc)
        case _:
            raise TypeError(f"not an expression: {e!r}")


def _bridge_bool(ctx, e, frame):
    r = _eval_bool(ctx, e, frame)
    if r.is_undefined():
        raise _Stop(r.fault)
    return r.is_true()


def _apply_call(ctx, name, vals, loc):
    if name in BUILTINS:
        ctx.budget.tick(loc)
        return eval_builtin(name, vals)
    callee = ctx.program.function(name)
    if callee is None:
        raise UnboundVariable(name, loc)
    if not callee.body:
        raise _Stop(Fault(UNIMPLEMENTED_CALL, f"{name} has no body", loc))
    if len(vals) != len(callee.params):
        raise _Stop(Fault(TYPE_MISMATCH, f"{name} takes {len(callee.params)} "
                                         f"args, got {len(vals)}", loc))
    for v, p in zip(vals, callee.params):
        if type_of_value(v) != p.type:
            raise _Stop(Fault(TYPE_MISMATCH,
                              f"{name} expects {p.type} for {p.name}, "
                              f"got {type_of_value(v)}", loc))
    ctx.budget.push_call(loc)
    try:
        # scalars by value, arrays by reference
        frame = {p.name: v for p, v in zip(callee.params, vals)}
        return _run_body(ctx, callee, frame)
    finally:
        ctx.budget.pop_call()


# -- tri-valued predicate evaluation ---------------------------------------------

def _eval_bool(ctx, e, frame) -> TriBool:
    match e:
        case Binary(op="&&", left=l, right=r):
            a = _eval_bool(ctx, l, frame)
            if a.is_false():
                return a
            return tri_and(a, _eval_bool(ctx, r, frame))
        case Binary(op="||", left=l, right=r):
            a = _eval_bool(ctx, l, frame)
            if a.is_true():
                return a
            return tri_or(a, _eval_bool(ctx, r, frame))
        case Binary(op="=>", left=l, right=r):
            a = _eval_bool(ctx, l, frame)
            if a.is_false():
                return TRUE
            return tri_or(tri_not(a), _eval_bool(ctx, r, frame))
        case Unary(op="!", operand=x):
            return tri_not(_eval_bool(ctx, x, frame))
        case Quantifier(kind=kind, var=v, lo=lo, hi=hi, body=b):
            try:
                i = _want_int(_eval_value(ctx, lo, frame), lo)
                j = _want_int(_eval_value(ctx, hi, frame), hi)
            except _Stop as s:
                return undefined(s.fault)  # undefined range bound
            inner = dict(frame)
            for k in range(i, j + 1):  # empty range: forall true, exists false
                ctx.budget.tick(e.loc)
                inner[v] = k
                r = _eval_bool(ctx, b, inner)
                if r.is_undefined():
                    return r  # ordered scan aborts at the first undefined
                if kind == "forall" and r.is_false():
                    return FALSE
                if kind == "exists" and r.is_true():
                    return TRUE
            return TRUE if kind == "forall" else FALSE
        case _:
            # atoms: comparisons, calls, literals, variables
            try:
                v = _eval_value(ctx, e, frame)
            except _Stop as s:
                return undefined(s.fault)
            if not isinstance(v, bool):
                return undefined(Fault(TYPE_MISMATCH,
                                       f"predicate atom has type {type_of_value(v)}",
                                       e.loc))
            return from_bool(v)


def eval_predicate(program: AnnotatedProgram, expr, env: dict,
                   budget: Optional[Budget] = None) -> TriBool:
    """Evaluate one predicate expression under an environment."""
    ctx = _Ctx(program, budget or Budget())
    try:
        return _eval_bool(ctx, expr, env)
    except _Stop as s:  # budget exhaustion escaping a deep call
        return undefined(s.fault)


@dataclass(frozen=True)
class ClauseOutcome:
    index: int
    truth: TriBool


@dataclass(frozen=True)
class PredicateOutcome:
    truth: TriBool
    clauses: tuple

    @property
    def masked_faults(self):
        """Faults that did not decide the verdict (clause undefined while the
        conjunction still resolved to true/false)."""
        if self.truth.is_undefined():
            return []
        return [c for c in self.clauses if c.truth.is_undefined()]


def eval_named_predicate(program, pred: Optional[NamedPredicate], env,
                         budget=None, default: Optional[TriBool] = None
                         ) -> PredicateOutcome:
    """Evaluate a clause list in listed order, conjoining with masking.

    Every clause is evaluated even after the verdict is decided, so masked
    faults can be reported. A missing predicate evaluates to `default`.
    """
    if pred is None:
        assert default is not None
        return PredicateOutcome(default, ())
    outcomes = []
    for i, clause in enumerate(pred.clauses):
        outcomes.append(ClauseOutcome(i, eval_predicate(program, clause, env, budget)))
    return PredicateOutcome(tribool.tri_all(c.truth for c in outcomes),
                            tuple(outcomes))


def behavior_pre_env(fn: FunctionDef, behavior) -> dict:
    return {k: copy_value(v) for k, v in behavior.input.items()}


def behavior_post_env(fn: FunctionDef, behavior) -> dict:
    """Inputs overlaid with outputs; omitted reference outputs stay at the
    input value (unchanged)."""
    env = {k: copy_value(v) for k, v in behavior.input.items()}
    for k, v in behavior.output.items():
        env[k] = copy_value(v)
    return env


def eval_pre_on_behavior(program, fn: FunctionDef, behavior,
                         budget=None) -> PredicateOutcome:
    """A missing @pre is the constant false."""
    return eval_named_predicate(program, fn.pre, behavior_pre_env(fn, behavior),
                                budget, default=FALSE)


def eval_post_on_behavior(program, fn: FunctionDef, behavior,
                          budget=None) -> PredicateOutcome:
    """A missing @post is the constant true."""
    return eval_named_predicate(program, fn.post, behavior_post_env(fn, behavior),
                                budget, default=TRUE)
