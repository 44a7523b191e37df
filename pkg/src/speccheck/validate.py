"""Static checks over a parsed program.

Errors: unknown identifiers, call arity/type mismatches, break outside a
loop, a control path of a non-void function missing a return, behaviors
that do not cover the declared inputs or bind ill-typed values.

Warnings: input or output variables that occur free in neither the pre nor
the postcondition (the specification cannot constrain them), and spec-only
calls (a predicate calling a function that has no body).

validate() never raises; it returns a list of Diagnostics.
"""

from __future__ import annotations

from .errors import Diagnostic
from .interp import BUILTINS
from .syntax import (AnnotatedProgram, Assign, Binary, BoolLit, Break, Call,
                     ExprStmt, FunctionDef, If, Index, IntLit, Quantifier,
                     Return, Slice, Unary, Var, VarDecl, While, free_vars,
                     type_of_value)


def validate(program: AnnotatedProgram) -> list:
    v = _Validator(program)
    v.run()
    return v.diags


def errors_of(diags) -> list:
    return [d for d in diags if d.severity == "error"]


class _Validator:
    def __init__(self, program):
        self.program = program
        self.diags = []

    def error(self, msg, loc=None):
        self.diags.append(Diagnostic("error", msg, loc))

    def warn(self, msg, loc=None):
        self.diags.append(Diagnostic("warning", msg, loc))

    def run(self):
        for fn in self.program.functions:
            self.check_function(fn)

    # -- per function -------------------------------------------------------

    def check_function(self, fn: FunctionDef):
        seen = set()
        for p in fn.params:
            if p.name in seen:
                self.error(f"duplicate parameter {p.name!r} in {fn.name}", p.loc)
            seen.add(p.name)
            if p.name == "rv":
                self.error(f"parameter name 'rv' is reserved in {fn.name}", p.loc)

        if fn.body:
            self.check_body(fn)
        for pred, scope in ((fn.pre, "pre"), (fn.post, "post")):
            if pred is None:
                continue
            env = {p.name: p.type for p in fn.params}
            if scope == "post" and fn.return_type != "void":
                env["rv"] = fn.return_type
            for clause in pred.clauses:
                t = self.type_of(clause, env, fn, in_predicate=True)
                if t not in ("bool", None):
                    self.error(f"@{scope} {pred.spec_name} clause has type {t}, "
                               f"expected bool", clause.loc)
        self.check_spec_coverage(fn)
        for b in fn.behaviors:
            self.check_behavior(fn, b)

    def check_spec_coverage(self, fn):
        if fn.pre is None and fn.post is None and not fn.behaviors:
            return
        mentioned = set()
        for pred in (fn.pre, fn.post):
            if pred is not None:
                for clause in pred.clauses:
                    mentioned |= free_vars(clause)
        for p in fn.params:
            if p.name not in mentioned:
                self.warn(f"input variable {p.name!r} of {fn.name} is not free "
                          f"in its specification", p.loc)
        if fn.return_type != "void" and "rv" not in mentioned:
            self.warn(f"output variable 'rv' of {fn.name} is not free in its "
                      f"specification", fn.loc)

    def check_behavior(self, fn, b):
        declared = {p.name: p.type for p in fn.params}
        for name, value in b.input.items():
            if name not in declared:
                self.error(f"behavior binds unknown input {name!r}", b.loc)
            elif type_of_value(value) != declared[name]:
                self.error(f"behavior input {name!r} has type "
                           f"{type_of_value(value)}, declared {declared[name]}", b.loc)
        for name in declared:
            if name not in b.input:
                self.error(f"behavior misses input {name!r}", b.loc)
        ref_outputs = {p.name: p.type for p in fn.params if p.type == "int[]"}
        for name, value in b.output.items():
            if name == "rv":
                if fn.return_type == "void":
                    self.error("behavior binds rv but function is void", b.loc)
                elif type_of_value(value) != fn.return_type:
                    self.error(f"behavior output rv has type {type_of_value(value)}, "
                               f"declared {fn.return_type}", b.loc)
            elif name in ref_outputs:
                if type_of_value(value) != ref_outputs[name]:
                    self.error(f"behavior output {name!r} has type "
                               f"{type_of_value(value)}, declared {ref_outputs[name]}",
                               b.loc)
            else:
                self.error(f"behavior binds unknown output {name!r}", b.loc)
        if fn.return_type != "void" and "rv" not in b.output:
            self.error("behavior misses output rv", b.loc)

    # -- statements ---------------------------------------------------------

    def check_body(self, fn):
        scopes = [{p.name: p.type for p in fn.params}]
        returns = self.check_block(fn.body, scopes, fn, in_loop=False)
        if fn.return_type != "void" and not returns:
            self.error(f"control may fall off the end of non-void {fn.name}", fn.loc)

    def check_block(self, stmts, scopes, fn, in_loop) -> bool:
        """Returns True when every control path through stmts returns."""
        scopes.append({})
        guaranteed = False
        for s in stmts:
            if self.check_stmt(s, scopes, fn, in_loop):
                guaranteed = True
        scopes.pop()
        return guaranteed

    def check_stmt(self, s, scopes, fn, in_loop) -> bool:
        match s:
            case VarDecl(type=t, name=n, init=e):
                et = self.type_of(e, _flat(scopes), fn)
                if et is not None and et != t:
                    self.error(f"initializer of {n!r} has type {et}, declared {t}", s.loc)
                if any(n in sc for sc in scopes):
                    self.error(f"redeclaration of {n!r}", s.loc)
                scopes[-1][n] = t
                return False
            case Assign(target=t, index=idx, value=e):
                env = _flat(scopes)
                if t not in env:
                    self.error(f"assignment to undeclared {t!r}", s.loc)
                    return False
                if idx is None:
                    et = self.type_of(e, env, fn)
                    if et is not None and et != env[t]:
                        self.error(f"assigning {et} to {t!r} of type {env[t]}", s.loc)
                else:
                    if env[t] != "int[]":
                        self.error(f"indexed assignment to non-array {t!r}", s.loc)
                    self.expect_type(idx, "int", env, fn)
                    self.expect_type(e, "int", env, fn)
                return False
            case If(cond=c, then=then, els=els):
                self.expect_type(c, "bool", _flat(scopes), fn)
                t_ret = self.check_block(then, scopes, fn, in_loop)
                e_ret = self.check_block(els, scopes, fn, in_loop) if els is not None else False
                return t_ret and e_ret and els is not None
            case While(cond=c, body=body):
                self.expect_type(c, "bool", _flat(scopes), fn)
                self.check_block(body, scopes, fn, in_loop=True)
                return False
            case Break():
                if not in_loop:
                    self.error("break outside a loop", s.loc)
                return False
            case Return(value=v):
                if fn.return_type == "void":
                    if v is not None:
                        self.error("void function returns a value", s.loc)
                elif v is None:
                    self.error(f"return without a value in non-void {fn.name}", s.loc)
                else:
                    self.expect_type(v, fn.return_type, _flat(scopes), fn)
                return True
            case ExprStmt(call=c):
                self.type_of(c, _flat(scopes), fn)
                return False
        raise TypeError(f"not a statement: {s!r}")

    # -- expression typing ----------------------------------------------------

    def expect_type(self, e, expected, env, fn, in_predicate=False):
        t = self.type_of(e, env, fn, in_predicate)
        if t is not None and t != expected:
            self.error(f"expected {expected}, got {t}", e.loc)

    def type_of(self, e, env, fn, in_predicate=False):
        """Best-effort type; None when a sub-error already got reported."""
        match e:
            case IntLit():
                return "int"
            case BoolLit():
                return "bool"
            case Var(name=n):
                if n not in env:
                    self.error(f"unknown identifier {n!r}", e.loc)
                    return None
                return env[n]
            case Index(arr=a, index=i):
                self.expect_type(a, "int[]", env, fn, in_predicate)
                self.expect_type(i, "int", env, fn, in_predicate)
                return "int"
            case Slice(arr=a, lo=lo, hi=hi):
                self.expect_type(a, "int[]", env, fn, in_predicate)
                self.expect_type(lo, "int", env, fn, in_predicate)
                self.expect_type(hi, "int", env, fn, in_predicate)
                return "int[]"
            case Unary(op="-", operand=x):
                self.expect_type(x, "int", env, fn, in_predicate)
                return "int"
            case Unary(op="!", operand=x):
                self.expect_type(x, "bool", env, fn, in_predicate)
                return "bool"
            case Binary(op=op, left=l, right=r):
                if op in ("+", "-", "*", "/", "%"):
                    self.expect_type(l, "int", env, fn, in_predicate)
                    self.expect_type(r, "int", env, fn, in_predicate)
                    return "int"
                if op in ("<", "<=", ">", ">="):
                    self.expect_type(l, "int", env, fn, in_predicate)
                    self.expect_type(r, "int", env, fn, in_predicate)
                    return "bool"
                if op in ("=", "!="):
                    lt = self.type_of(l, env, fn, in_predicate)
                    rt = self.type_of(r, env, fn, in_predicate)
                    if lt is not None and rt is not None and lt != rt:
                        self.error(f"comparing {lt} with {rt}", e.loc)
                    return "bool"
                # && || =>
                self.expect_type(l, "bool", env, fn, in_predicate)
                self.expect_type(r, "bool", env, fn, in_predicate)
                return "bool"
            case Quantifier(var=v, lo=lo, hi=hi, body=b):
                self.expect_type(lo, "int", env, fn, in_predicate)
                self.expect_type(hi, "int", env, fn, in_predicate)
                inner = dict(env)
                inner[v] = "int"
                self.expect_type(b, "bool", inner, fn, in_predicate)
                return "bool"
            case Call(func=name, args=args):
                return self.type_of_call(e, name, args, env, fn, in_predicate)
        raise TypeError(f"not an expression: {e!r}")

    def type_of_call(self, e, name, args, env, fn, in_predicate):
        if name in BUILTINS:
            sig = BUILTINS[name]
            if len(args) != len(sig.param_types):
                self.error(f"{name} takes {len(sig.param_types)} argument(s), "
                           f"got {len(args)}", e.loc)
                return sig.return_type
            for a, t in zip(args, sig.param_types):
                self.expect_type(a, t, env, fn, in_predicate)
            return sig.return_type
        callee = self.program.function(name)
        if callee is None:
            self.error(f"call to undefined function {name!r}", e.loc)
            return None
        if len(args) != len(callee.params):
            self.error(f"{name} takes {len(callee.params)} argument(s), "
                       f"got {len(args)}", e.loc)
        for a, p in zip(args, callee.params):
            self.expect_type(a, p.type, env, fn, in_predicate)
        if in_predicate and not callee.body:
            self.warn(f"predicate calls {name!r}, which has no body", e.loc)
        return callee.return_type


def _flat(scopes) -> dict:
    env = {}
    for sc in scopes:
        env.update(sc)
    return env
