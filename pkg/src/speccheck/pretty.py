"""Canonical source rendering.

parse(pretty_print(parse(src))) is structurally equal to parse(src); the
printed form is the desugared one (chains as conjunctions, nested
single-variable quantifiers, scasize calls).
"""

from __future__ import annotations

from .syntax import (AnnotatedProgram, Assign, Behavior, Binary, BoolLit,
                     Break, Call, ExprStmt, FunctionDef, If, Index, IntLit,
                     NamedPredicate, Quantifier, Return, Slice, Unary, Var,
                     VarDecl, While, format_value)

_PREC = {
    "=>": 1,
    "||": 2,
    "&&": 3,
    "=": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
_UNARY_PREC = {"!": 4, "-": 7}
_ATOM = 8


def pretty_print(program: AnnotatedProgram) -> str:
    return "\n\n".join(_function(f) for f in program.functions) + "\n"


def format_expr(e) -> str:
    return _expr(e, 0)


def format_stmts(stmts, indent="") -> str:
    return "\n".join(_stmt(s, indent) for s in stmts)


def format_predicate_block(pred: NamedPredicate, indent="  ") -> str:
    inner = "\n".join(f"{indent}  {_expr(c, 0)};" for c in pred.clauses)
    return f"{inner}"


def format_behavior(b: Behavior) -> str:
    inp = ", ".join(f"{k} = {format_value(v)}" for k, v in b.input.items())
    out = ", ".join(f"{k} = {format_value(v)}" for k, v in b.output.items())
    return f"{b.kind} {{ input = {{{inp}}} output = {{{out}}} }}"


def _function(f: FunctionDef) -> str:
    params = ", ".join(f"{p.type} {p.name}" for p in f.params)
    head = f"{f.return_type} {f.name}({params})"
    if not f.body and f.pre is None and f.post is None and not f.behaviors:
        return head + ";"
    lines = [head + " {"]
    if f.pre is not None:
        lines.append(f"  @pre {f.pre.spec_name} {{")
        lines.append(format_predicate_block(f.pre))
        lines.append("  }")
    for s in f.body:
        lines.append(_stmt(s, "  "))
    if f.post is not None:
        lines.append(f"  @post {f.post.spec_name} {{")
        lines.append(format_predicate_block(f.post))
        lines.append("  }")
    if f.behaviors:
        lines.append(f"  @behavior {f.spec_name} {{")
        for b in f.behaviors:
            lines.append(f"    {format_behavior(b)}")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines)


def _stmt(s, ind) -> str:
    match s:
        case VarDecl(type=t, name=n, init=e):
            return f"{ind}{t} {n} = {_expr(e, 0)};"
        case Assign(target=t, index=None, value=v):
            return f"{ind}{t} = {_expr(v, 0)};"
        case Assign(target=t, index=i, value=v):
            return f"{ind}{t}[{_expr(i, 0)}] = {_expr(v, 0)};"
        case If(cond=c, then=then, els=els):
            out = f"{ind}if ({_expr(c, 0)}) {{\n"
            out += "".join(_stmt(x, ind + "  ") + "\n" for x in then)
            out += f"{ind}}}"
            if els is not None:
                out += " else {\n"
                out += "".join(_stmt(x, ind + "  ") + "\n" for x in els)
                out += f"{ind}}}"
            return out
        case While(cond=c, body=body):
            out = f"{ind}while ({_expr(c, 0)}) {{\n"
            out += "".join(_stmt(x, ind + "  ") + "\n" for x in body)
            out += f"{ind}}}"
            return out
        case Break():
            return f"{ind}break;"
        case Return(value=None):
            return f"{ind}return;"
        case Return(value=v):
            return f"{ind}return {_expr(v, 0)};"
        case ExprStmt(call=c):
            return f"{ind}{_expr(c, 0)};"
    raise TypeError(f"not a statement: {s!r}")


def _expr(e, parent_prec) -> str:
    match e:
        case IntLit(value=v):
            return str(v)
        case BoolLit(value=v):
            return "true" if v else "false"
        case Var(name=n):
            return n
        case Index(arr=a, index=i):
            return f"{_expr(a, _ATOM)}[{_expr(i, 0)}]"
        case Slice(arr=a, lo=lo, hi=hi):
            return f"{_expr(a, _ATOM)}[{_expr(lo, 0)} : {_expr(hi, 0)}]"
        case Unary(op=op, operand=x):
            prec = _UNARY_PREC[op]
            inner = _expr(x, prec)
            # keep -(-x) from lexing as the decrement operator
            sep = " " if op == "-" and inner.startswith("-") else ""
            return _paren(f"{op}{sep}{inner}", prec, parent_prec)
        case Binary(op=op, left=l, right=r):
            prec = _PREC[op]
            # comparisons are non-associative; boolean/arith ops associate left
            # except => which associates right
            if op == "=>":
                lt, rt = _expr(l, prec + 1), _expr(r, prec)
            elif op in ("=", "!=", "<", "<=", ">", ">="):
                lt, rt = _expr(l, prec + 1), _expr(r, prec + 1)
            else:
                lt, rt = _expr(l, prec), _expr(r, prec + 1)
            op_text = "==" if op == "=" else op
            return _paren(f"{lt} {op_text} {rt}", prec, parent_prec)
        case Quantifier(kind=k, var=v, lo=lo, hi=hi, body=b):
            text = f"{k} (int {v}:[{_expr(lo, 0)} .. {_expr(hi, 0)}]) ({_expr(b, 0)})"
            return text
        case Call(func=f, args=args):
            return f"{f}(" + ", ".join(_expr(a, 0) for a in args) + ")"
    raise TypeError(f"not an expression: {e!r}")


def _paren(text, prec, parent_prec) -> str:
    return f"({text})" if prec < parent_prec else text
