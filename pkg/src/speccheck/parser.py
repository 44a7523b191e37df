"""Recursive-descent parser producing AnnotatedProgram values.

Grammar sketch (whitespace-insensitive, // comments):

    program     := functionDef+
    functionDef := type ident "(" params? ")" ( ";" | "{" item* "}" )
    item        := stmt | preBlock | postBlock | behaviorBlock
    preBlock    := "@pre" ident ( predExpr ";" | "{" (predExpr ";"?)+ "}" )
    postBlock   := "@post" ident "{" (predExpr ";"?)+ "}"
    behaviorBlock := "@behavior" ident "{" behavior+ "}"
    behavior    := ("good"|"bad"|"dontCare")
                   "{" "input" "=" valMap ";"? "output" "=" valMap ";"? "}" ";"?
    valMap      := "{" ident "=" value ("," ident "=" value)* "}"

Predicate expressions allow quantifiers and slices; body expressions do not.
Three desugarings happen here so downstream passes never see the sugar:
chained comparisons become a conjunction, multi-variable quantifier binder
lists become nested single-variable quantifiers, and `a.size` becomes
`scasize(a)`. `x++;` / `x--;` are statement sugar for `x = x + 1/-1;`.
"""

from __future__ import annotations

from .errors import ParseError
from .lexer import Token, tokenize
from .syntax import (AnnotatedProgram, Assign, Behavior, BEHAVIOR_KINDS, Binary,
                     BoolLit, Break, Call, ExprStmt, FunctionDef, If, Index,
                     IntLit, NamedPredicate, Param, Quantifier, Return, Slice,
                     Unary, Var, VarDecl, While)

_CMP = ("=", "==", "!=", "<", "<=", ">", ">=")
_TYPE_START = ("int", "bool", "boolean")


def parse(source: str) -> AnnotatedProgram:
    """Parse a whole compilation unit and pick its entry function."""
    p = _Parser(tokenize(source))
    functions = []
    while not p.at("eof"):
        functions.append(p.function_def())
    if not functions:
        raise ParseError(None, "empty program: expected at least one function")
    seen = set()
    for f in functions:
        if f.name in seen:
            raise ParseError(f.loc, f"duplicate function {f.name!r}")
        seen.add(f.name)
    return AnnotatedProgram(tuple(functions), _pick_entry(functions))


def _pick_entry(functions) -> str:
    for f in functions:
        if f.behaviors:
            return f.name
    for f in functions:
        if f.pre is not None or f.post is not None:
            return f.name
    return functions[0].name


# snippet entry points, used by session edits ------------------------------

def parse_clauses(text: str) -> tuple:
    """Parse one or more predicate clauses separated by optional ';'."""
    p = _Parser(tokenize(text))
    clauses = p.clause_list(stop_kinds=("eof",))
    p.expect_kind("eof")
    return clauses


def parse_stmts(text: str) -> tuple:
    p = _Parser(tokenize(text))
    out = []
    while not p.at("eof"):
        out.append(p.statement())
    return tuple(out)


def parse_behaviors(text: str) -> tuple:
    p = _Parser(tokenize(text))
    out = []
    while not p.at("eof"):
        out.append(p.behavior_entry())
    if not out:
        raise ParseError(None, "expected at least one behavior")
    return tuple(out)


def parse_pred_expr(text: str):
    """Parse a single predicate expression (used for domain filters)."""
    p = _Parser(tokenize(text))
    e = p.pred_expr()
    p.expect_kind("eof")
    return e


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0
        self.in_predicate = False

    # -- token plumbing ----------------------------------------------------

    def tok(self, k=0) -> Token:
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j]

    def at(self, kind, text=None, k=0) -> bool:
        t = self.tok(k)
        return t.kind == kind and (text is None or t.text == text)

    def at_op(self, *texts, k=0) -> bool:
        t = self.tok(k)
        return t.kind == "op" and t.text in texts

    def next(self) -> Token:
        t = self.tok()
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg):
        t = self.tok()
        found = t.text or "<eof>"
        raise ParseError(t.loc, f"{msg}, found {found!r}", found=found)

    def expect_op(self, text) -> Token:
        if not self.at_op(text):
            self.error(f"expected {text!r}")
        return self.next()

    def expect_kind(self, kind, text=None) -> Token:
        if not self.at(kind, text):
            self.error(f"expected {text or kind}")
        return self.next()

    def expect_ident(self) -> Token:
        if not self.at("ident"):
            self.error("expected identifier")
        return self.next()

    def skip_semis(self):
        while self.at_op(";"):
            self.next()

    # -- declarations --------------------------------------------------------

    def type_name(self, allow_void=False) -> str:
        t = self.tok()
        if t.kind == "kw" and t.text in _TYPE_START:
            self.next()
            base = "bool" if t.text == "boolean" else t.text
            if self.at_op("["):
                if base != "int":
                    self.error("only int arrays are supported")
                self.next()
                self.expect_op("]")
                return "int[]"
            return base
        if allow_void and t.kind == "ident" and t.text == "void":
            self.next()
            return "void"
        self.error("expected a type")

    def function_def(self) -> FunctionDef:
        loc = self.tok().loc
        rtype = self.type_name(allow_void=True)
        name = self.expect_ident().text
        self.expect_op("(")
        params = []
        if not self.at_op(")"):
            while True:
                ploc = self.tok().loc
                ptype = self.type_name()
                pname = self.expect_ident().text
                params.append(Param(ptype, pname, loc=ploc))
                if self.at_op(","):
                    self.next()
                    continue
                break
        self.expect_op(")")
        if self.at_op(";"):
            self.next()
            return FunctionDef(name, rtype, tuple(params), (), None, None, (), loc=loc)
        self.expect_op("{")
        body, pre, post, behaviors = [], None, None, []
        while not self.at_op("}"):
            if self.at("eof"):
                self.error("unterminated function body")
            if self.at("at", "@pre"):
                if pre is not None:
                    self.error("duplicate @pre block")
                pre = self.pre_block()
            elif self.at("at", "@post"):
                if post is not None:
                    self.error("duplicate @post block")
                post = self.post_block()
            elif self.at("at", "@behavior"):
                behaviors.extend(self.behavior_block())
            else:
                body.append(self.statement())
        self.next()  # }
        return FunctionDef(name, rtype, tuple(params), tuple(body), pre, post,
                           tuple(behaviors), loc=loc)

    # -- annotation blocks ---------------------------------------------------

    def pre_block(self) -> NamedPredicate:
        loc = self.next().loc  # @pre
        name = self.expect_ident().text
        if self.at_op("{"):
            self.next()
            clauses = self.clause_list(stop_kinds=("op",), stop_text="}")
            self.expect_op("}")
        else:
            clauses = (self.pred_expr(),)
            self.expect_op(";")
        return NamedPredicate(name, clauses, loc=loc)

    def post_block(self) -> NamedPredicate:
        loc = self.next().loc  # @post
        name = self.expect_ident().text
        if self.at_op("{"):
            self.next()
            clauses = self.clause_list(stop_kinds=("op",), stop_text="}")
            self.expect_op("}")
        else:
            clauses = (self.pred_expr(),)
            self.expect_op(";")
        return NamedPredicate(name, clauses, loc=loc)

    def clause_list(self, stop_kinds, stop_text=None) -> tuple:
        clauses = []
        self.skip_semis()
        while True:
            t = self.tok()
            if t.kind in stop_kinds and (stop_text is None or t.text == stop_text):
                break
            clauses.append(self.pred_expr())
            self.skip_semis()
        if not clauses:
            self.error("expected at least one predicate clause")
        return tuple(clauses)

    def behavior_block(self) -> list:
        self.next()  # @behavior
        self.expect_ident()
        self.expect_op("{")
        out = []
        while not self.at_op("}"):
            out.append(self.behavior_entry())
        self.next()
        if not out:
            self.error("empty @behavior block")
        return out

    def behavior_entry(self) -> Behavior:
        t = self.tok()
        if not (t.kind == "kw" and t.text in BEHAVIOR_KINDS):
            self.error("expected good, bad or dontCare")
        loc = self.next().loc
        self.expect_op("{")
        self.expect_kind("ident", "input")
        self.expect_op("=")
        inp = self.val_map()
        self.skip_semis()
        self.expect_kind("ident", "output")
        self.expect_op("=")
        out = self.val_map()
        self.skip_semis()
        self.expect_op("}")
        self.skip_semis()
        return Behavior(t.text, inp, out, loc=loc)

    def val_map(self) -> dict:
        self.expect_op("{")
        m = {}
        while True:
            name = self.expect_ident().text
            self.expect_op("=")
            if name in m:
                self.error(f"duplicate binding for {name!r}")
            m[name] = self.value()
            if self.at_op(","):
                self.next()
                continue
            break
        self.expect_op("}")
        return m

    def value(self):
        t = self.tok()
        if t.kind == "int":
            self.next()
            return t.value
        if t.kind == "op" and t.text == "-" and self.at("int", k=1):
            self.next()
            return -self.next().value
        if t.kind == "kw" and t.text in ("true", "false"):
            self.next()
            return t.text == "true"
        if t.kind == "array":  # includes string literals
            self.next()
            return list(t.value)
        if t.kind == "op" and t.text == "{" and self.at_op("}", k=1):
            self.next()
            self.next()
            return []
        self.error("expected a value (int, bool, array or string)")

    # -- statements ------------------------------------------------------------

    def statement(self):
        t = self.tok()
        if t.kind == "kw" and t.text in _TYPE_START:
            return self.declaration()
        if t.kind == "kw":
            if t.text == "if":
                return self.if_stmt()
            if t.text == "while":
                return self.while_stmt()
            if t.text == "break":
                loc = self.next().loc
                self.expect_op(";")
                return Break(loc=loc)
            if t.text == "return":
                loc = self.next().loc
                value = None
                if not self.at_op(";"):
                    value = self.body_expr()
                self.expect_op(";")
                return Return(value, loc=loc)
        if t.kind == "ident":
            return self.ident_stmt()
        self.error("expected a statement")

    def declaration(self) -> VarDecl:
        loc = self.tok().loc
        vtype = self.type_name()
        name = self.expect_ident().text
        self.expect_op("=")
        init = self.body_expr()
        self.expect_op(";")
        return VarDecl(vtype, name, init, loc=loc)

    def ident_stmt(self):
        loc = self.tok().loc
        name = self.next().text
        if self.at_op("++") or self.at_op("--"):
            op = self.next().text
            self.expect_op(";")
            delta = Binary("+" if op == "++" else "-", Var(name, loc=loc),
                           IntLit(1), loc=loc)
            return Assign(name, None, delta, loc=loc)
        if self.at_op("="):
            self.next()
            value = self.body_expr()
            self.expect_op(";")
            return Assign(name, None, value, loc=loc)
        if self.at_op("["):
            self.next()
            idx = self.body_expr()
            self.expect_op("]")
            self.expect_op("=")
            value = self.body_expr()
            self.expect_op(";")
            return Assign(name, idx, value, loc=loc)
        if self.at_op("("):
            call = self.call_tail(name, loc)
            self.expect_op(";")
            return ExprStmt(call, loc=loc)
        self.error("expected assignment or call")

    def if_stmt(self) -> If:
        loc = self.next().loc
        self.expect_op("(")
        cond = self.body_expr()
        self.expect_op(")")
        then = self.stmt_or_block()
        els = None
        if self.at("kw", "else"):
            self.next()
            els = self.stmt_or_block()
        return If(cond, then, els, loc=loc)

    def while_stmt(self) -> While:
        loc = self.next().loc
        self.expect_op("(")
        cond = self.body_expr()
        self.expect_op(")")
        return While(cond, self.stmt_or_block(), loc=loc)

    def stmt_or_block(self) -> tuple:
        if self.at_op("{"):
            self.next()
            out = []
            while not self.at_op("}"):
                if self.at("eof"):
                    self.error("unterminated block")
                out.append(self.statement())
            self.next()
            return tuple(out)
        return (self.statement(),)

    # -- expressions -------------------------------------------------------------
    # precedence: => | || | && | ! | comparison chain | + - | * / % | unary - | postfix

    def body_expr(self):
        saved, self.in_predicate = self.in_predicate, False
        try:
            return self.implies()
        finally:
            self.in_predicate = saved

    def pred_expr(self):
        saved, self.in_predicate = self.in_predicate, True
        try:
            return self.implies()
        finally:
            self.in_predicate = saved

    def implies(self):
        left = self.or_expr()
        if self.at_op("=>"):
            loc = self.next().loc
            return Binary("=>", left, self.implies(), loc=loc)  # right-assoc
        return left

    def or_expr(self):
        e = self.and_expr()
        while self.at_op("||"):
            loc = self.next().loc
            e = Binary("||", e, self.and_expr(), loc=loc)
        return e

    def and_expr(self):
        e = self.not_expr()
        while self.at_op("&&"):
            loc = self.next().loc
            e = Binary("&&", e, self.not_expr(), loc=loc)
        return e

    def not_expr(self):
        if self.at_op("!"):
            loc = self.next().loc
            return Unary("!", self.not_expr(), loc=loc)
        return self.comparison()

    def comparison(self):
        first = self.additive()
        links = []
        while self.at_op(*_CMP):
            t = self.next()
            op = "=" if t.text in ("=", "==") else t.text
            links.append((op, t.loc, self.additive()))
        if not links:
            return first
        # a op1 b op2 c desugars to (a op1 b) && (b op2 c)
        left_operand = first
        conj = None
        for op, loc, rhs in links:
            pair = Binary(op, left_operand, rhs, loc=loc)
            conj = pair if conj is None else Binary("&&", conj, pair, loc=loc)
            left_operand = rhs
        return conj

    def additive(self):
        e = self.multiplicative()
        while self.at_op("+", "-"):
            t = self.next()
            e = Binary(t.text, e, self.multiplicative(), loc=t.loc)
        return e

    def multiplicative(self):
        e = self.unary()
        while self.at_op("*", "/", "%"):
            t = self.next()
            e = Binary(t.text, e, self.unary(), loc=t.loc)
        return e

    def unary(self):
        if self.at_op("-"):
            loc = self.next().loc
            return Unary("-", self.unary(), loc=loc)
        return self.postfix()

    def postfix(self):
        e = self.primary()
        while True:
            if self.at_op("["):
                loc = self.next().loc
                lo = self.sub_expr()
                if self.at_op(":"):
                    if not self.in_predicate:
                        raise ParseError(self.tok().loc,
                                         "slices are only allowed in predicates")
                    self.next()
                    hi = self.sub_expr()
                    self.expect_op("]")
                    e = Slice(e, lo, hi, loc=loc)
                else:
                    self.expect_op("]")
                    e = Index(e, lo, loc=loc)
            elif self.at_op(".") :
                loc = self.next().loc
                field = self.expect_ident()
                if field.text != "size":
                    raise ParseError(field.loc, f"unknown member {field.text!r}")
                e = Call("scasize", (e,), loc=loc)
            else:
                return e

    def sub_expr(self):
        return self.implies()

    def primary(self):
        t = self.tok()
        if t.kind == "int":
            self.next()
            return IntLit(t.value, loc=t.loc)
        if t.kind == "kw" and t.text in ("true", "false"):
            self.next()
            return BoolLit(t.text == "true", loc=t.loc)
        if t.kind == "kw" and t.text in ("forall", "exists"):
            if not self.in_predicate:
                raise ParseError(t.loc, "quantifiers are only allowed in predicates")
            return self.quantifier()
        if t.kind == "ident":
            self.next()
            if self.at_op("("):
                return self.call_tail(t.text, t.loc)
            return Var(t.text, loc=t.loc)
        if t.kind == "op" and t.text == "(":
            self.next()
            e = self.sub_expr()
            self.expect_op(")")
            return e
        if t.kind == "array":
            raise ParseError(t.loc, "array literals are only allowed in behavior values")
        self.error("expected an expression")

    def call_tail(self, name, loc) -> Call:
        self.expect_op("(")
        args = []
        if not self.at_op(")"):
            while True:
                args.append(self.sub_expr())
                if self.at_op(","):
                    self.next()
                    continue
                break
        self.expect_op(")")
        return Call(name, tuple(args), loc=loc)

    def quantifier(self) -> Quantifier:
        t = self.next()  # forall | exists
        binders = self.binder_list()
        body = self.quantifier_body()
        # multi-variable binder lists desugar to nested quantifiers
        for var, lo, hi, bloc in reversed(binders):
            body = Quantifier(t.text, var, lo, hi, body, loc=bloc)
        return body

    def binder_list(self):
        if self.at_op("(") and self.at("kw", "int", k=1):
            self.next()
            binders = [self.binder()]
            while self.at_op(","):
                self.next()
                if self.at_op(")"):  # trailing comma
                    break
                binders.append(self.binder())
            self.expect_op(")")
            return binders
        return [self.binder()]

    def binder(self):
        loc = self.tok().loc
        self.expect_kind("kw", "int")
        name = self.expect_ident().text
        self.expect_op(":")
        self.expect_op("[")
        lo = self.sub_expr()
        self.expect_op("..")
        hi = self.sub_expr()
        self.expect_op("]")
        return (name, lo, hi, loc)

    def quantifier_body(self):
        if self.at_op("("):
            self.next()
            e = self.sub_expr()
            self.expect_op(")")
            return e
        if self.at_op("{"):
            self.next()
            e = self.sub_expr()
            self.expect_op("}")
            return e
        self.error("expected quantifier body in (...) or {...}")
