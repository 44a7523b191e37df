"""Bounded behavior domains: declaration, counting, enumeration.

A domain file declares a finite value set per variable (entry parameters
plus rv), an optional filter predicate in the annotation language, and a
cap. The unfiltered pair count is computed up front from the declaration
alone; enumeration refuses to start when it exceeds the cap, so a typo in
a range fails fast instead of running for hours.

Enumeration order is fixed: parameters in signature order, then rv, each
variable ascending (arrays ordered by length, then elementwise). Two runs
over the same domain yield identical streams.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, DomainTooLarge
from .interp import Budget, eval_predicate
from .parser import parse_pred_expr
from .syntax import AnnotatedProgram, FunctionDef, copy_value

DEFAULT_CAP = 10_000_000


@dataclass(frozen=True)
class ScalarRange:
    lo: int
    hi: int

    def size(self):
        return max(0, self.hi - self.lo + 1)

    def values(self):
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True)
class ScalarSet:
    values_tuple: tuple

    def size(self):
        return len(self.values_tuple)

    def values(self):
        return self.values_tuple


@dataclass(frozen=True)
class ArrayDomain:
    len_lo: int
    len_hi: int
    elem_lo: int
    elem_hi: int

    def size(self):
        per_elem = max(0, self.elem_hi - self.elem_lo + 1)
        total = 0
        for n in range(self.len_lo, self.len_hi + 1):
            total += per_elem ** n
        return total

    def values(self):
        elems = range(self.elem_lo, self.elem_hi + 1)
        for n in range(self.len_lo, self.len_hi + 1):
            for tup in itertools.product(elems, repeat=n):
                yield list(tup)


@dataclass(frozen=True)
class DomainSpec:
    var_domains: tuple  # ((name, domain), ...) in file order
    filter_source: Optional[str]
    filter_expr: object
    cap: int
    labels: dict  # {"source": "behaviors"|"entry"|"function", ["name": fn]}

    def domain_of(self, name):
        for n, d in self.var_domains:
            if n == name:
                return d
        return None

    @property
    def var_names(self):
        return [n for n, _ in self.var_domains]


def _parse_var_domain(name, obj):
    if not isinstance(obj, dict):
        raise DomainError(f"domain for {name} must be an object")
    keys = set(obj)
    if keys == {"range"}:
        lo, hi = obj["range"]
        _want_ints(name, lo, hi)
        return ScalarRange(lo, hi)
    if keys == {"set"}:
        vals = obj["set"]
        if not isinstance(vals, list) or not vals:
            raise DomainError(f"set for {name} must be a non-empty list")
        if all(isinstance(v, bool) for v in vals):
            out = tuple(sorted(set(vals)))
        elif all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
            out = tuple(sorted(set(vals)))
        else:
            raise DomainError(f"set for {name} must be all ints or all booleans")
        return ScalarSet(out)
    if keys == {"lenRange", "elemRange"}:
        llo, lhi = obj["lenRange"]
        elo, ehi = obj["elemRange"]
        _want_ints(name, llo, lhi, elo, ehi)
        if llo < 0:
            raise DomainError(f"lenRange for {name} must be non-negative")
        return ArrayDomain(llo, lhi, elo, ehi)
    raise DomainError(
        f"domain for {name} needs exactly one of: range, set, lenRange+elemRange")


def _want_ints(name, *vals):
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, int):
            raise DomainError(f"bounds for {name} must be integers")


def load_domain(obj) -> DomainSpec:
    """Build a DomainSpec from a parsed JSON object."""
    if not isinstance(obj, dict) or "vars" not in obj:
        raise DomainError("domain file must be an object with a 'vars' key")
    unknown = set(obj) - {"vars", "filter", "cap", "labels"}
    if unknown:
        raise DomainError(f"unknown domain keys: {', '.join(sorted(unknown))}")
    var_domains = tuple(
        (name, _parse_var_domain(name, spec)) for name, spec in obj["vars"].items())
    filter_source = obj.get("filter")
    filter_expr = parse_pred_expr(filter_source) if filter_source else None
    cap = obj.get("cap", DEFAULT_CAP)
    if isinstance(cap, bool) or not isinstance(cap, int) or cap <= 0:
        raise DomainError("cap must be a positive integer")
    labels = obj.get("labels", {"source": "behaviors"})
    if not isinstance(labels, dict) or "source" not in labels:
        raise DomainError("labels must be an object with a 'source' key")
    if labels["source"] not in ("behaviors", "entry", "function"):
        raise DomainError("labels.source must be behaviors, entry, or function")
    if labels["source"] == "function" and not labels.get("name"):
        raise DomainError("labels.source=function needs a 'name'")
    return DomainSpec(var_domains, filter_source, filter_expr, cap, labels)


def load_domain_file(path) -> DomainSpec:
    with open(path, "r", encoding="utf-8") as f:
        return load_domain(json.load(f))


def _aligned_vars(domain: DomainSpec, fn: FunctionDef):
    """Pair every enumerated variable with its domain, parameters first in
    signature order, then rv. Every parameter must be covered; rv must be
    covered exactly when the entry returns a value."""
    names = [p.name for p in fn.params]
    missing = [n for n in names if domain.domain_of(n) is None]
    if missing:
        raise DomainError(f"no domain for parameter(s): {', '.join(missing)}")
    extra = [n for n in domain.var_names if n not in names and n != "rv"]
    if extra:
        raise DomainError(f"domain names unknown variable(s): {', '.join(extra)}")
    ordered = [(n, domain.domain_of(n)) for n in names]
    rv = domain.domain_of("rv")
    if fn.return_type == "void":
        if rv is not None:
            raise DomainError("rv domain given but the entry returns nothing")
    else:
        if rv is None:
            raise DomainError("missing domain for rv")
        ordered.append(("rv", rv))
    return ordered, [p.type for p in fn.params]


def _check_var_types(ordered, param_types, fn):
    for (name, dom), t in zip(ordered, param_types):
        if t == "int[]" and not isinstance(dom, ArrayDomain):
            raise DomainError(f"{name} is int[], needs lenRange+elemRange")
        if t in ("int", "bool") and isinstance(dom, ArrayDomain):
            raise DomainError(f"{name} is {t}, cannot use an array domain")
        if t == "bool" and isinstance(dom, ScalarRange):
            raise DomainError(f"{name} is bool, use a set of booleans")


def predicted_count(domain: DomainSpec, fn: FunctionDef) -> int:
    """Unfiltered pair count; the cap is checked against this number."""
    ordered, param_types = _aligned_vars(domain, fn)
    _check_var_types(ordered, param_types, fn)
    count = 1
    for _, dom in ordered:
        count *= dom.size()
    return count


def enumerate_pairs(domain: DomainSpec, program: AnnotatedProgram,
                    fn: FunctionDef, budget_maker=Budget):
    """Yield (input, output) valuations in the fixed order, filter applied.

    Raises DomainTooLarge before yielding anything when the unfiltered
    count exceeds the cap. A filter that evaluates undefined on a pair
    excludes that pair, same as false."""
    count = predicted_count(domain, fn)
    if count > domain.cap:
        raise DomainTooLarge(count, domain.cap)
    ordered, _ = _aligned_vars(domain, fn)
    names = [n for n, _ in ordered]
    pools = [list(dom.values()) for _, dom in ordered]
    n_inputs = len(fn.params)
    for combo in itertools.product(*pools):
        vals = [copy_value(v) for v in combo]
        inp = dict(zip(names[:n_inputs], vals[:n_inputs]))
        out = dict(zip(names[n_inputs:], vals[n_inputs:]))
        if domain.filter_expr is not None:
            env = {k: copy_value(v) for k, v in inp.items()}
            env.update({k: copy_value(v) for k, v in out.items()})
            keep = eval_predicate(program, domain.filter_expr, env, budget_maker())
            if not keep.is_true():
                continue
        yield inp, out


def enumerate_inputs(domain: DomainSpec, program: AnnotatedProgram,
                     fn: FunctionDef, budget_maker=Budget):
    """Distinct input valuations in enumeration order (outputs collapsed).

    The filter may mention rv, so an input is kept when any of its pairs
    passes the filter; with an input-only filter this is the obvious
    restriction."""
    last_key = object()
    for inp, _ in enumerate_pairs(domain, program, fn, budget_maker):
        key = tuple(sorted((k, tuple(v) if isinstance(v, list) else v)
                           for k, v in inp.items()))
        if key != last_key:
            last_key = key
            yield inp
