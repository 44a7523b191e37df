"""Accuracy analysis over labeled behavior sets.

The manual specification is compared against developer intent expressed as
labels. A bad pair the specification admits is an under-constraint witness;
a good pair it rejects is an over-constraint witness; a pair where
evaluation hits a fault is an undefined witness. dontCare pairs impose
nothing and are not classified.

Labels come from one of three sources: the listed behaviors themselves, a
reference run of the entry implementation over an enumerated domain (its
produced output is good, every other enumerated output for that input is
bad), or a named function used the same way. When the reference itself
faults on an input, all pairs for that input are labeled dontCare.

Witness lists are capped (default 100 per category) but counts are exact,
and lists are sorted by valuation so the report does not depend on how the
work was chunked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .domain import DomainSpec, enumerate_pairs
from .errors import DomainError, InconsistentLabels
from .interp import Budget, Returned, eval_named_predicate, exec_function
from .syntax import (AnnotatedProgram, BAD, Behavior, DONT_CARE, FunctionDef,
                     GOOD, copy_value, format_valuation, valuation_key)
from .tribool import FALSE, TRUE, TriBool, from_bool, tri_not, tri_or

DEFAULT_WITNESS_CAP = 100


def consistent_behaviors(behaviors: Iterable[Behavior]):
    """Yield behaviors, deduplicating exact repeats and raising on the same
    pair carrying two different labels."""
    seen = {}
    for b in behaviors:
        key = (valuation_key(b.input), valuation_key(b.output))
        prev = seen.get(key)
        if prev is None:
            seen[key] = b.kind
            yield b
        elif prev != b.kind:
            raise InconsistentLabels(b.input, b.output, (prev, b.kind))


# -- specifications as satisfaction predicates -----------------------------------

@dataclass(frozen=True)
class TableSpec:
    """A specification read off a labeled set: admit the inputs that appear
    in good or bad pairs, accept exactly the good pairs."""
    inputs: frozenset
    pairs: frozenset

    def admits_input(self, inp) -> bool:
        return valuation_key(inp) in self.inputs

    def satisfies(self, inp, out) -> bool:
        if valuation_key(inp) not in self.inputs:
            return True
        return (valuation_key(inp), valuation_key(out)) in self.pairs


def generate_spec(behaviors: Iterable[Behavior]) -> TableSpec:
    inputs = set()
    pairs = set()
    for b in consistent_behaviors(behaviors):
        if b.kind == DONT_CARE:
            continue
        ikey = valuation_key(b.input)
        inputs.add(ikey)
        if b.kind == GOOD:
            pairs.add((ikey, valuation_key(b.output)))
    return TableSpec(frozenset(inputs), frozenset(pairs))


def program_satisfies(program: AnnotatedProgram, fn: FunctionDef,
                      inp: dict, out: dict, budget_maker=Budget) -> TriBool:
    """Whether the pair satisfies the written pre/post: admitted implies
    accepted. A rejected input satisfies vacuously without evaluating the
    postcondition."""
    pre_env = {k: copy_value(v) for k, v in inp.items()}
    p = eval_named_predicate(program, fn.pre, pre_env, budget_maker(),
                             default=FALSE).truth
    if p.is_false():
        return TRUE
    env = {k: copy_value(v) for k, v in inp.items()}
    for k, v in out.items():
        env[k] = copy_value(v)
    q = eval_named_predicate(program, fn.post, env, budget_maker(),
                             default=TRUE).truth
    return tri_or(tri_not(p), q)


def table_satisfier(table: TableSpec) -> Callable:
    return lambda inp, out: from_bool(table.satisfies(inp, out))


def spec_satisfier(program: AnnotatedProgram, fn: FunctionDef,
                   budget_maker=Budget) -> Callable:
    return lambda inp, out: program_satisfies(program, fn, inp, out, budget_maker)


# -- label sources ----------------------------------------------------------------

def labeled_from_behaviors(fn: FunctionDef):
    return consistent_behaviors(fn.behaviors)


def labeled_from_reference(domain: DomainSpec, program: AnnotatedProgram,
                           fn: FunctionDef, reference: FunctionDef,
                           budget_maker=Budget):
    """Label each enumerated pair by running a reference implementation on
    the inputs: its output is the one good pair, anything else is bad. A
    reference fault or exhausted budget makes that input's pairs dontCare."""
    if not reference.body:
        raise DomainError(f"label source {reference.name} has no body")
    cache_key = None
    cache_out = None
    for inp, out in enumerate_pairs(domain, program, fn, budget_maker):
        key = valuation_key(inp)
        if key != cache_key:
            cache_key = key
            args = [copy_value(inp[p.name]) for p in reference.params]
            got = exec_function(program, reference, args, budget_maker())
            if isinstance(got, Returned):
                cache_out = valuation_key({"rv": got.rv})
            else:
                cache_out = None  # reference undefined here
        if cache_out is None:
            kind = DONT_CARE
        elif valuation_key(out) == cache_out:
            kind = GOOD
        else:
            kind = BAD
        yield Behavior(kind, inp, out)


def labeled_set(domain: Optional[DomainSpec], program: AnnotatedProgram,
                fn: FunctionDef, budget_maker=Budget):
    """Resolve the domain's labels.source into a behavior stream."""
    if domain is None or domain.labels["source"] == "behaviors":
        return labeled_from_behaviors(fn)
    if domain.labels["source"] == "entry":
        ref = fn
    else:
        name = domain.labels["name"]
        ref = program.function(name)
        if ref is None:
            raise DomainError(f"label source function not found: {name}")
    return labeled_from_reference(domain, program, fn, ref, budget_maker)


# -- reports ---------------------------------------------------------------------

ACCURATE = "accurate"
UNDER = "under-constrained"
OVER = "over-constrained"
BOTH = "both"
UNDECIDABLE = "undecidable-at-this-domain"


def _witness_sort_key(b: Behavior):
    return (valuation_key(b.input), valuation_key(b.output))


@dataclass
class AccuracyReport:
    verdict: str
    under_witnesses: list
    over_witnesses: list
    undefined_witnesses: list
    under_count: int
    over_count: int
    undefined_count: int
    checked_count: int
    witness_cap: int
    truncated: bool = False

    def render(self) -> str:
        lines = [f"verdict: {self.verdict}"
                 + (" (stopped at first witness)" if self.truncated else ""),
                 f"checked {self.checked_count} labeled behaviors"]
        for label, count, wits in (
                ("under-constrained", self.under_count, self.under_witnesses),
                ("over-constrained", self.over_count, self.over_witnesses),
                ("undefined", self.undefined_count, self.undefined_witnesses)):
            lines.append(f"{label}: {count} witness(es)")
            shown = wits[:self.witness_cap]
            for b in shown:
                lines.append(f"  {b.kind}: input {format_valuation(b.input)} "
                             f"output {format_valuation(b.output)}")
            if count > len(shown) and not self.truncated:
                lines.append(f"  ... {count - len(shown)} more")
        return "\n".join(lines)

    def to_json(self):
        def blist(bs):
            return [{"kind": b.kind,
                     "input": {k: (list(v) if isinstance(v, list) else v)
                               for k, v in b.input.items()},
                     "output": {k: (list(v) if isinstance(v, list) else v)
                                for k, v in b.output.items()}}
                    for b in bs]
        return {
            "verdict": self.verdict,
            "underCount": self.under_count,
            "overCount": self.over_count,
            "undefinedCount": self.undefined_count,
            "checkedCount": self.checked_count,
            "witnessCap": self.witness_cap,
            "truncated": self.truncated,
            "underWitnesses": blist(self.under_witnesses),
            "overWitnesses": blist(self.over_witnesses),
            "undefinedWitnesses": blist(self.undefined_witnesses),
        }


def check_accuracy(satisfies: Callable, behaviors: Iterable[Behavior],
                   witness_cap: int = DEFAULT_WITNESS_CAP,
                   early_exit: bool = False) -> AccuracyReport:
    """Classify every labeled behavior against a satisfaction predicate.

    satisfies(input, output) -> TriBool. dontCare behaviors are counted as
    checked but never produce witnesses. With early_exit the scan stops at
    the first witness of any category and counts are lower bounds."""
    under, over, undef = [], [], []
    n_under = n_over = n_undef = checked = 0
    for b in behaviors:
        checked += 1
        if b.kind == DONT_CARE:
            continue
        t = satisfies(b.input, b.output)
        if t.is_undefined():
            n_undef += 1
            if len(undef) < witness_cap:
                undef.append(b)
        elif b.kind == BAD and t.is_true():
            n_under += 1
            if len(under) < witness_cap:
                under.append(b)
        elif b.kind == GOOD and t.is_false():
            n_over += 1
            if len(over) < witness_cap:
                over.append(b)
        else:
            continue
        if early_exit:
            break
    for ws in (under, over, undef):
        ws.sort(key=_witness_sort_key)
    if n_under and n_over:
        verdict = BOTH
    elif n_under:
        verdict = UNDER
    elif n_over:
        verdict = OVER
    elif n_undef:
        verdict = UNDECIDABLE
    else:
        verdict = ACCURATE
    return AccuracyReport(verdict, under, over, undef,
                          n_under, n_over, n_undef, checked, witness_cap,
                          truncated=early_exit and bool(n_under + n_over + n_undef))


@dataclass
class CompareReport:
    equivalent: bool
    only_manual: list   # pairs the manual spec admits and the table rejects
    only_table: list    # pairs the table admits and the manual spec rejects
    undefined_pairs: list
    only_manual_count: int
    only_table_count: int
    undefined_count: int
    checked_count: int
    witness_cap: int

    def render(self) -> str:
        head = ("equivalent on this domain" if self.equivalent
                else "specs disagree on this domain")
        lines = [head, f"checked {self.checked_count} pairs",
                 f"admitted only by the manual spec: {self.only_manual_count}",
                 f"admitted only by the generated spec: {self.only_table_count}",
                 f"undefined under the manual spec: {self.undefined_count}"]
        for name, pairs in (("manual-only", self.only_manual),
                            ("generated-only", self.only_table),
                            ("undefined", self.undefined_pairs)):
            for inp, out in pairs[:self.witness_cap]:
                lines.append(f"  {name}: input {format_valuation(inp)} "
                             f"output {format_valuation(out)}")
        return "\n".join(lines)

    def to_json(self):
        def plist(ps):
            return [{"input": {k: (list(v) if isinstance(v, list) else v)
                               for k, v in i.items()},
                     "output": {k: (list(v) if isinstance(v, list) else v)
                                for k, v in o.items()}}
                    for i, o in ps]
        return {
            "equivalent": self.equivalent,
            "onlyManualCount": self.only_manual_count,
            "onlyTableCount": self.only_table_count,
            "undefinedCount": self.undefined_count,
            "checkedCount": self.checked_count,
            "onlyManual": plist(self.only_manual),
            "onlyTable": plist(self.only_table),
            "undefinedPairs": plist(self.undefined_pairs),
        }


def compare_specs(manual: Callable, table: Callable,
                  pairs: Iterable, witness_cap: int = DEFAULT_WITNESS_CAP
                  ) -> CompareReport:
    """Report every enumerated pair the two predicates classify differently.

    Pairs where the manual side is undefined cannot be compared and are
    reported separately; equivalence requires none of those either."""
    only_m, only_t, undef = [], [], []
    n_m = n_t = n_u = checked = 0
    for inp, out in pairs:
        checked += 1
        a = manual(inp, out)
        b = table(inp, out)
        if a.is_undefined() or b.is_undefined():
            n_u += 1
            if len(undef) < witness_cap:
                undef.append((inp, out))
        elif a.is_true() and b.is_false():
            n_m += 1
            if len(only_m) < witness_cap:
                only_m.append((inp, out))
        elif a.is_false() and b.is_true():
            n_t += 1
            if len(only_t) < witness_cap:
                only_t.append((inp, out))
    key = lambda p: (valuation_key(p[0]), valuation_key(p[1]))
    for ps in (only_m, only_t, undef):
        ps.sort(key=key)
    return CompareReport(n_m + n_t + n_u == 0, only_m, only_t, undef,
                         n_m, n_t, n_u, checked, witness_cap)
