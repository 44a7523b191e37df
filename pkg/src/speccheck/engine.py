"""Per-behavior evaluation: truth values in, verdicts out.

A verdict bundles everything one pause point shows the developer: which
behavior and phase, the truth values that were computed, what was required,
the produced output when the implementation ran, and the selected action.
The session layer owns the cursor and event log; this module is stateless.

Two modes per behavior:
  * interface mode (entry has no body): the precondition is judged on the
    listed input, the postcondition on the listed pair.
  * implementation mode: the precondition is judged on the listed input,
    then the entry runs on that input and the produced pair is judged,
    branching on whether the input was admitted. Acceptability of the
    produced output (g) is resolved from the listed good behaviors when
    possible, otherwise the caller must ask the developer.

dontCare behaviors are never executed and carry no output obligation; their
second pause point reports that nothing applies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .actions import (Action, MakeWellDefined, Or, PRE, ReviseImpl, Skip,
                      Witness, action_to_json, neg_triple_action,
                      postcondition_action, precondition_action, triple_action)
from .interp import (Budget, BudgetExceeded, ExecFault, PredicateOutcome,
                     Returned, behavior_post_env, eval_named_predicate,
                     eval_pre_on_behavior, exec_function)
from .syntax import (AnnotatedProgram, DONT_CARE, FunctionDef, GOOD,
                     copy_value, format_valuation, valuation_key, values_equal)
from .tribool import TRUE, TriBool

PRE_PHASE = "pre"
POST_PHASE = "post"


@dataclass(frozen=True)
class Verdict:
    behavior_index: int
    kind: str
    phase: str
    action: Action
    p_truth: Optional[TriBool] = None
    required_p: Optional[bool] = None
    q_truth: Optional[TriBool] = None
    required_q: Optional[bool] = None
    g: Optional[bool] = None
    g_source: Optional[str] = None  # "behaviors" | "oracle"
    exec_output: Optional[dict] = None
    exec_note: str = ""
    warnings: tuple = ()

    def render(self) -> str:
        bits = [f"behavior {self.behavior_index + 1} ({self.kind}) {self.phase}:"]
        if self.phase == PRE_PHASE:
            bits.append(f"P = {self.p_truth.truth} (required "
                        f"{'true' if self.required_p else 'false'})")
        else:
            if self.exec_note:
                bits.append(self.exec_note)
            elif self.exec_output is not None:
                bits.append(f"S(i) = {format_valuation(self.exec_output)}")
            if self.g is not None:
                bits.append(f"g = {str(self.g).lower()} ({self.g_source})")
            if self.q_truth is not None:
                req = ("" if self.required_q is None else
                       f" (required {'true' if self.required_q else 'false'})")
                bits.append(f"Q = {self.q_truth.truth}{req}")
            elif self.kind == DONT_CARE:
                bits.append("Q not applicable (dontCare)")
        body = " ".join(bits)
        return f"{body} -> {self.action.render()}"

    def to_json(self):
        j = {
            "behaviorIndex": self.behavior_index,
            "kind": self.kind,
            "phase": self.phase,
            "action": action_to_json(self.action),
        }
        if self.p_truth is not None:
            j["pTruth"] = self.p_truth.truth
            if self.p_truth.fault is not None:
                j["pFault"] = str(self.p_truth.fault)
        if self.required_p is not None:
            j["requiredP"] = self.required_p
        if self.q_truth is not None:
            j["qTruth"] = self.q_truth.truth
            if self.q_truth.fault is not None:
                j["qFault"] = str(self.q_truth.fault)
        if self.required_q is not None:
            j["requiredQ"] = self.required_q
        if self.g is not None:
            j["g"] = self.g
            j["gSource"] = self.g_source
        if self.exec_output is not None:
            j["execOutput"] = {k: (list(v) if isinstance(v, list) else v)
                               for k, v in self.exec_output.items()}
        if self.exec_note:
            j["execNote"] = self.exec_note
        if self.warnings:
            j["warnings"] = list(self.warnings)
        j["rendered"] = self.render()
        return j


@dataclass(frozen=True)
class OracleQuery:
    """The tool cannot tell whether the produced output is acceptable."""
    behavior_index: int
    input: dict
    output: dict

    def render(self) -> str:
        return (f"is {format_valuation(self.output)} acceptable for input "
                f"{format_valuation(self.input)}? [y/n]")

    def to_json(self):
        return {
            "behaviorIndex": self.behavior_index,
            "input": {k: (list(v) if isinstance(v, list) else v)
                      for k, v in self.input.items()},
            "output": {k: (list(v) if isinstance(v, list) else v)
                       for k, v in self.output.items()},
            "prompt": self.render(),
        }


@dataclass(frozen=True)
class PendingExec:
    """Execution finished but g needs the developer's answer."""
    behavior_index: int
    produced: dict
    display_output: dict
    p_truth: TriBool
    warnings: tuple
    query: OracleQuery


def _warning_strings(which: str, outcome: PredicateOutcome) -> tuple:
    return tuple(
        f"{which} clause {c.index + 1} was undefined ({c.truth.fault}) "
        f"but the verdict was already decided"
        for c in outcome.masked_faults
    )


def pre_verdict(program: AnnotatedProgram, fn: FunctionDef, index: int,
                budget_maker=Budget) -> Verdict:
    b = fn.behaviors[index]
    outcome = eval_pre_on_behavior(program, fn, b, budget_maker())
    required = b.kind != DONT_CARE
    action = precondition_action(b.kind, outcome.truth, Witness(b.input))
    return Verdict(index, b.kind, PRE_PHASE, action,
                   p_truth=outcome.truth, required_p=required,
                   warnings=_warning_strings("pre", outcome))


def dontcare_post_verdict(fn: FunctionDef, index: int) -> Verdict:
    b = fn.behaviors[index]
    return Verdict(index, b.kind, POST_PHASE,
                   Skip("no output obligation for a dontCare behavior"))


def spec_post_verdict(program: AnnotatedProgram, fn: FunctionDef, index: int,
                      budget_maker=Budget) -> Verdict:
    b = fn.behaviors[index]
    outcome = eval_named_predicate(program, fn.post, behavior_post_env(fn, b),
                                   budget_maker(), default=TRUE)
    action = postcondition_action(b.kind, outcome.truth,
                                  Witness(b.input, b.output))
    return Verdict(index, b.kind, POST_PHASE, action,
                   q_truth=outcome.truth, required_q=b.kind == GOOD,
                   warnings=_warning_strings("post", outcome))


def _produced_outputs(fn: FunctionDef, inputs: dict, returned: Returned):
    """Full candidate output valuation, and the display subset (return value
    plus only the arrays the call actually changed)."""
    produced = {}
    display = {}
    if fn.return_type != "void":
        produced["rv"] = returned.rv
        display["rv"] = returned.rv
    for name, final in returned.final_ref_state.items():
        produced[name] = final
        if not values_equal(final, inputs[name]):
            display[name] = final
    return produced, display


def _match_good_output(fn: FunctionDef, index: int, produced: dict):
    """True when some listed good behavior with the same input constrains
    only output values the execution reproduced."""
    me = fn.behaviors[index]
    key = valuation_key(me.input)
    for b in fn.behaviors:
        if b.kind != GOOD or valuation_key(b.input) != key:
            continue
        if all(k in produced and values_equal(produced[k], v)
               for k, v in b.output.items()):
            return True
    return False


def impl_post_step(program: AnnotatedProgram, fn: FunctionDef, index: int,
                   p_truth: TriBool, budget_maker=Budget):
    """Run the entry on the behavior's input and judge the produced pair.

    Returns a Verdict when it can be decided without the developer, else a
    PendingExec holding the oracle query. p_truth comes from the pre pause
    of the same behavior (the predicates may have been edited in between,
    so callers re-evaluate rather than caching across edits)."""
    b = fn.behaviors[index]
    if p_truth.is_undefined():
        return Verdict(index, b.kind, POST_PHASE,
                       MakeWellDefined(PRE, Witness(b.input)),
                       p_truth=p_truth,
                       exec_note="not run: precondition undefined on this input")
    args = [copy_value(b.input[p.name]) for p in fn.params]
    outcome = exec_function(program, fn, args, budget_maker())
    if isinstance(outcome, ExecFault):
        return Verdict(index, b.kind, POST_PHASE,
                       ReviseImpl(Witness(b.input)),
                       p_truth=p_truth,
                       exec_note=f"S(i) faulted: {outcome.fault}")
    if isinstance(outcome, BudgetExceeded):
        return Verdict(index, b.kind, POST_PHASE,
                       Or((ReviseImpl(Witness(b.input)), Skip())),
                       p_truth=p_truth,
                       exec_note=f"S(i) exceeded the {outcome.kind} budget "
                                 "(revise the implementation, or skip and "
                                 "raise the budget)")
    produced, display = _produced_outputs(fn, b.input, outcome)
    if _match_good_output(fn, index, produced):
        return _judge_produced(program, fn, index, p_truth, produced, display,
                               True, "behaviors", budget_maker)
    query = OracleQuery(index, b.input, display)
    return PendingExec(index, produced, display, p_truth, (), query)


def finish_impl_post(program: AnnotatedProgram, fn: FunctionDef,
                     pending: PendingExec, g: bool,
                     budget_maker=Budget) -> Verdict:
    return _judge_produced(program, fn, pending.behavior_index,
                           pending.p_truth, pending.produced,
                           pending.display_output, g, "oracle", budget_maker)


def batch_exec_check(program: AnnotatedProgram, fn: FunctionDef, index: int,
                     budget_maker=Budget) -> dict:
    """Non-interactive execution check for one good behavior: the produced
    output must reproduce some listed good output for the same input.
    status: ok | mismatch | budget."""
    b = fn.behaviors[index]
    head = f"behavior {index + 1} (good) exec:"
    args = [copy_value(b.input[p.name]) for p in fn.params]
    outcome = exec_function(program, fn, args, budget_maker())
    if isinstance(outcome, ExecFault):
        w = Witness(b.input)
        return {"behaviorIndex": index, "status": "mismatch",
                "line": f"{head} S(i) faulted: {outcome.fault} "
                        f"-> {ReviseImpl(w).render()}"}
    if isinstance(outcome, BudgetExceeded):
        return {"behaviorIndex": index, "status": "budget",
                "line": f"{head} S(i) exceeded the {outcome.kind} budget"}
    produced, display = _produced_outputs(fn, b.input, outcome)
    if _match_good_output(fn, index, produced):
        return {"behaviorIndex": index, "status": "ok",
                "line": f"{head} S(i) = {format_valuation(display)} -> skip",
                "output": {k: (list(v) if isinstance(v, list) else v)
                           for k, v in display.items()}}
    w = Witness(b.input, display)
    return {"behaviorIndex": index, "status": "mismatch",
            "line": f"{head} S(i) = {format_valuation(display)} matches no "
                    f"listed good output -> {ReviseImpl(w).render()}",
            "output": {k: (list(v) if isinstance(v, list) else v)
                       for k, v in display.items()}}


def _judge_produced(program, fn, index, p_truth, produced, display, g,
                    g_source, budget_maker) -> Verdict:
    b = fn.behaviors[index]
    env = {k: copy_value(v) for k, v in b.input.items()}
    for k, v in produced.items():
        env[k] = copy_value(v)
    outcome = eval_named_predicate(program, fn.post, env, budget_maker(),
                                   default=TRUE)
    witness = Witness(b.input, display)
    table = triple_action if p_truth.is_true() else neg_triple_action
    action = table(g, outcome.truth, witness)
    return Verdict(index, b.kind, POST_PHASE, action,
                   p_truth=p_truth, q_truth=outcome.truth,
                   g=g, g_source=g_source, exec_output=display,
                   warnings=_warning_strings("post", outcome))
