"""Refinement sessions: cursor, pause points, edits, event log, persistence.

A session walks the entry function's behaviors with two pause points each:
one after the precondition verdict, one after the postcondition or
execution verdict. Edits apply atomically (a candidate program is parsed
and validated before anything is replaced) and re-evaluation resumes from
the current behavior's first pause point.

Every state transition appends an event; replaying the log over the initial
source reconstructs the session exactly, which is also how session files
are loaded. Evaluation is deterministic, so replay is too. Accuracy runs
are side-effect-free and deliberately not part of the replayable log.
"""

from __future__ import annotations

import dataclasses
import json
import uuid
from dataclasses import dataclass
from typing import Optional

from . import engine
from .accuracy import (AccuracyReport, check_accuracy, labeled_set,
                       spec_satisfier)
from .actions import Or
from .domain import DomainSpec, load_domain_file
from .engine import (OracleQuery, PendingExec, POST_PHASE, PRE_PHASE, Verdict)
from .errors import (Diagnostic, DomainTooLarge, SessionStateError,
                     SpecCheckError, ValidationFailed, VersionMismatch)
from .interp import Budget, DEFAULT_DEPTH_BUDGET, DEFAULT_STEP_BUDGET
from .parser import (parse, parse_behaviors, parse_clauses, parse_stmts)
from .pretty import format_behavior, format_expr, format_stmts, pretty_print
from .syntax import (AnnotatedProgram, DONT_CARE, FunctionDef,
                     NamedPredicate)
from .validate import validate

SAVE_FORMAT = "speccheck-session"
SAVE_VERSION = 1

EDIT_KINDS = ("pre", "post", "body", "behaviors-append", "full-source")


@dataclass(frozen=True)
class Done:
    behavior_count: int

    def render(self):
        return f"done: all {self.behavior_count} behaviors examined"

    def to_json(self):
        return {"done": True, "behaviorCount": self.behavior_count}


@dataclass
class Settings:
    step_budget: int = DEFAULT_STEP_BUDGET
    depth_budget: int = DEFAULT_DEPTH_BUDGET

    def budget(self):
        return Budget(self.step_budget, self.depth_budget)

    def to_json(self):
        return {"stepBudget": self.step_budget, "depthBudget": self.depth_budget}


def _errors(diags):
    return [d for d in diags if d.severity == "error"]


class Session:
    """One refinement dialogue. Not thread-safe; callers serialize access."""

    def __init__(self, source: str, settings: Optional[Settings] = None,
                 session_id: Optional[str] = None):
        program = parse(source)
        diags = validate(program)
        if _errors(diags):
            raise ValidationFailed(diags)
        self.id = session_id or uuid.uuid4().hex[:12]
        self.settings = settings or Settings()
        self.initial_source = source
        self.source_text = source
        self.program = program
        self.diagnostics = diags  # warnings from the last successful (re)parse
        self.cursor = 0
        self.phase = PRE_PHASE
        self.pending: Optional[PendingExec] = None
        self.latest_verdict: Optional[Verdict] = None
        self.choice_open = False  # latest verdict has an unresolved Or
        self.last_pause: Optional[int] = None  # behavior index of latest pause
        self.events: list = []
        self._log({"kind": "created", "source": source})

    # -- derived state -------------------------------------------------------

    @property
    def entry(self) -> FunctionDef:
        return self.program.entry_fn

    @property
    def spec_only(self) -> bool:
        return not self.entry.body

    @property
    def behavior_count(self) -> int:
        return len(self.entry.behaviors)

    @property
    def done(self) -> bool:
        return self.cursor >= self.behavior_count

    def _budget_maker(self):
        return self.settings.budget

    def _log(self, event):
        self.events.append(event)

    # -- the loop -------------------------------------------------------------

    def step(self):
        """Advance to the next pause point."""
        if self.pending is not None:
            raise SessionStateError("a query is pending; answer it first")
        result = self._advance()
        if isinstance(result, Verdict):
            self.latest_verdict = result
            self.choice_open = isinstance(result.action, Or)
            self.last_pause = result.behavior_index
            self._log({"kind": "step", "result": result.to_json()})
        elif isinstance(result, OracleQuery):
            self.last_pause = result.behavior_index
            self._log({"kind": "step", "result": {"query": result.to_json()}})
        else:
            self._log({"kind": "step", "result": result.to_json()})
        return result

    def _advance(self):
        if self.done:
            return Done(self.behavior_count)
        fn = self.entry
        idx = self.cursor
        if self.phase == PRE_PHASE:
            v = engine.pre_verdict(self.program, fn, idx, self._budget_maker())
            self.phase = POST_PHASE
            return v
        # post pause
        b = fn.behaviors[idx]
        if b.kind == DONT_CARE:
            v = engine.dontcare_post_verdict(fn, idx)
            self._next_behavior()
            return v
        if self.spec_only:
            v = engine.spec_post_verdict(self.program, fn, idx, self._budget_maker())
            self._next_behavior()
            return v
        p = engine.pre_verdict(self.program, fn, idx, self._budget_maker()).p_truth
        result = engine.impl_post_step(self.program, fn, idx, p, self._budget_maker())
        if isinstance(result, PendingExec):
            self.pending = result
            return result.query
        self._next_behavior()
        return result

    def _next_behavior(self):
        self.cursor += 1
        self.phase = PRE_PHASE

    def answer_oracle(self, answer: bool) -> Verdict:
        if self.pending is None:
            raise SessionStateError("no pending query to answer")
        v = engine.finish_impl_post(self.program, self.entry, self.pending,
                                    answer, self._budget_maker())
        self.pending = None
        self.latest_verdict = v
        self.choice_open = isinstance(v.action, Or)
        self.last_pause = v.behavior_index
        self._next_behavior()
        self._log({"kind": "oracle", "answer": answer, "result": v.to_json()})
        return v

    def choose(self, branch: int):
        """Record which disjunct of the latest or-action the developer took.

        The choice is advisory (the tool does not apply edits for you) but
        it is part of the trace."""
        if not self.choice_open:
            raise SessionStateError("no or-action to choose from")
        action = self.latest_verdict.action
        if not 1 <= branch <= len(action.parts):
            raise SessionStateError(
                f"choice out of range: {branch} of {len(action.parts)}")
        self.choice_open = False
        self._log({"kind": "choice",
                   "behaviorIndex": self.latest_verdict.behavior_index,
                   "branch": branch,
                   "chosen": action.parts[branch - 1].render()})
        return action.parts[branch - 1]

    def restart(self):
        self.cursor = 0
        self.phase = PRE_PHASE
        self.pending = None
        self.choice_open = False
        self.last_pause = None
        self._log({"kind": "restart"})

    # -- edits ---------------------------------------------------------------

    def apply_edit(self, kind: str, text: str) -> list:
        """Atomically replace one region. Returns diagnostics; the edit took
        effect iff none of them is an error."""
        if kind not in EDIT_KINDS:
            raise SessionStateError(f"unknown edit kind: {kind}")
        try:
            candidate_program, candidate_source = self._candidate(kind, text)
        except SpecCheckError as e:
            return [Diagnostic("error", str(e), getattr(e, "loc", None))]
        diags = validate(candidate_program)
        if _errors(diags):
            return diags
        self.program = candidate_program
        self.source_text = candidate_source
        self.diagnostics = diags
        self.pending = None
        self.choice_open = False
        self.phase = PRE_PHASE
        # Re-examine the behavior that prompted the edit, even when its
        # verdict already moved the cursor past it.
        if self.last_pause is not None and self.behavior_count:
            self.cursor = min(self.last_pause, self.behavior_count - 1)
        elif self.cursor > self.behavior_count:
            self.cursor = self.behavior_count
        self._log({"kind": "edit", "editKind": kind, "text": text})
        return diags

    def _candidate(self, kind, text):
        if kind == "full-source":
            return parse(text), text
        fn = self.entry
        if kind == "pre":
            name = fn.pre.spec_name if fn.pre else fn.spec_name
            new_fn = dataclasses.replace(
                fn, pre=NamedPredicate(name, parse_clauses(text)))
        elif kind == "post":
            name = fn.post.spec_name if fn.post else fn.spec_name
            new_fn = dataclasses.replace(
                fn, post=NamedPredicate(name, parse_clauses(text)))
        elif kind == "body":
            new_fn = dataclasses.replace(fn, body=parse_stmts(text))
        else:  # behaviors-append
            appended = parse_behaviors(text)
            new_fn = dataclasses.replace(fn,
                                         behaviors=fn.behaviors + appended)
        functions = tuple(new_fn if f is fn else f
                          for f in self.program.functions)
        program = AnnotatedProgram(functions, self.program.entry)
        return program, pretty_print(program)

    # -- accuracy --------------------------------------------------------------

    def labeled_behaviors(self, domain: DomainSpec) -> list:
        """Enumerate the domain and label every pair per the domain's rule."""
        return labeled_set(domain, self.program, self.entry, self._budget_maker())

    def run_accuracy(self, domain: DomainSpec,
                     early_exit: bool = False) -> AccuracyReport:
        fn = self.entry
        behaviors = self.labeled_behaviors(domain)
        return check_accuracy(spec_satisfier(self.program, fn, self._budget_maker()),
                              behaviors, early_exit=early_exit)

    def run_accuracy_file(self, path, early_exit=False) -> AccuracyReport:
        return self.run_accuracy(load_domain_file(path), early_exit=early_exit)

    # -- persistence -------------------------------------------------------------

    def save_json(self) -> dict:
        return {
            "format": SAVE_FORMAT,
            "version": SAVE_VERSION,
            "id": self.id,
            "settings": self.settings.to_json(),
            "initialSource": self.initial_source,
            "events": self.events,
        }

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.save_json(), f, indent=2)
            f.write("\n")

    @classmethod
    def load_json(cls, obj) -> "Session":
        if not isinstance(obj, dict) or obj.get("format") != SAVE_FORMAT:
            raise VersionMismatch(obj.get("format"), SAVE_FORMAT)
        if obj.get("version") != SAVE_VERSION:
            raise VersionMismatch(obj.get("version"), SAVE_VERSION)
        settings = Settings(obj["settings"]["stepBudget"],
                            obj["settings"]["depthBudget"])
        s = cls(obj["initialSource"], settings, session_id=obj.get("id"))
        for event in obj["events"][1:]:  # [0] is the created event
            s._replay(event)
        return s

    @classmethod
    def load(cls, path) -> "Session":
        with open(path, "r", encoding="utf-8") as f:
            return cls.load_json(json.load(f))

    def _replay(self, event):
        kind = event["kind"]
        if kind == "step":
            self.step()
        elif kind == "oracle":
            self.answer_oracle(event["answer"])
        elif kind == "choice":
            self.choose(event["branch"])
        elif kind == "edit":
            diags = self.apply_edit(event["editKind"], event["text"])
            if _errors(diags):
                raise SessionStateError(
                    f"replayed edit failed: {_errors(diags)[0]}")
        elif kind == "restart":
            self.restart()
        else:
            raise SessionStateError(f"unknown event kind in session file: {kind}")

    # -- batch ----------------------------------------------------------------

    def run_batch(self, domain: Optional[DomainSpec] = None,
                  fail_fast: bool = False):
        """Non-interactive sweep: verdicts for every behavior, the execution
        cross-check for good behaviors when a body exists, and optionally an
        accuracy run. Returns (exit_code, lines, payload).

        exit 0: everything skips and the domain (if given) is accurate;
        exit 3: some verdict demands a correction, the implementation
        misses a listed good output, or accuracy found witnesses;
        exit 4: an execution or enumeration exceeded its budget or cap."""
        lines = []
        payload = {"verdicts": [], "execChecks": []}
        witnesses = False
        budget_hit = False
        fn = self.entry

        def note(line, verdict_json=None):
            lines.append(line)
            if verdict_json is not None:
                payload["verdicts"].append(verdict_json)

        stop = False
        for idx, b in enumerate(fn.behaviors):
            pre = engine.pre_verdict(self.program, fn, idx, self._budget_maker())
            note(pre.render(), pre.to_json())
            if not isinstance(pre.action, engine.Skip):
                witnesses = True
            if b.kind != DONT_CARE:
                post = engine.spec_post_verdict(self.program, fn, idx,
                                                self._budget_maker())
                note(post.render(), post.to_json())
                if not isinstance(post.action, engine.Skip):
                    witnesses = True
            if fail_fast and witnesses:
                stop = True
                break
        if not self.spec_only and not stop:
            for idx, b in enumerate(fn.behaviors):
                if b.kind != engine.GOOD:
                    continue
                check = engine.batch_exec_check(self.program, fn, idx,
                                                self._budget_maker())
                note(check["line"])
                payload["execChecks"].append(check)
                if check["status"] == "budget":
                    budget_hit = True
                elif check["status"] == "mismatch":
                    witnesses = True
                if fail_fast and (witnesses or budget_hit):
                    stop = True
                    break
        if domain is not None and not stop:
            try:
                report = self.run_accuracy(domain, early_exit=fail_fast)
                payload["accuracy"] = report.to_json()
                lines.append(report.render())
                if report.verdict != "accurate":
                    witnesses = True
            except DomainTooLarge as e:
                lines.append(f"error: {e}")
                payload["accuracy"] = {"error": str(e)}
                budget_hit = True
            except SpecCheckError as e:
                # a domain file that does not fit this entry function
                lines.append(f"error: {e}")
                payload["accuracy"] = {"error": str(e)}
                payload["exitCode"] = 2
                return 2, lines, payload
        code = 4 if budget_hit else 3 if witnesses else 0
        payload["exitCode"] = code
        return code, lines, payload

    # -- views -----------------------------------------------------------------

    def panes(self) -> dict:
        """Editable text per region; each pane re-parses with the matching
        edit kind, so a round trip through the UI is lossless."""
        def clause_pane(pred):
            if pred is None:
                return ""
            return "\n".join(f"{format_expr(c)};" for c in pred.clauses)

        fn = self.entry
        return {
            "pre": clause_pane(fn.pre),
            "post": clause_pane(fn.post),
            "body": format_stmts(fn.body),
            "behaviors": "\n".join(format_behavior(b) for b in fn.behaviors),
        }

    def state_json(self, log_tail: int = 50) -> dict:
        return {
            "id": self.id,
            "source": self.source_text,
            "panes": self.panes(),
            "entry": self.entry.name,
            "cursor": self.cursor,
            "phase": self.phase,
            "specOnly": self.spec_only,
            "behaviorCount": self.behavior_count,
            "done": self.done,
            "pendingQuery": self.pending.query.to_json() if self.pending else None,
            "latestVerdict": (self.latest_verdict.to_json()
                              if self.latest_verdict else None),
            "choiceOpen": self.choice_open,
            "settings": self.settings.to_json(),
            "warnings": [str(d) for d in self.diagnostics],
            "logTail": self.events[-log_tail:],
        }
