"""Command line interface.

speccheck run <file.sc>     interactive refinement loop on stdin/stdout
speccheck check <file.sc>   non-interactive sweep, exit code tells the story
speccheck serve             JSON-over-HTTP API

The run loop reads one command per line; `help` lists them. Multi-line
input (edits, appended behaviors) ends with a single `.` on its own line.
Exit codes for check: 0 all clear, 2 unreadable input, 3 corrections or
witnesses found, 4 budget or cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .domain import load_domain_file
from .engine import OracleQuery, Verdict
from .errors import SpecCheckError, ValidationFailed
from .session import Session, Settings
from .interp import DEFAULT_DEPTH_BUDGET, DEFAULT_STEP_BUDGET

HELP = """\
commands:
  step              advance to the next pause point
  answer y|n        answer the pending acceptability query
  choose N          pick branch N of the latest or-action
  edit pre|post|body|full   replace a region; finish with a lone `.`
  append            add behaviors; finish with a lone `.`
  restart           re-examine from the first behavior
  status            where the session stands
  source            print the current program text
  accuracy <d.json> run the accuracy check over a domain file
  save <path>       write a replayable session file
  help              this text
  quit              leave\
"""


def _common(sub):
    sub.add_argument("--step-budget", type=int, default=DEFAULT_STEP_BUDGET,
                     metavar="N", help="statement budget per evaluation")
    sub.add_argument("--depth-budget", type=int, default=DEFAULT_DEPTH_BUDGET,
                     metavar="N", help="call depth budget per evaluation")
    sub.add_argument("--json", action="store_true",
                     help="machine-readable output (one JSON value per line)")


def build_parser():
    p = argparse.ArgumentParser(prog="speccheck",
                                description="specification refinement workbench")
    p.add_argument("--version", action="version", version=__version__)
    subs = p.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="interactive session")
    run.add_argument("file")
    _common(run)

    check = subs.add_parser("check", help="batch verdict sweep")
    check.add_argument("file")
    check.add_argument("--domain", metavar="D.JSON",
                       help="domain file for the accuracy check")
    check.add_argument("--fail-fast", action="store_true",
                       help="stop at the first correction or witness")
    _common(check)

    serve = subs.add_parser("serve", help="HTTP API server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    _common(serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "check":
        return cmd_check(args)
    return cmd_serve(args)


def _settings(args):
    return Settings(args.step_budget, args.depth_budget)


def _read_source(path, out):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        out(f"error: {e}")
        return None


def _emit(args, human, machine):
    print(json.dumps(machine) if args.json else human)


# -- run -----------------------------------------------------------------------

def cmd_run(args) -> int:
    source = _read_source(args.file, print)
    if source is None:
        return 2
    try:
        session = Session(source, _settings(args))
    except SpecCheckError as e:
        _print_load_error(args, e)
        return 2
    mode = "interface only" if session.spec_only else "with implementation"
    _emit(args,
          f"loaded {args.file}: entry {session.entry.name}, "
          f"{session.behavior_count} behaviors, {mode}",
          {"loaded": args.file, "entry": session.entry.name,
           "behaviorCount": session.behavior_count,
           "specOnly": session.spec_only,
           "warnings": [str(d) for d in session.diagnostics]})
    if not args.json:
        for d in session.diagnostics:
            print(str(d))
    prompt = "speccheck> " if sys.stdin.isatty() else ""
    while True:
        try:
            line = input(prompt)
        except EOFError:
            return 0
        try:
            if not _dispatch(session, line.strip(), args):
                return 0
        except SpecCheckError as e:
            _emit(args, f"error: {e}", {"error": str(e)})


def _print_load_error(args, e):
    if isinstance(e, ValidationFailed):
        msgs = [str(d) for d in e.diagnostics]
        _emit(args, "\n".join(msgs), {"error": "validation failed",
                                      "diagnostics": msgs})
    else:
        _emit(args, f"error: {e}", {"error": str(e)})


def _read_block():
    lines = []
    while True:
        try:
            line = input()
        except EOFError:
            break
        if line.strip() == ".":
            break
        lines.append(line)
    return "\n".join(lines)


def _print_step_result(args, result):
    if isinstance(result, Verdict):
        _emit(args, result.render(), {"type": "verdict", **result.to_json()})
        for w in result.warnings:
            if not args.json:
                print(f"warning: {w}")
    elif isinstance(result, OracleQuery):
        _emit(args, result.render(), {"type": "oracleQuery", **result.to_json()})
    else:
        _emit(args, result.render(), {"type": "done", **result.to_json()})


def _dispatch(session, line, args) -> bool:
    """Returns False to leave the loop."""
    if not line:
        return True
    cmd, _, rest = line.partition(" ")
    rest = rest.strip()
    if cmd in ("quit", "exit"):
        return False
    if cmd == "help":
        print(HELP)
        return True
    if cmd == "step":
        _print_step_result(args, session.step())
        return True
    if cmd == "answer":
        if rest not in ("y", "n", "yes", "no", "true", "false"):
            raise SpecCheckError("answer y or n")
        v = session.answer_oracle(rest in ("y", "yes", "true"))
        _print_step_result(args, v)
        return True
    if cmd == "choose":
        try:
            branch = int(rest)
        except ValueError:
            raise SpecCheckError("choose takes a branch number")
        chosen = session.choose(branch)
        _emit(args, f"chose: {chosen.render()}",
              {"type": "choice", "branch": branch, "chosen": chosen.render()})
        return True
    if cmd == "edit":
        kind = {"pre": "pre", "post": "post", "body": "body",
                "full": "full-source"}.get(rest)
        if kind is None:
            raise SpecCheckError("edit pre|post|body|full")
        _finish_edit(session, kind, _read_block(), args)
        return True
    if cmd == "append":
        _finish_edit(session, "behaviors-append", _read_block(), args)
        return True
    if cmd == "restart":
        session.restart()
        _emit(args, "restarted", {"type": "restart"})
        return True
    if cmd == "status":
        s = session.state_json()
        human = (f"behavior {min(session.cursor + 1, session.behavior_count)}"
                 f"/{session.behavior_count}, phase {session.phase}"
                 + (", done" if session.done else "")
                 + (", query pending" if session.pending else ""))
        _emit(args, human, {"type": "status", **s})
        return True
    if cmd == "source":
        print(session.source_text)
        return True
    if cmd == "accuracy":
        if not rest:
            raise SpecCheckError("accuracy takes a domain file path")
        try:
            domain = load_domain_file(rest)
        except (OSError, ValueError) as e:
            raise SpecCheckError(str(e))
        report = session.run_accuracy(domain)
        _emit(args, report.render(), {"type": "accuracy", **report.to_json()})
        return True
    if cmd == "save":
        if not rest:
            raise SpecCheckError("save takes a path")
        session.save(rest)
        _emit(args, f"saved to {rest}", {"type": "saved", "path": rest})
        return True
    raise SpecCheckError(f"unknown command: {cmd} (try help)")


def _finish_edit(session, kind, text, args):
    diags = session.apply_edit(kind, text)
    errs = [d for d in diags if d.severity == "error"]
    if errs:
        _emit(args, "\n".join(str(d) for d in diags),
              {"type": "edit", "ok": False,
               "diagnostics": [d.to_json() for d in diags]})
    else:
        suffix = "".join(f"\n{d}" for d in diags)
        _emit(args, f"ok, resuming at behavior "
                    f"{min(session.cursor + 1, session.behavior_count)}{suffix}",
              {"type": "edit", "ok": True,
               "diagnostics": [d.to_json() for d in diags]})


# -- check ------------------------------------------------------------------------

def cmd_check(args) -> int:
    source = _read_source(args.file, print)
    if source is None:
        return 2
    domain = None
    if args.domain:
        try:
            domain = load_domain_file(args.domain)
        except (OSError, ValueError, SpecCheckError) as e:
            _emit(args, f"error: {e}", {"error": str(e), "exitCode": 2})
            return 2
    try:
        session = Session(source, _settings(args))
    except SpecCheckError as e:
        _print_load_error(args, e)
        return 2
    code, lines, payload = session.run_batch(domain, fail_fast=args.fail_fast)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)
        print(f"exit {code}")
    return code


# -- serve ------------------------------------------------------------------------

def cmd_serve(args) -> int:
    # imported here so run/check start without the web stack
    import uvicorn

    from .api import create_app
    app = create_app(settings=_settings(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
