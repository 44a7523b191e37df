#!/usr/bin/env python3
"""Replay the bundled linearSearch refinement session and print the trace.

Drives the session API with the recorded step/edit script, checking each
pause against its expected rendering, then prints the final source and the
round-tripped event log size.
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from speccheck.session import Session

CORPUS = pathlib.Path(__file__).resolve().parents[1] / "src" / "speccheck" / "corpus"


def main() -> int:
    script = json.loads((CORPUS / "linear_search_edits.json").read_text())
    source = (CORPUS / script["program"]).read_text()
    session = Session(source)
    failures = 0
    for n, step in enumerate(script["steps"], 1):
        if step["do"] == "step":
            result = session.step()
            line = result.render()
            print(f"{n:2}  {line}")
            for want in step.get("expect", []):
                if want not in line:
                    failures += 1
                    print(f"    MISSING {want!r}")
        else:
            diags = session.apply_edit(step["kind"], step["text"])
            errors = [d for d in diags if d.severity == "error"]
            print(f"{n:2}  edit {step['kind']}"
                  + ("" if not errors else f" FAILED: {errors}"))
            failures += len(errors)

    print("\nfinal source:\n")
    print(session.source_text)

    blob = session.save_json()
    replayed = Session.load_json(blob)
    assert replayed.source_text == session.source_text
    assert replayed.cursor == session.cursor
    print(f"event log: {len(session.events)} events, replay reconstructs the "
          f"same state: yes")
    if failures:
        print(f"{failures} expectation(s) missed")
        return 1
    print("all expectations met")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
