#!/usr/bin/env python3
"""Check three stages of the linearSearch spec against an enumerated domain.

The domain file labels each enumerated pair by running the bundled rightmost
implementation. The finished spec should come out accurate; the two earlier
stages should be flagged with concrete witnesses.
"""

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from speccheck.accuracy import check_accuracy, spec_satisfier
from speccheck.domain import load_domain_file
from speccheck.parser import parse
from speccheck.session import Session

CORPUS = pathlib.Path(__file__).resolve().parents[1] / "src" / "speccheck" / "corpus"

EARLY_STAGE = """
int linearSearch(int [] a, int l, int r, int e) {{
   @pre ls (l <= r);
   @post ls {{
      {clauses}
   }}
}}
"""

STAGES = [
    ("after pair 4 (no interval bounds yet)",
     "((rv != -1) => a[rv] = e)"),
    ("after pair 5 (whole-array quantifier)",
     "((rv != -1) => a[rv] = e)\n"
     "      ((rv = -1) => forall (int k:[0 .. a.size - 1]) (e != a[k]))"),
]


def main() -> int:
    domain = load_domain_file(CORPUS / "linear_search_domain.json")
    t0 = time.time()

    session = Session((CORPUS / "linear_search_rightmost.sc").read_text())
    report = session.run_accuracy(domain)
    print("== finished rightmost spec, labels from the bundled body")
    print(report.render())

    for title, clauses in STAGES:
        prog = parse(EARLY_STAGE.format(clauses=clauses))
        labeled = session.labeled_behaviors(domain)
        stage_report = check_accuracy(spec_satisfier(prog, prog.entry_fn),
                                      labeled, witness_cap=5)
        print(f"\n== {title}")
        print(stage_report.render())

    print(f"\nelapsed {time.time() - t0:.2f}s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
