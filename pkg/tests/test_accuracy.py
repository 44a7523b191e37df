import pytest

from speccheck.accuracy import (check_accuracy, compare_specs,
                                consistent_behaviors, generate_spec,
                                labeled_from_reference, labeled_set,
                                program_satisfies, spec_satisfier,
                                table_satisfier)
from speccheck.domain import load_domain
from speccheck.errors import DomainError, InconsistentLabels
from speccheck.parser import parse, parse_behaviors
from speccheck.syntax import Behavior
from speccheck.tribool import FALSE, Fault, TRUE, from_bool, undefined


def behaviors(text):
    return list(parse_behaviors(text))


# -- labeled set hygiene -----------------------------------------------------------


def test_duplicate_labels_deduplicate():
    bs = behaviors("""
    good { input = {x = 1} output = {rv = 2} }
    good { input = {x = 1} output = {rv = 2} }
    """)
    assert len(list(consistent_behaviors(bs))) == 1


def test_conflicting_labels_rejected():
    bs = behaviors("""
    good { input = {x = 1} output = {rv = 2} }
    bad { input = {x = 1} output = {rv = 2} }
    """)
    with pytest.raises(InconsistentLabels):
        list(consistent_behaviors(bs))


def test_same_input_different_outputs_is_fine():
    bs = behaviors("""
    good { input = {x = 1} output = {rv = 2} }
    bad { input = {x = 1} output = {rv = 3} }
    """)
    assert len(list(consistent_behaviors(bs))) == 2


# -- table specifications ------------------------------------------------------------


def test_generated_spec_admits_good_and_bad_inputs_only():
    bs = behaviors("""
    good { input = {x = 1} output = {rv = 2} }
    bad { input = {x = 2} output = {rv = 9} }
    dontCare { input = {x = 3} output = {rv = 0} }
    """)
    t = generate_spec(bs)
    assert t.admits_input({"x": 1}) and t.admits_input({"x": 2})
    assert not t.admits_input({"x": 3})
    # accepted pairs are exactly the goods; unadmitted inputs satisfy vacuously
    assert t.satisfies({"x": 1}, {"rv": 2})
    assert not t.satisfies({"x": 1}, {"rv": 5})
    assert not t.satisfies({"x": 2}, {"rv": 9})
    assert t.satisfies({"x": 3}, {"rv": 12345})


def test_generated_spec_is_accurate_on_its_own_set():
    bs = behaviors("""
    good { input = {x = 1} output = {rv = 2} }
    good { input = {x = 2} output = {rv = 3} }
    bad { input = {x = 2} output = {rv = 0} }
    dontCare { input = {x = 9} output = {rv = 0} }
    """)
    report = check_accuracy(table_satisfier(generate_spec(bs)), bs)
    assert report.verdict == "accurate"
    assert report.checked_count == 4


# -- written specifications ------------------------------------------------------------


SPEC = parse("""
int f(int x) {
  @pre p (x >= 0);
  @post p (rv = x + 1);
}
""")


def test_program_satisfies_definition():
    fn = SPEC.entry_fn
    assert program_satisfies(SPEC, fn, {"x": 1}, {"rv": 2}) == TRUE
    assert program_satisfies(SPEC, fn, {"x": 1}, {"rv": 5}) == FALSE
    # rejected input: vacuously satisfied
    assert program_satisfies(SPEC, fn, {"x": -1}, {"rv": 12345}) == TRUE


def test_rejected_input_skips_postcondition_evaluation():
    prog = parse("""
    int f(int [] a, int l) {
      @pre p (l >= 0);
      @post p (a[l] = rv);
    }
    """)
    fn = prog.entry_fn
    # l = -1 fails the pre; the faulting post (a[-1]) must not run
    assert program_satisfies(prog, fn, {"a": [1], "l": -1}, {"rv": 0}) == TRUE
    r = program_satisfies(prog, fn, {"a": [1], "l": 5}, {"rv": 0})
    assert r.is_undefined()


def test_undefined_precondition_masked_only_by_true_postcondition():
    prog = parse("""
    int f(int [] a, int l) {
      @pre p (a[l] = 0);
      @post p (rv = 0);
    }
    """)
    fn = prog.entry_fn
    # undefined P, true Q: the implication is satisfied (masking or)
    assert program_satisfies(prog, fn, {"a": [0], "l": 5}, {"rv": 0}) == TRUE
    # undefined P, false Q: nothing decides, the pair is undefined
    assert program_satisfies(prog, fn, {"a": [0], "l": 5}, {"rv": 1}).is_undefined()


# -- classification -------------------------------------------------------------------


def classify(kinds_and_truths, **kw):
    bs = []
    table = {}
    for i, (kind, truth) in enumerate(kinds_and_truths):
        b = Behavior(kind, {"x": i}, {"rv": 0})
        bs.append(b)
        table[i] = truth

    def satisfies(inp, out):
        return table[inp["x"]]
    return check_accuracy(satisfies, bs, **kw)


U = undefined(Fault("index-out-of-bounds", "probe"))


def test_verdict_accurate():
    r = classify([("good", TRUE), ("bad", FALSE), ("dontCare", None)])
    assert r.verdict == "accurate"
    assert r.checked_count == 3
    assert r.under_count == r.over_count == r.undefined_count == 0


def test_verdict_under_constrained():
    r = classify([("good", TRUE), ("bad", TRUE)])
    assert r.verdict == "under-constrained"
    assert [b.kind for b in r.under_witnesses] == ["bad"]


def test_verdict_over_constrained():
    r = classify([("good", FALSE), ("bad", FALSE)])
    assert r.verdict == "over-constrained"
    assert [b.kind for b in r.over_witnesses] == ["good"]


def test_verdict_both():
    r = classify([("good", FALSE), ("bad", TRUE)])
    assert r.verdict == "both"


def test_verdict_undecidable_only_without_witnesses():
    r = classify([("good", U), ("bad", FALSE)])
    assert r.verdict == "undecidable-at-this-domain"
    assert r.undefined_count == 1
    # a witness dominates undefined pairs
    r2 = classify([("good", U), ("bad", TRUE)])
    assert r2.verdict == "under-constrained"
    assert r2.undefined_count == 1


def test_accurate_iff_all_witness_lists_empty():
    for rows in ([("good", TRUE)], [("bad", TRUE)], [("good", U)],
                 [("good", FALSE)], [("dontCare", None)]):
        r = classify(rows)
        empty = not (r.under_witnesses or r.over_witnesses or r.undefined_witnesses)
        assert (r.verdict == "accurate") == empty


def test_dontcare_counts_but_never_witnesses():
    r = classify([("dontCare", None)] * 5)
    assert r.checked_count == 5
    assert r.verdict == "accurate"


def test_witness_lists_capped_counts_exact():
    rows = [("bad", TRUE)] * 7
    r = classify(rows, witness_cap=3)
    assert r.under_count == 7
    assert len(r.under_witnesses) == 3
    assert r.witness_cap == 3
    assert "... 4 more" in r.render()


def test_early_exit_stops_at_first_witness():
    rows = [("good", TRUE), ("bad", TRUE), ("good", FALSE)]
    r = classify(rows, early_exit=True)
    assert r.truncated
    assert r.checked_count == 2  # stopped mid-scan
    assert r.verdict == "under-constrained"
    assert "stopped at first witness" in r.render()


def test_witnesses_sorted_by_valuation():
    bs = [Behavior("bad", {"x": 5}, {"rv": 0}),
          Behavior("bad", {"x": 1}, {"rv": 0}),
          Behavior("bad", {"x": 3}, {"rv": 0})]
    r = check_accuracy(lambda i, o: TRUE, bs)
    assert [b.input["x"] for b in r.under_witnesses] == [1, 3, 5]


def test_report_json_and_render():
    r = classify([("good", FALSE), ("bad", TRUE)])
    j = r.to_json()
    assert j["verdict"] == "both"
    assert j["underCount"] == 1 and j["overCount"] == 1
    assert j["underWitnesses"][0]["kind"] == "bad"
    text = r.render()
    assert text.splitlines()[0] == "verdict: both"
    assert "checked 2 labeled behaviors" in text


# -- reference labeling -----------------------------------------------------------------


REF_PROG = parse("""
int f(int x) {
  @pre p (0 <= x && x <= 2);
  @post p (rv = 2 * x);
  return x + x;
}
""")

REF_DOMAIN = load_domain({
    "vars": {"x": {"range": [0, 2]}, "rv": {"range": [0, 4]}},
    "labels": {"source": "entry"},
})


def test_reference_labels_good_exactly_on_produced_output():
    fn = REF_PROG.entry_fn
    labeled = list(labeled_from_reference(REF_DOMAIN, REF_PROG, fn, fn))
    assert len(labeled) == 15
    goods = [b for b in labeled if b.kind == "good"]
    assert {(b.input["x"], b.output["rv"]) for b in goods} == {(0, 0), (1, 2), (2, 4)}
    assert all(b.kind in ("good", "bad") for b in labeled)


def test_reference_fault_labels_dontcare():
    prog = parse("""
    int f(int x) {
      @post p (true);
      return 1 / x;
    }
    """)
    fn = prog.entry_fn
    domain = load_domain({"vars": {"x": {"range": [0, 1]},
                                   "rv": {"range": [0, 1]}},
                          "labels": {"source": "entry"}})
    labeled = list(labeled_from_reference(domain, prog, fn, fn))
    by_input = {}
    for b in labeled:
        by_input.setdefault(b.input["x"], set()).add(b.kind)
    assert by_input[0] == {"dontCare"}  # division by zero in the reference
    assert by_input[1] == {"good", "bad"}


def test_labeled_set_source_resolution():
    fn = REF_PROG.entry_fn
    from_behaviors = labeled_set(None, REF_PROG, fn)
    assert list(from_behaviors) == list(fn.behaviors)
    named = load_domain({"vars": {"x": {"range": [0, 1]}, "rv": {"range": [0, 2]}},
                         "labels": {"source": "function", "name": "f"}})
    assert len(list(labeled_set(named, REF_PROG, fn))) == 6
    missing = load_domain({"vars": {"x": {"range": [0, 1]}, "rv": {"range": [0, 2]}},
                           "labels": {"source": "function", "name": "nope"}})
    with pytest.raises(DomainError):
        labeled_set(missing, REF_PROG, fn)


def test_bodyless_reference_rejected():
    prog = parse("int g(int x); int f(int x) { @pre p (x = x); return x; }")
    domain = load_domain({"vars": {"x": {"range": [0, 1]}, "rv": {"range": [0, 1]}},
                          "labels": {"source": "function", "name": "g"}})
    with pytest.raises(DomainError, match="no body"):
        list(labeled_set(domain, prog, prog.entry_fn))


def test_written_spec_accurate_against_its_own_reference():
    fn = REF_PROG.entry_fn
    labeled = labeled_set(REF_DOMAIN, REF_PROG, fn)
    report = check_accuracy(spec_satisfier(REF_PROG, fn), labeled)
    assert report.verdict == "accurate"
    assert report.checked_count == 15


# -- spec comparison ---------------------------------------------------------------------


def test_compare_specs_equivalent():
    pairs = [({"x": i}, {"rv": j}) for i in range(3) for j in range(3)]
    same = lambda i, o: from_bool(o["rv"] == i["x"])
    r = compare_specs(same, same, pairs)
    assert r.equivalent
    assert r.checked_count == 9


def test_compare_specs_differences_and_undefined():
    pairs = [({"x": i}, {"rv": 0}) for i in range(4)]
    manual = lambda i, o: TRUE if i["x"] == 0 else FALSE if i["x"] == 1 else U
    table = lambda i, o: FALSE if i["x"] <= 1 else TRUE
    r = compare_specs(manual, table, pairs)
    assert not r.equivalent
    assert r.only_manual_count == 1
    assert r.only_table_count == 0
    assert r.undefined_count == 2
    assert "specs disagree" in r.render()
