import itertools
import json

import pytest

from speccheck.domain import (ArrayDomain, ScalarRange, ScalarSet, load_domain,
                              load_domain_file, enumerate_inputs,
                              enumerate_pairs, predicted_count)
from speccheck.errors import DomainError, DomainTooLarge
from speccheck.parser import parse

ENTRY = parse("int f(int [] a, int l, int e) { return l; }")
FN = ENTRY.entry_fn

BASIC = {
    "vars": {
        "a": {"lenRange": [1, 2], "elemRange": [0, 1]},
        "l": {"range": [0, 1]},
        "e": {"set": [3, 1]},
        "rv": {"set": [-1, 0]},
    },
}


def test_var_domain_shapes():
    d = load_domain(BASIC)
    assert d.domain_of("a") == ArrayDomain(1, 2, 0, 1)
    assert d.domain_of("l") == ScalarRange(0, 1)
    assert d.domain_of("e") == ScalarSet((1, 3))  # sets are sorted
    assert d.domain_of("missing") is None
    assert d.var_names == ["a", "l", "e", "rv"]
    assert d.cap == 10_000_000
    assert d.labels == {"source": "behaviors"}


def test_predicted_count_matches_hand_arithmetic():
    # arrays: 2 of length 1 plus 4 of length 2 = 6; l: 2; e: 2; rv: 2
    assert predicted_count(load_domain(BASIC), FN) == 6 * 2 * 2 * 2


def test_predicted_count_against_brute_force_oracle():
    # independent oracle: generate the product with itertools and count
    arrays = [list(t) for n in (1, 2) for t in itertools.product((0, 1), repeat=n)]
    oracle = len(arrays) * 2 * 2 * 2
    assert predicted_count(load_domain(BASIC), FN) == oracle


def test_enumeration_order_is_lexicographic_and_stable():
    d = load_domain(BASIC)
    first = list(enumerate_pairs(d, ENTRY, FN))
    second = list(enumerate_pairs(d, ENTRY, FN))
    assert first == second
    assert len(first) == predicted_count(d, FN)
    # arrays ordered by length then elementwise; scalars ascending
    assert first[0] == ({"a": [0], "l": 0, "e": 1}, {"rv": -1})
    assert first[1] == ({"a": [0], "l": 0, "e": 1}, {"rv": 0})
    assert first[-1] == ({"a": [1, 1], "l": 1, "e": 3}, {"rv": 0})


def test_filter_prunes_pairs():
    obj = dict(BASIC)
    obj["filter"] = "l < a.size"
    d = load_domain(obj)
    pairs = list(enumerate_pairs(d, ENTRY, FN))
    assert all(inp["l"] < len(inp["a"]) for inp, _ in pairs)
    # unfiltered count unchanged; the cap applies before filtering
    assert predicted_count(d, FN) == 48


def test_filter_may_mention_rv():
    obj = dict(BASIC)
    obj["filter"] = "rv = -1"
    d = load_domain(obj)
    assert all(out["rv"] == -1 for _, out in enumerate_pairs(d, ENTRY, FN))


def test_undefined_filter_excludes_the_pair():
    obj = dict(BASIC)
    obj["filter"] = "a[5] = 0"  # faults on every candidate
    d = load_domain(obj)
    assert list(enumerate_pairs(d, ENTRY, FN)) == []


def test_cap_enforced_before_enumeration():
    obj = dict(BASIC)
    obj["cap"] = 10
    gen = enumerate_pairs(load_domain(obj), ENTRY, FN)
    with pytest.raises(DomainTooLarge) as info:
        next(gen)
    assert info.value.count == 48 and info.value.cap == 10


def test_enumerate_inputs_collapses_outputs():
    d = load_domain(BASIC)
    inputs = list(enumerate_inputs(d, ENTRY, FN))
    assert len(inputs) == 24
    keys = [json.dumps(i, sort_keys=True) for i in inputs]
    assert len(set(keys)) == 24


def test_arrays_are_fresh_copies():
    d = load_domain(BASIC)
    pairs = list(enumerate_pairs(d, ENTRY, FN))
    pairs[0][0]["a"][0] = 99
    again = list(enumerate_pairs(d, ENTRY, FN))
    assert again[0][0]["a"] == [0]


# -- alignment errors ------------------------------------------------------------


def test_missing_parameter_domain():
    obj = {"vars": {"l": {"range": [0, 1]}, "e": {"range": [0, 1]},
                    "rv": {"range": [0, 1]}}}
    with pytest.raises(DomainError, match="no domain for parameter"):
        predicted_count(load_domain(obj), FN)


def test_unknown_variable_rejected():
    obj = dict(BASIC, vars=dict(BASIC["vars"], extra={"range": [0, 1]}))
    with pytest.raises(DomainError, match="unknown variable"):
        predicted_count(load_domain(obj), FN)


def test_missing_rv_domain():
    obj = {"vars": {k: v for k, v in BASIC["vars"].items() if k != "rv"}}
    with pytest.raises(DomainError, match="missing domain for rv"):
        predicted_count(load_domain(obj), FN)


def test_rv_domain_rejected_for_void_entry():
    void_prog = parse("void g(int x) { return; }")
    obj = {"vars": {"x": {"range": [0, 1]}, "rv": {"range": [0, 1]}}}
    with pytest.raises(DomainError, match="returns nothing"):
        predicted_count(load_domain(obj), void_prog.entry_fn)


def test_type_alignment():
    obj = {"vars": {"a": {"range": [0, 1]}, "l": {"range": [0, 1]},
                    "e": {"range": [0, 1]}, "rv": {"range": [0, 1]}}}
    with pytest.raises(DomainError, match="needs lenRange"):
        predicted_count(load_domain(obj), FN)
    bool_prog = parse("int g(bool b) { return 0; }")
    obj2 = {"vars": {"b": {"range": [0, 1]}, "rv": {"range": [0, 1]}}}
    with pytest.raises(DomainError, match="is bool"):
        predicted_count(load_domain(obj2), bool_prog.entry_fn)
    obj3 = {"vars": {"b": {"set": [True, False]}, "rv": {"range": [0, 1]}}}
    assert predicted_count(load_domain(obj3), bool_prog.entry_fn) == 4


# -- file format validation ---------------------------------------------------------


def test_load_domain_validation():
    with pytest.raises(DomainError):
        load_domain([])
    with pytest.raises(DomainError):
        load_domain({"nope": 1})
    with pytest.raises(DomainError):
        load_domain({"vars": {}, "unknownKey": 1})
    with pytest.raises(DomainError):
        load_domain({"vars": {"x": {"range": [0, 1], "set": [1]}}})
    with pytest.raises(DomainError):
        load_domain({"vars": {"x": {"set": []}}})
    with pytest.raises(DomainError):
        load_domain({"vars": {"x": {"set": [1, True]}}})
    with pytest.raises(DomainError):
        load_domain({"vars": {"x": {"range": [0, True]}}})
    with pytest.raises(DomainError):
        load_domain({"vars": {"a": {"lenRange": [-1, 2], "elemRange": [0, 1]}}})
    with pytest.raises(DomainError):
        load_domain({"vars": {}, "cap": 0})
    with pytest.raises(DomainError):
        load_domain({"vars": {}, "cap": True})
    with pytest.raises(DomainError):
        load_domain({"vars": {}, "labels": {"source": "nowhere"}})
    with pytest.raises(DomainError):
        load_domain({"vars": {}, "labels": {"source": "function"}})
    with pytest.raises(DomainError):
        load_domain({"vars": {}, "labels": "entry"})


def test_labels_variants_accepted():
    assert load_domain({"vars": {}}).labels["source"] == "behaviors"
    assert load_domain({"vars": {}, "labels": {"source": "entry"}}
                       ).labels["source"] == "entry"
    d = load_domain({"vars": {}, "labels": {"source": "function", "name": "ref"}})
    assert d.labels["name"] == "ref"


def test_bad_filter_is_a_parse_error():
    from speccheck.errors import ParseError
    with pytest.raises(ParseError):
        load_domain({"vars": {}, "filter": "l <"})


def test_load_domain_file(tmp_path, corpus_dir):
    d = load_domain_file(corpus_dir / "linear_search_domain.json")
    assert d.filter_source == "0 <= l <= r < a.size"
    assert d.labels == {"source": "entry"}
    ls = parse((corpus_dir / "linear_search_rightmost.sc").read_text())
    # count oracle: arrays 3+9+27=39 times l,r,e (3 each) times rv (4)
    assert predicted_count(d, ls.entry_fn) == 39 * 3 * 3 * 3 * 4


def test_scalar_domain_helpers():
    assert ScalarRange(2, 5).size() == 4
    assert list(ScalarRange(2, 4).values()) == [2, 3, 4]
    assert ScalarRange(3, 2).size() == 0
    assert ScalarSet((1, 5)).size() == 2
    assert ArrayDomain(0, 2, 0, 1).size() == 1 + 2 + 4
    assert list(ArrayDomain(0, 1, 7, 7).values()) == [[], [7]]
