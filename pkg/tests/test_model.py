import json

import pytest
from hypothesis import given

from gen import models
from knowhow.errors import ParseError, ReservedWordError, UnknownState, ValidationError
from knowhow.model import Model, equiv_class, load_model, perfect_recall_violations, quotient


def test_cure_shape(cure):
    assert len(cure.states) == 6
    assert len(cure.actions) == 3
    assert len(cure.transitions) == 6
    assert cure.blocks == (("s1", "s2"), ("s3",), ("s4",), ("s5",), ("s6",))


def test_minimal_model():
    m = load_model('{"states": ["w"], "actions": [], "transitions": [], "equiv": []}')
    assert m.blocks == (("w",),)
    assert m.valuation["w"] == frozenset()


@pytest.mark.parametrize("doc,kind", [
    ({"states": ["s1", "s2", "s3"], "equiv": [["s1", "s2"], ["s2", "s3"]]}, "overlapping-blocks"),
    ({"states": ["s1"], "transitions": [["s1", "a", "s9"]], "actions": ["a"]}, "unknown-state"),
    ({"states": ["s1"], "transitions": [["s1", "b", "s1"]], "actions": ["a"]}, "unknown-action"),
    ({"states": []}, "empty-state-set"),
    ({"states": ["s1"], "equiv": [["s1", "s7"]]}, "unknown-state"),
    ({"states": ["s1"], "valuation": {"s2": ["p"]}}, "unknown-state"),
])
def test_validation_errors(doc, kind):
    with pytest.raises(ValidationError) as exc:
        load_model(json.dumps(doc))
    assert exc.value.kind == kind


@pytest.mark.parametrize("text", ["{", "[]", '{"states": "s1"}', '{"states": ["s1"], "extra": 1}',
                                  '{"states": ["s1"], "transitions": [["s1", "a"]]}'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_model(text)


def test_reserved_props_rejected():
    with pytest.raises(ReservedWordError):
        load_model('{"states": ["s1"], "valuation": {"s1": ["_f"]}}')


def test_equiv_class(cure):
    assert equiv_class(cure, "s2") == "s1"
    assert equiv_class(cure, "s5") == "s5"
    assert equiv_class(cure, "s1") == equiv_class(cure, "s2")
    with pytest.raises(UnknownState):
        equiv_class(cure, "s0")


def test_quotient_cure(cure):
    q = quotient(cure)
    assert q.uniform_actions == {"s1": ("test",), "s3": ("pills",), "s4": ("pills", "surgery"),
                                 "s5": (), "s6": ()}
    assert q.class_succ[("s1", "test")] == {"s3", "s4"}
    # neither s1 nor s2 can take pills
    assert ("s1", "pills") not in q.class_succ


def test_quotient_no_transitions():
    m = Model(["a", "b"], ["x"], [], [["a", "b"]], {})
    q = quotient(m)
    assert q.uniform_actions == {"a": ()}
    assert q.class_succ == {}


def test_uniformity_gap():
    m = Model(["s1", "s2", "t"], ["a"], [("s1", "a", "t")], [["s1", "s2"]], {})
    q = quotient(m)
    assert q.uniform_actions["s1"] == ()
    assert q.class_succ[("s1", "a")] == {"t"}


@given(models())
def test_quotient_invariants(m):
    q = quotient(m)
    for c in q.classes:
        for a in m.actions:
            everyone = all(m.successors(s, a) for s in q.members[c])
            assert (a in q.uniform_actions[c]) == everyone
            if everyone:
                assert q.class_succ[(c, a)]
    for (c, a), ds in q.class_succ.items():
        for d in ds:
            assert any(t in q.members[d] for s in q.members[c] for t in m.successors(s, a))
    for b in m.blocks:
        assert {equiv_class(m, s) for s in b} == {b[0]}


@given(models())
def test_json_round_trip(m):
    assert load_model(m.to_json()) == m


def test_perfect_recall_is_only_a_lint():
    m = Model(["s", "t", "u"], ["a"], [("s", "a", "t")], [["t", "u"]], {})
    assert perfect_recall_violations(m) == [("s", "a", "u")]


def test_dot_export(cure):
    dot = cure.to_dot()
    assert dot.startswith("digraph")
    assert '"s4" -> "s6" [label="surgery"]' in dot
