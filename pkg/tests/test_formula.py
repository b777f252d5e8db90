import pytest
from hypothesis import given

from gen import formulas
from knowhow.errors import FormulaSyntaxError, NotSubformulaClosed, ReservedWordError
from knowhow.formula import (FALSUM, VERUM, And, K, Kh, Not, Prop, closure, formula_set, iff,
                             implies, parse, render, size, sort_key, subformulas, substitute)

p, q, r = Prop("p"), Prop("q"), Prop("r")


def test_parse_examples():
    assert parse("Kh ~p") == Kh(Not(p))
    assert parse("p") == p
    assert parse("Kh(p <-> q)") == Kh(And(Not(And(p, Not(q))), Not(And(q, Not(p)))))


def test_derived_connectives():
    assert parse("p | q") == Not(And(Not(p), Not(q)))
    assert parse("p -> q") == Not(And(p, Not(q)))
    assert parse("false") == And(Prop("_f"), Not(Prop("_f")))
    assert parse("true") == Not(FALSUM)


@pytest.mark.parametrize("text,expected", [
    ("~p & q", And(Not(p), q)),
    ("K p & q", And(K(p), q)),
    ("p & q | r", parse("(p & q) | r")),
    ("p | q -> r", parse("(p | q) -> r")),
    ("p -> q -> r", implies(p, implies(q, r))),
    ("p -> q <-> r", iff(implies(p, q), r)),
    ("K Kh ~p", K(Kh(Not(p)))),
    ("Kh(p)", Kh(p)),
    ("  K  (p&q) ", K(And(p, q))),
])
def test_precedence(text, expected):
    assert parse(text) == expected


def test_kh_is_not_k_followed_by_h():
    assert parse("Kh p") == Kh(p)
    assert parse("K h") == K(Prop("h"))


@pytest.mark.parametrize("text", ["", "p &", "(p", "p q", "p <-> q <-> r", "~", "p ->", "P", "&p"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse("p & (q |")
    assert exc.value.position == 8


@pytest.mark.parametrize("text", ["K", "Kh & p", "p & K", "K -> p"])
def test_reserved_words(text):
    with pytest.raises(ReservedWordError):
        parse(text)


def test_render_examples():
    assert render(Kh(Not(p))) == "Kh (~p)"
    assert render(p) == "p"
    assert render(And(K(p), q)) == "(K p & q)"


def test_render_sugar():
    assert render(parse("p -> q"), sugar=True) == "(p -> q)"
    assert render(parse("Kh false -> false"), sugar=True) == "(Kh false -> false)"
    assert render(parse("p <-> q"), sugar=True) == "(p <-> q)"
    assert render(parse("~p | q"), sugar=True) == "(~p | q)"
    assert render(parse("p -> ~q"), sugar=True) == "(p -> ~q)"
    assert render(VERUM, sugar=True) == "true"


@given(formulas())
def test_round_trip(f):
    assert parse(render(f)) == f
    assert parse(render(f, sugar=True)) == f


def test_subformula_examples():
    assert set(subformulas(Kh(p))) == {Kh(p), p}
    assert set(subformulas(K(And(p, q)))) == {K(And(p, q)), And(p, q), p, q}
    assert set(subformulas(Kh(Kh(p)))) == {Kh(Kh(p)), Kh(p), p}


def test_closure_examples():
    assert set(closure([p])) == {p, K(p)}
    assert set(closure([Kh(p), p])) == {Kh(p), p, K(Kh(p)), K(p)}
    assert set(closure([K(p), p])) == {K(p), p, K(K(p))}
    with pytest.raises(NotSubformulaClosed):
        closure([K(p)])


@given(formulas())
def test_closure_size(f):
    phi = subformulas(f)
    cl = closure(phi)
    assert len(cl) <= 2 * len(phi)
    assert (len(cl) == 2 * len(phi)) == (not any(isinstance(g, K) for g in phi))


@given(formulas())
def test_subformulas_closed(f):
    phi = set(subformulas(f))
    assert f in phi
    for g in phi:
        for child in ([g.left, g.right] if isinstance(g, And) else
                      [] if isinstance(g, Prop) else [g.arg]):
            assert child in phi


@given(formulas(), formulas())
def test_structural_order_is_total(f, g):
    assert (sort_key(f) == sort_key(g)) == (f == g)
    assert (f < g) or (g < f) or f == g


def test_formula_set_dedup_and_order():
    assert formula_set([q, p, q, K(p)]) == (p, q, K(p))


def test_size_and_substitute():
    assert size(parse("Kh ~p")) == 3
    assert substitute(parse("K p -> Kh p"), {"p": And(q, r)}) == parse("K (q & r) -> Kh (q & r)")
