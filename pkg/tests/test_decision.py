import pytest
from hypothesis import given, settings

from gen import small_formulas
from knowhow.checker import eval, extension
from knowhow.decision import (atoms, bounded_model_search, canonical_model, free_members,
                              satisfiable, valid)
from knowhow.errors import TooLarge
from knowhow.formula import And, K, Kh, Not, Prop, closure, parse, subformulas

p = Prop("p")


def members(text):
    return {frozenset(str(g) for g in a.members) for a in atoms(parse(text))}


def test_atoms_of_p():
    assert members("p") == {frozenset({"p", "K p"}), frozenset({"p"}), frozenset()}


def test_atoms_keep_k_without_kk():
    # axiom 4 is not enforced inside a single atom
    assert frozenset({"K p", "p"}) in members("K p")


def test_contradiction_is_out_of_every_atom():
    f = parse("p & ~p")
    assert all(f not in a for a in atoms(f))


def test_atom_coherence():
    f = parse("Kh (p & q) & ~K p")
    for a in atoms(f):
        for g in a.closure:
            if isinstance(g, Not):
                assert (g in a) != (g.arg in a)
            if isinstance(g, And):
                assert (g in a) == (g.left in a and g.right in a)
            if isinstance(g, K):
                assert g not in a or g.arg in a
                if Kh(g.arg) in a.closure and g in a:
                    assert Kh(g.arg) in a


def test_atoms_deterministic():
    f = parse("Kh p -> K q")
    assert atoms(f) == atoms(f)


def test_atom_cap():
    f = parse("K p & K q & K r & K s & K t & K u & K v & K w & K x & K y & K z")
    # eleven letters, their K and K K, and K over each of the ten conjunctions
    assert len(free_members(f)) == 43
    with pytest.raises(TooLarge):
        atoms(f)
    with pytest.raises(TooLarge):
        canonical_model(f, cap=10)


def test_canonical_model_of_kh_p():
    cm = canonical_model(parse("Kh p"))
    m = cm.model
    assert m.actions == ("p",)
    for s, _, t in m.transitions:
        assert Kh(p) in cm.atom_of(s) and K(p) not in cm.atom_of(s)
        assert K(p) in cm.atom_of(t)
    assert len(m.states) <= 2 ** 4
    assert cm.within_bound


def test_canonical_model_without_kh():
    cm = canonical_model(p)
    assert cm.model.actions == ()
    assert cm.model.transitions == frozenset()


def test_canonical_blocks_are_k_parts():
    cm = canonical_model(parse("K p | Kh ~p"))
    for block in cm.model.blocks:
        assert len({cm.atom_of(s).k_part for s in block}) == 1
    assert cm.uniformity_violations == ()


@pytest.mark.parametrize("text", ["Kh Kh p -> Kh p", "Kh p -> Kh K p", "~Kh p -> K ~Kh p",
                                  "K p -> K K p", "(K p -> q) & K p"])
def test_truth_lemma_on_pruned_atoms(text):
    f = parse(text)
    cm = canonical_model(f)
    for g in cm.closure:
        ext = extension(cm.model, g)
        for s in cm.model.states:
            assert (s in ext) == (g in cm.atom_of(s))


def test_unpruned_model_keeps_every_atom():
    f = parse("K p")
    assert len(canonical_model(f, prune=False).atoms) == len(atoms(f))
    assert canonical_model(f).eliminated


def test_sat_examples():
    res = satisfiable(parse("~(Kh p & Kh q -> Kh (p & q))"))
    assert res.satisfiable
    assert eval(res.model, res.state, parse("~(Kh p & Kh q -> Kh (p & q))"))
    res = satisfiable(parse("p & ~p"))
    assert not res.satisfiable and res.cross_checked
    assert not satisfiable(parse("~(Kh Kh p -> Kh p)"))


def test_valid_examples():
    assert valid(parse("Kh p -> Kh K p"))
    assert valid(parse("~Kh p -> K ~Kh p"))
    assert not valid(parse("Kh p -> K p"))
    assert not valid(parse("K (p -> q) -> (Kh p -> Kh q)"))
    assert valid(parse("Kh (p & q) -> Kh p"))


def test_bounded_examples():
    m, s = bounded_model_search(p)
    assert len(m.states) == 1 and eval(m, s, p)
    m, s = bounded_model_search(parse("Kh p & ~K p"))
    assert len(m.states) == 2 and len(m.transitions) == 1
    assert bounded_model_search(parse("p & ~p")) is None


def test_bounded_limits():
    with pytest.raises(ValueError):
        bounded_model_search(parse("p & q & r"))
    with pytest.raises(ValueError):
        bounded_model_search(p, max_states=5)


def test_bounded_respects_state_limit():
    # three pairwise distinguishable classes plus a Kh step need more than two states
    f = parse("Kh p & ~K p & Kh q & ~K q & ~Kh (p & q)")
    assert bounded_model_search(f, 2) is None
    m, s = bounded_model_search(f, 4)
    assert eval(m, s, f)


@settings(max_examples=60, deadline=None)
@given(small_formulas)
def test_sat_agrees_with_bounded_search(f):
    res = satisfiable(f, cross_check=False)
    found = bounded_model_search(f, 4)
    assert res.satisfiable == (found is not None)
    if res.satisfiable:
        assert eval(res.model, res.state, f)
        assert len(res.model.states) <= 2 ** (2 * len(subformulas(f)) + 2 * len(closure(subformulas(f))))


@settings(max_examples=60, deadline=None)
@given(small_formulas)
def test_canonical_bound_and_uniformity(f):
    cm = canonical_model(f)
    assert cm.within_bound
    assert cm.uniformity_violations == ()
