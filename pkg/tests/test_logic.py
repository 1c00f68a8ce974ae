import random

import pytest
from hypothesis import given, settings, strategies as st

from guardedkit.core import ParseError, Signature, Structure, parse_structure
from guardedkit.logic import (
    Atom, Exists, Forall, Truth, UnguardedError, UnguardedRuleError, cgf_to_gf, conjuncts, gtgd_to_gf,
    is_clique_guarded_formula, model_check, nnf, parse_formula, parse_formula_file, parse_sentence, parse_tgds,
    print_formula, scott_normal_form, signature_of, simplify,
)
from guardedkit.samples import random_cgf_sentence, random_gf_sentence, random_structure

from oracles import all_structures, holds

PE = Signature({"P": 1, "E": 2})


def test_parse_examples():
    f = parse_formula("exists x,y . E(x,y) : true")
    assert isinstance(f, Exists) and f.guard == (Atom("E", ("x", "y")),)
    g = parse_formula("forall x . P(x) : !P(x)")
    assert isinstance(g, Forall)
    with pytest.raises(UnguardedError):
        parse_formula("forall x,y . true : E(x,y)")


@pytest.mark.parametrize("text", [
    "exists x . P(x) : true",
    "forall x,y . E(x,y) : (exists z . E(y,z) : !P(z)) | P(x)",
    "(exists x . P(x) : true) & !(forall x,y . E(x,y) : E(y,x))",
    "forall x,y . E(x,y) : x = y -> P(x)",
])
def test_print_parse_round_trip(text):
    f = parse_formula(text)
    assert parse_formula(print_formula(f)) == f


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse_formula("exists x . P(x) : (")
    assert exc.value.line == 1
    with pytest.raises(ParseError):
        parse_sentence("P(x)")
    with pytest.raises(ParseError):
        parse_formula_file("exists x . P(x) : true; exists x,y . P(x,y) : true")


def test_clique_guards_need_the_flag():
    text = "exists x,y,z . E(x,y) & E(y,z) & E(z,x) : true"
    with pytest.raises(UnguardedError):
        parse_formula(text)
    f = parse_formula(text, cgf=True)
    assert is_clique_guarded_formula(f)


def test_model_check_examples():
    a = parse_structure("E(a,b)")
    assert model_check(a, parse_sentence("exists x,y . E(x,y) : true"))
    assert not model_check(a, parse_sentence("forall x,y . E(x,y) : E(y,x)"))
    two = parse_structure("E(a,b)\nE(b,a)")
    assert model_check(two, parse_sentence("forall x,y . E(x,y) : exists z . E(y,z) : true"))


def test_normal_form_of_plain_existential():
    snf = scott_normal_form(parse_sentence("exists x . P(x) : true"))
    assert len(snf.exists) == 1
    assert snf.exists[0].variables == ()
    assert snf.exists[0].trigger.args == ()
    assert len(snf.fresh) <= 1


def test_normal_form_keeps_shaped_input():
    f = parse_sentence("forall x . P(x) : exists y . E(x,y) : Q(y)")
    snf = scott_normal_form(f)
    assert snf.fresh == {}
    assert len(snf.exists) == 1
    e = snf.exists[0]
    assert e.trigger == Atom("P", ("x",)) and e.guard == (Atom("E", ("x", "y")),) and e.body == Atom("Q", ("y",))


def test_translation_of_the_rule_example():
    rules = parse_tgds("Emp(M,N,D), Manages(M,D) -> exists E,N2 . Emp(E,N2,D), Reportsto(E,M)")
    printed = [print_formula(f) for f in gtgd_to_gf(rules)]
    assert printed == [
        "forall M,N,D . Emp(M,N,D) : Manages(M,D) -> (exists E,N2 . aux(M,D,E,N2) : true)",
        "forall M,D,E,N2 . aux(M,D,E,N2) : Emp(E,N2,D)",
        "forall M,D,E,N2 . aux(M,D,E,N2) : Reportsto(E,M)",
    ]


def test_rule_translation_shapes():
    plain = gtgd_to_gf(parse_tgds("E(X,Y) -> E(Y,X)"))
    assert [print_formula(f) for f in plain] == ["forall X,Y . E(X,Y) : E(Y,X)"]
    ex = gtgd_to_gf(parse_tgds("R(X,Y) -> exists Z . S(Y,Z)"))
    assert [print_formula(f) for f in ex] == [
        "forall X,Y . R(X,Y) : exists Z . aux(Y,Z) : true",
        "forall Y,Z . aux(Y,Z) : S(Y,Z)",
    ]
    with pytest.raises(UnguardedRuleError):
        gtgd_to_gf(parse_tgds("E(X,Y), E(Y,Z) -> E(X,Z)"))


def test_clique_translation_of_gf_input_adds_only_the_axioms():
    f = parse_sentence("forall x,y . E(x,y) : exists z . E(y,z) : true")
    g = cgf_to_gf(f)
    assert conjuncts(g)[0] == f
    assert "G" in signature_of(g).names


sentences = st.builds(lambda seed: random_gf_sentence(random.Random(seed), PE, random.Random(seed).randint(1, 3),
                                                      random.Random(seed + 1).randint(1, 3)),
                      st.integers(0, 10**9))
small = st.builds(lambda seed, n: random_structure(random.Random(seed), PE, n, 0.35),
                  st.integers(0, 10**9), st.integers(1, 3))


@settings(max_examples=200, deadline=None)
@given(sentences, small)
def test_model_check_matches_tarski_semantics(f, a):
    assert model_check(a, f) == holds(a, f)


@settings(max_examples=150, deadline=None)
@given(sentences, small)
def test_nnf_and_simplify_preserve_truth(f, a):
    assert holds(a, nnf(f)) == holds(a, f)
    assert holds(a, simplify(nnf(f))) == holds(a, f)


@settings(max_examples=150, deadline=None)
@given(sentences)
def test_print_parse_round_trip_on_random_sentences(f):
    assert parse_sentence(print_formula(f)) == f


def _has_model(f, sig, size):
    return any(model_check(a, f) for a in all_structures(sig, size))


@settings(max_examples=40, deadline=None)
@given(sentences)
def test_normal_form_is_equisatisfiable_per_domain_size(f):
    snf = scott_normal_form(f)
    g = snf.formula()
    for n in (1, 2):
        assert _has_model(f, PE, n) == _has_model(g, PE.union(snf.signature), n)


@settings(max_examples=40, deadline=None)
@given(sentences, small)
def test_normal_form_models_reduct_to_models(f, a):
    snf = scott_normal_form(f)
    full = PE.union(snf.signature)
    expanded = a.with_signature(full)
    # every model of the normal form is a model of the input after forgetting fresh symbols
    if model_check(expanded, snf.formula()):
        assert model_check(a, f)


cgf_sentences = st.builds(lambda seed: random_cgf_sentence(random.Random(seed), 2), st.integers(0, 10**9))


@settings(max_examples=80, deadline=None)
@given(cgf_sentences, small)
def test_clique_translation_with_universal_guard_relation(f, a):
    g = cgf_to_gf(f)
    sig = signature_of(g)
    k = sig.arity("G")
    import itertools
    facts = list(a.facts) + [("G", args) for args in itertools.product(a.universe, repeat=k)]
    star = Structure(a.signature.union(Signature({"G": k})), list(a.names), facts)
    if holds(a, f):
        assert model_check(star, g)


def test_truth_constants():
    assert model_check(parse_structure("P(a)"), Truth(True))
