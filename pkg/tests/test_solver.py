import random

import pytest
from hypothesis import given, settings, strategies as st

from guardedkit.bisim import are_guarded_bisimilar
from guardedkit.core import Signature, Structure, format_structure, parse_structure
from guardedkit.logic import model_check, parse_sentence, parse_tgds
from guardedkit.queries import evaluate, parse_query
from guardedkit.samples import cycle, random_gf_sentence, random_structure
from guardedkit.solver import (
    ENTAILED, NOT_ENTAILED, SAT, UNSAT, TypeBudgetExceeded, answer_query, answer_query_database, canonise,
    canonise_report, chase, gf_sat, small_model,
)

from oracles import disjoint_union, find_model, holds, shuffled

PE = Signature({"P": 1, "E": 2})
SUCCESSOR = parse_sentence("(exists x,y . E(x,y) : true) & (forall x,y . E(x,y) : exists z . E(y,z) : true)")
EMP = "Emp(M,N,D), Manages(M,D) -> exists E,N2 . Emp(E,N2,D), Reportsto(E,M)"


def test_sat_examples():
    assert gf_sat(parse_sentence("exists x . P(x) : true")).verdict == SAT
    contradiction = parse_sentence("(exists x . P(x) : true) & (forall x . P(x) : !P(x))")
    r = gf_sat(contradiction)
    assert r.verdict == UNSAT and r.witness is None
    assert find_model(contradiction, Signature({"P": 1})) is None
    with pytest.raises(ValueError):
        small_model(r)


def test_successor_axiom_has_a_finite_model():
    r = gf_sat(SUCCESSOR)
    assert r.sat
    m = small_model(r)
    assert model_check(m, SUCCESSOR) and holds(m, SUCCESSOR)
    assert find_model(SUCCESSOR, Signature({"E": 2})) is not None


def test_small_model_of_unary_existential():
    m = small_model(gf_sat(parse_sentence("exists x . P(x) : true")))
    assert len(m) >= 1 and any(rel == "P" for rel, _ in m.facts)


def test_type_budget():
    with pytest.raises(TypeBudgetExceeded):
        gf_sat(SUCCESSOR, max_types=1)


def test_answer_examples():
    two_path = parse_query("exists x,y,z . E(x,y) & E(y,z)")
    assert answer_query(SUCCESSOR, two_path).verdict == ENTAILED
    r = answer_query(SUCCESSOR, parse_query("exists x . E(x,x)"))
    assert r.verdict == NOT_ENTAILED
    m = r.counter_model
    assert model_check(m, SUCCESSOR)
    assert not any(args[0] == args[1] for _, args in m.facts)


def test_unsatisfiable_sentence_entails_everything():
    f = parse_sentence("(exists x . P(x) : true) & (forall x . P(x) : !P(x))")
    r = answer_query(f, parse_query("exists x . E(x,x)"))
    assert r.verdict == ENTAILED and r.stats.get("vacuous")


def test_certified_counter_model_uses_the_larger_level():
    r = answer_query(SUCCESSOR, parse_query("exists x . E(x,x)"), certify=True)
    assert r.verdict == NOT_ENTAILED and r.stats["cover level"] == 3


def test_database_without_rules_is_plain_evaluation():
    db = parse_structure("E(a,b)\nE(b,c)")
    for text in ("exists x,y,z . E(x,y) & E(y,z)", "exists x,y . E(x,y) & E(y,x)"):
        q = parse_query(text)
        assert answer_query_database(db, [], q).entailed == evaluate(db, q)


def test_rule_example_database():
    db = parse_structure("Emp(m,n,d)\nManages(m,d)")
    q = parse_query("exists e,n2,d,m . Emp(e,n2,d) & Reportsto(e,m) & Manages(m,d)")
    assert answer_query_database(db, parse_tgds(EMP), q).verdict == ENTAILED


def test_empty_database_entails_nothing():
    db = Structure(Signature({"E": 2}), [], [])
    rules = parse_tgds("E(X,Y) -> exists Z . E(Y,Z)")
    r = answer_query_database(db, rules, parse_query("exists x,y . E(x,y)"))
    assert r.verdict == NOT_ENTAILED


def test_database_route_through_type_elimination():
    db = parse_structure("E(a,b)")
    rules = parse_tgds("E(X,Y) -> exists Z . E(Y,Z)")
    back = parse_query("exists x,y . E(x,y) & E(y,x)")
    r = answer_query_database(db, rules, back, chase_rounds=0)
    assert r.verdict == NOT_ENTAILED and r.stats["route"] == "type elimination"
    assert not evaluate(r.counter_model, back)
    two = parse_query("exists x,y,z . E(x,y) & E(y,z)")
    assert answer_query_database(db, rules, two, chase_rounds=0).verdict == ENTAILED


def test_chase_steps():
    db = parse_structure("E(a,b)")
    rules = parse_tgds("E(X,Y) -> exists Z . E(Y,Z)")
    c, done = chase(db, rules, max_rounds=3)
    assert not done and len(c) == 5
    c, done = chase(parse_structure("E(a,b)\nE(b,a)"), rules)
    assert done and len(c) == 2


def test_canonise_examples():
    assert format_structure(canonise(cycle(3))) == format_structure(canonise(cycle(4)))
    c = canonise(cycle(3))
    assert format_structure(canonise(c)) == format_structure(c)
    assert format_structure(canonise(cycle(2))) != format_structure(c)
    assert are_guarded_bisimilar(c, cycle(3))
    assert canonise_report(parse_structure("P(a)")).method == "width-one"


sentences = st.builds(lambda seed: random_gf_sentence(random.Random(seed), PE, 2, 2), st.integers(0, 10**9))


@settings(max_examples=25, deadline=None)
@given(sentences)
def test_sat_agrees_with_brute_force(f):
    r = gf_sat(f)
    found = find_model(f, PE, 2)
    if found is not None:
        assert r.sat
    if r.sat:
        assert model_check(small_model(r), f)


structures = st.builds(lambda seed, n: random_structure(random.Random(seed), Signature({"E": 2}), n, 0.4),
                       st.integers(0, 10**9), st.integers(1, 3))


@settings(max_examples=40, deadline=None)
@given(structures, st.integers(0, 10**6))
def test_canonise_is_bisimulation_invariant(a, seed):
    b = disjoint_union(a, shuffled(a, random.Random(seed)))
    ca = canonise(a)
    assert format_structure(ca) == format_structure(canonise(b))
    assert are_guarded_bisimilar(ca, a)
