import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from guardedkit.core import ParseError, Signature, parse_structure
from guardedkit.hyperanalysis import tree_decomposable_hom_exists
from guardedkit.logic import model_check, print_formula
from guardedkit.queries import (
    ConjunctiveQuery, TreeifyBudgetExceeded, UnionQuery, acq_to_gf, canonical_form, cq_entails, evaluate,
    format_query, is_acyclic_query, parse_query, treeify,
)
from guardedkit.samples import query_corpus, random_structure

from oracles import all_structures, cq_holds

E = Signature({"E": 2})
ET = Signature({"E": 2, "T": 3})


def cq(text):
    return parse_query(text).disjuncts[0]


TRIANGLE = parse_query("exists x,y,z . E(x,y) & E(y,z) & E(z,x)")


def test_parse_and_format():
    q = parse_query("Q := exists x,y,z . E(x,y) & E(y,z) || exists u . E(u,u)")
    assert len(q.disjuncts) == 2 and q.height == 2
    assert parse_query(format_query(q)) == q
    with pytest.raises(ParseError):
        parse_query("exists x . E(x,y)")
    with pytest.raises(ParseError):
        parse_query("E(x,y) & E(x)")


def test_evaluate_examples():
    assert evaluate(parse_structure("E(a,b)"), parse_query("exists x,y . E(x,y)"))
    assert not evaluate(parse_structure("E(a,b)\nE(b,c)"), TRIANGLE)
    assert evaluate(parse_structure("E(a,a)"), TRIANGLE)
    with pytest.raises(ValueError):
        evaluate(parse_structure("P(a)"), TRIANGLE)


def test_empty_union_is_false():
    for a in all_structures(E, 2):
        assert not evaluate(a, UnionQuery(()))
    assert str(UnionQuery(())) == "FALSE"


def test_containment_examples():
    assert cq_entails(cq("E(x,y) & E(y,z)"), cq("E(u,v)"))
    assert not cq_entails(cq("E(x,y)"), TRIANGLE.disjuncts[0])
    t = TRIANGLE.disjuncts[0]
    assert cq_entails(t, t)


def test_acyclicity_examples():
    two = cq("exists x,y,z . E(x,y) & E(y,z)")
    assert is_acyclic_query(two)
    assert print_formula(acq_to_gf(two)) == "exists x,y . E(x,y) : exists z . E(y,z) : true"
    assert not is_acyclic_query(TRIANGLE.disjuncts[0])
    assert is_acyclic_query(cq("T(x,y,z) & E(x,y)"))
    with pytest.raises(ValueError):
        acq_to_gf(TRIANGLE.disjuncts[0])


def test_treeify_single_edge_is_itself():
    q = parse_query("exists x,y . E(x,y)")
    chi = treeify(q, E, minimize=True)
    assert [canonical_form(d.atoms) for d in chi.disjuncts] == [canonical_form(q.disjuncts[0].atoms)]


def test_treeify_triangle_over_edges_only_collapses_to_loops():
    # any acyclic binary pattern entailing the directed triangle must contain a loop
    chi = treeify(TRIANGLE, E)
    assert chi.disjuncts
    for d in chi.disjuncts:
        assert any(args[0] == args[1] for _, args in d.atoms)
    loop = parse_query("exists x . E(x,x)")
    for n in (1, 2, 3):
        for a in all_structures(E, n):
            assert evaluate(a, chi) == evaluate(a, loop)


def test_treeify_triangle_with_ternary_guard():
    chi = treeify(TRIANGLE, ET)
    guarded = canonical_form(cq("T(x,y,z) & E(x,y) & E(y,z) & E(z,x)").atoms)
    assert guarded in {canonical_form(d.atoms) for d in chi.disjuncts}


def test_treeify_budget():
    with pytest.raises(TreeifyBudgetExceeded) as exc:
        treeify(parse_query("exists x,y,z,u . E(x,y) & E(y,z) & E(z,u) & E(u,x)"), ET, budget=10)
    assert exc.value.estimate > 10


def test_cycle_family_disjunct_counts_do_not_shrink():
    counts = []
    for n in (3, 4):
        atoms = " & ".join(f"E(v{i},v{(i + 1) % n})" for i in range(n))
        counts.append(len(treeify(parse_query(atoms), ET, minimize=True).disjuncts))
    assert counts == sorted(counts)


@pytest.mark.parametrize("name", sorted(query_corpus()))
def test_treeify_output_is_acyclic_and_entails(name):
    q = query_corpus()[name]
    chi = treeify(q, E)
    for d in chi.disjuncts:
        assert is_acyclic_query(d)
        assert any(cq_entails(d, p) for p in q.disjuncts)


def test_treeify_is_deterministic():
    assert treeify(TRIANGLE, ET) == treeify(TRIANGLE, ET)


queries = st.builds(
    lambda seed: ConjunctiveQuery.of(
        [("E", tuple(random.Random(seed + i).choice("xyzu") for _ in range(2)))
         for i in range(random.Random(seed).randint(1, 4))]),
    st.integers(0, 10**9))
structures = st.builds(lambda seed, n: random_structure(random.Random(seed), E, n, 0.35),
                       st.integers(0, 10**9), st.integers(1, 4))


@settings(max_examples=200, deadline=None)
@given(queries, structures)
def test_evaluate_matches_brute_force(d, a):
    assert evaluate(a, UnionQuery((d,))) == cq_holds(a, d.atoms)


@settings(max_examples=150, deadline=None)
@given(queries, structures)
def test_guarded_rewriting_of_acyclic_queries(d, a):
    if is_acyclic_query(d):
        assert model_check(a, acq_to_gf(d)) == cq_holds(a, d.atoms)


@settings(max_examples=100, deadline=None)
@given(queries, st.integers(0, 10**6))
def test_canonical_form_ignores_renaming_and_order(d, seed):
    rng = random.Random(seed)
    vs = list(d.variables)
    fresh = [f"w{i}" for i in range(len(vs))]
    rng.shuffle(fresh)
    ren = dict(zip(vs, fresh))
    atoms = [(r, tuple(ren[v] for v in args)) for r, args in d.atoms]
    rng.shuffle(atoms)
    assert canonical_form(atoms) == canonical_form(d.atoms)


@settings(max_examples=60, deadline=None)
@given(queries, structures)
def test_treeification_entails_query(d, a):
    chi = treeify(UnionQuery((d,)), E)
    if evaluate(a, chi):
        assert cq_holds(a, d.atoms)


def test_canonical_form_separates_non_isomorphic():
    assert canonical_form(cq("E(x,y) & E(y,z)").atoms) != canonical_form(cq("E(x,y) & E(x,z)").atoms)
    forms = {canonical_form(p) for p in itertools.permutations([("E", ("a", "b")), ("E", ("b", "c"))])}
    assert len(forms) == 1


@settings(max_examples=200, deadline=None)
@given(queries, structures)
def test_tree_decomposable_homs_are_caught_by_treeification(d, a):
    if tree_decomposable_hom_exists(d.canonical_structure(E), a):
        assert evaluate(a, treeify(UnionQuery((d,)), E))
