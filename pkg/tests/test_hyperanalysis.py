import random

import pytest
from hypothesis import given, settings, strategies as st

from guardedkit.core import Hypergraph, Signature, parse_structure
from guardedkit.hyperanalysis import (
    OracleBudgetExceeded, acyclic_extension_exists, chordless_cycle, find_homomorphisms, format_hypergraph,
    graham_reduce, is_acyclic, is_chordal, is_conformal, is_homomorphism, parse_hypergraph,
    tree_decomposable_hom_exists, uncovered_clique,
)
from guardedkit.samples import cycle, path, random_hypergraph, random_structure

from oracles import homomorphisms

PATH = Hypergraph.of([["a", "b"], ["b", "c"]])
TRIANGLE = Hypergraph.of([["a", "b"], ["b", "c"], ["a", "c"]])
GUARDED_TRIANGLE = Hypergraph.of([["a", "b", "c"], ["a", "b"], ["b", "c"], ["a", "c"]])
SQUARE = Hypergraph.of([["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]])


def test_graham_on_examples():
    assert graham_reduce(PATH)[0]
    assert not graham_reduce(TRIANGLE)[0]
    assert graham_reduce(GUARDED_TRIANGLE)[0]


def test_conformality_and_chordality_examples():
    assert not is_conformal(TRIANGLE) and is_chordal(TRIANGLE)
    assert uncovered_clique(TRIANGLE) == frozenset("abc")
    single = Hypergraph.of([["a", "b", "c"]])
    assert is_conformal(single) and is_chordal(single)
    assert not is_chordal(SQUARE)
    assert set(chordless_cycle(SQUARE)) == set("abcd")


def test_bounded_variants():
    # the uncovered triangle needs bound 3; the square needs bound 4
    assert is_conformal(TRIANGLE, 2)
    assert not is_conformal(TRIANGLE, 3)
    assert is_chordal(SQUARE, 3)
    assert not is_chordal(SQUARE, 4)
    with pytest.raises(ValueError):
        is_conformal(TRIANGLE, 1)


def test_is_acyclic_examples():
    assert is_acyclic(PATH)
    assert not is_acyclic(TRIANGLE)
    assert is_acyclic(Hypergraph.of([["a", "b", "c"], ["a", "b"]]))


def test_join_tree_is_valid():
    ok, td = graham_reduce(GUARDED_TRIANGLE)
    assert ok and td.violations(GUARDED_TRIANGLE) == []
    assert len(td.roots()) == 1


def test_hypergraph_text_format():
    h = parse_hypergraph("# a triangle\n{a,b}\nb c\na, c\nvertex z\n")
    assert h.vertices == ("a", "b", "c", "z")
    assert len(h.edges) == 3
    assert parse_hypergraph(format_hypergraph(h)) == h


def test_homomorphism_examples():
    edge = parse_structure("E(x,y)")
    target = parse_structure("E(a,b)")
    homs = find_homomorphisms(edge, target)
    assert homs == [{0: 0, 1: 1}]
    assert find_homomorphisms(cycle(3), path(3)) == []
    loop = parse_structure("E(a,a)")
    assert find_homomorphisms(edge, loop) == [{0: 0, 1: 0}]


def test_tree_decomposable_hom_examples():
    assert tree_decomposable_hom_exists(parse_structure("E(x,y)"), path(2))
    tri = cycle(3)
    assert not tree_decomposable_hom_exists(tri, tri)
    guarded = parse_structure("E(a,b)\nE(b,c)\nE(c,a)\nT(a,b,c)")
    q = parse_structure("E(x,y)\nE(y,z)\nE(z,x)\nrel T/3")
    assert tree_decomposable_hom_exists(q, guarded)


def test_oracle_budget_is_enforced():
    with pytest.raises(OracleBudgetExceeded):
        acyclic_extension_exists([], [("E", (i, i + 1)) for i in range(40)], 10, budget=100)


hypergraphs = st.builds(lambda seed: random_hypergraph(random.Random(seed)), st.integers(0, 10**9))


@settings(max_examples=300, deadline=None)
@given(hypergraphs)
def test_graham_agrees_with_conformal_and_chordal(h):
    assert graham_reduce(h)[0] == (is_conformal(h) and is_chordal(h))


@settings(max_examples=100, deadline=None)
@given(hypergraphs, st.integers(0, 10**6))
def test_graham_is_confluent(h, seed):
    rng = random.Random(seed)
    verdicts = {graham_reduce(h, rng)[0] for _ in range(10)}
    assert verdicts == {graham_reduce(h)[0]}


@settings(max_examples=150, deadline=None)
@given(hypergraphs)
def test_join_tree_properties(h):
    ok, td = graham_reduce(h)
    if ok:
        assert td.violations(h) == []


structures = st.builds(lambda seed, n: random_structure(random.Random(seed), Signature({"E": 2}), n, 0.35),
                       st.integers(0, 10**9), st.integers(1, 3))


@settings(max_examples=120, deadline=None)
@given(structures, structures)
def test_homomorphisms_match_brute_force(a, b):
    got = find_homomorphisms(a, b)
    assert sorted(map(sorted_items, got)) == sorted(map(sorted_items, homomorphisms(a, b)))
    assert all(is_homomorphism(h, a, b) for h in got)


def sorted_items(d):
    return tuple(sorted(d.items()))
