import itertools

import pytest
from hypothesis import given, settings, strategies as st

from guardedkit.core import (
    Hypergraph, ParseError, Signature, Structure, atomic_type_of, format_structure, gaifman_graph,
    is_clique_guarded, is_guarded, parse_structure, structure_hypergraph,
)


def edges_of(g):
    return {frozenset(e) for e in g.edges()}


def test_gaifman_single_hyperedge_is_a_triangle():
    g = gaifman_graph(Hypergraph.of([["a", "b", "c"]]))
    assert edges_of(g) == {frozenset("ab"), frozenset("bc"), frozenset("ac")}


def test_gaifman_of_empty_hypergraph_has_no_edges():
    g = gaifman_graph(Hypergraph.of([], ["a"]))
    assert list(g.nodes) == ["a"] and not g.edges


def test_gaifman_of_two_pairs_is_a_path():
    g = gaifman_graph(Hypergraph.of([["a", "b"], ["b", "c"]]))
    assert edges_of(g) == {frozenset("ab"), frozenset("bc")}


def hyperedges_by_name(a):
    h = structure_hypergraph(a)
    return {frozenset(a.names[x] for x in e) for e in h.edges}


@pytest.mark.parametrize("text,expected", [
    ("E(a,b)", [{"a", "b"}]),
    ("E(a,b)\nE(b,c)", [{"a", "b"}, {"b", "c"}]),
    ("T(a,b,c)\nE(a,b)", [{"a", "b", "c"}]),
])
def test_structure_hypergraph_keeps_maximal_guarded_sets(text, expected):
    assert hyperedges_by_name(parse_structure(text)) == {frozenset(e) for e in expected}


def test_atomic_type_of_an_edge():
    a = parse_structure("E(a,b)")
    t = atomic_type_of(a, (0, 1))
    lits = t.literals(a.signature)
    assert set(lits) == {"x1!=x2", "!E(x1,x1)", "E(x1,x2)", "!E(x2,x1)", "!E(x2,x2)"}


def test_atomic_type_of_a_diagonal_pair():
    a = parse_structure("E(a,b)")
    t = atomic_type_of(a, (0, 0))
    assert t.equal(0, 1)
    assert not t.holds("E", (0, 1))


def test_atomic_type_with_unary_predicate():
    a = parse_structure("P(a)\nE(a,b)")
    t = atomic_type_of(a, (a.index("b"), a.index("a")))
    assert t.holds("E", (1, 0)) and t.holds("P", (1,)) and not t.holds("P", (0,))


def test_guarded_and_clique_guarded_sets():
    a = parse_structure("E(a,b)")
    assert is_guarded(a, {0, 1})
    tri = parse_structure("E(a,b)\nE(b,c)\nE(a,c)")
    abc = {tri.index(n) for n in "abc"}
    assert not is_guarded(tri, abc)
    assert is_clique_guarded(tri, abc)
    assert all(is_guarded(tri, {x}) for x in tri.universe)


def test_structure_round_trip_with_header_constants_and_isolated_elements():
    text = "rel E/2\nrel P/1\nconst k\nE(a,b)\nP(k)\nelem z\n"
    a = parse_structure(text)
    b = parse_structure(format_structure(a))
    assert format_structure(a) == format_structure(b)
    assert a.constants == {"k": a.index("k")}
    assert "z" in a.names


@pytest.mark.parametrize("text", ["E(a,b)\nE(a)", "rel E/2\nrel E/3", "E(a,b", "E(a-b)"])
def test_structure_parse_errors(text):
    with pytest.raises(ParseError):
        parse_structure(text)


def test_structure_rejects_bad_facts():
    sig = Signature({"E": 2})
    with pytest.raises(ValueError):
        Structure(sig, ["a"], [("E", (0,))])
    with pytest.raises(ValueError):
        Structure(sig, ["a"], [("E", (0, 1))])


structures = st.builds(
    lambda n, bits: Structure(
        Signature({"E": 2, "T": 3}), [f"v{i}" for i in range(n)],
        [f for f, b in zip(
            [("E", args) for args in itertools.product(range(n), repeat=2)]
            + [("T", args) for args in itertools.product(range(n), repeat=3)], bits) if b]),
    st.integers(1, 4), st.lists(st.booleans(), min_size=80, max_size=80),
)


@settings(max_examples=150, deadline=None)
@given(structures)
def test_hypergraph_width_bounded_by_signature_width(a):
    assert structure_hypergraph(a).width <= a.signature.width


@settings(max_examples=150, deadline=None)
@given(structures)
def test_gaifman_of_hypergraph_matches_fact_cooccurrence(a):
    direct = {frozenset((x, y)) for _, args in a.facts for x in args for y in args if x != y}
    g = gaifman_graph(structure_hypergraph(a))
    assert edges_of(g) == direct


@settings(max_examples=100, deadline=None)
@given(structures)
def test_format_parse_round_trip(a):
    b = parse_structure(format_structure(a))

    def named(s):
        return {(rel, tuple(s.names[x] for x in args)) for rel, args in s.facts}

    assert set(b.names) == set(a.names)
    assert named(b) == named(a)
    assert b.signature.relations == a.signature.relations
