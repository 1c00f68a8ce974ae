import random

import pytest
from hypothesis import given, settings, strategies as st

from guardedkit.bisim import (
    SignatureMismatch, are_guarded_bisimilar, format_invariant, game_graph, invariant, invariants_isomorphic,
    ordered_invariant, parse_invariant,
)
from guardedkit.core import Signature, parse_structure
from guardedkit.logic import model_check
from guardedkit.samples import cycle, random_gf_sentence, random_structure, structure_corpus

from oracles import disjoint_union, guarded_bisimilar, shuffled

PE = Signature({"P": 1, "E": 2})


def test_game_graph_of_an_edge():
    a = parse_structure("E(a,b)")
    g = game_graph(a)
    assert g.vertices == [(0, 1), (1, 0)]
    assert g.labels[0].holds("E", (0, 1)) and g.labels[1].holds("E", (1, 0))
    rhos = {rho for rho, v in g.edges[0] if v == 1}
    assert frozenset({(0, 1), (1, 0)}) in {frozenset(r) for r in rhos}


def test_game_graph_sizes():
    assert len(game_graph(parse_structure("P(a)")).vertices) == 1
    assert len(game_graph(cycle(3)).vertices) == 6
    g = game_graph(parse_structure("P(a)"))
    assert any(v == 0 for _, v in g.edges[0])


def test_bisimilarity_examples():
    assert are_guarded_bisimilar(cycle(3), cycle(3))
    assert are_guarded_bisimilar(cycle(3), cycle(4))
    assert not are_guarded_bisimilar(cycle(3), cycle(2))
    with pytest.raises(SignatureMismatch):
        are_guarded_bisimilar(cycle(3), parse_structure("P(a)"))


def test_invariant_examples():
    assert invariants_isomorphic(invariant(cycle(3)), invariant(cycle(4)))
    assert len(invariant(parse_structure("P(a)")).labels) == 1
    pq = invariant(parse_structure("P(a)\nQ(b)"))
    assert len(pq.labels) == 2
    assert all(c == d for c, _, d in pq.edges)


def test_ordered_invariant_examples():
    assert len(ordered_invariant(parse_structure("P(a)")).labels) == 1
    assert format_invariant(ordered_invariant(cycle(3))) == format_invariant(ordered_invariant(cycle(4)))
    pq = ordered_invariant(parse_structure("P(a)\nQ(b)"))
    sig = pq.signature
    assert [t.literals(sig) for t in pq.labels] == [["!P(x1)", "Q(x1)"], ["P(x1)", "!Q(x1)"]]


@pytest.mark.parametrize("name", sorted(structure_corpus()))
def test_invariant_text_round_trip(name):
    inv = ordered_invariant(structure_corpus()[name])
    text = format_invariant(inv)
    assert format_invariant(parse_invariant(text)) == text


def test_refinement_stage_bound():
    for a in structure_corpus().values():
        assert ordered_invariant(a).stages <= len(game_graph(a).vertices) + 1


structures = st.builds(lambda seed, n: random_structure(random.Random(seed), PE, n, 0.3),
                       st.integers(0, 10**9), st.integers(1, 3))


@settings(max_examples=150, deadline=None)
@given(structures, structures)
def test_bisimilarity_matches_fixpoint_oracle(a, b):
    assert are_guarded_bisimilar(a, b) == guarded_bisimilar(a, b)


@settings(max_examples=80, deadline=None)
@given(structures, st.integers(0, 10**6))
def test_engineered_bisimilar_pairs(a, seed):
    rng = random.Random(seed)
    b = shuffled(a, rng)
    assert are_guarded_bisimilar(a, b)
    assert are_guarded_bisimilar(a, disjoint_union(a, b))
    assert format_invariant(ordered_invariant(a)) == format_invariant(ordered_invariant(disjoint_union(a, b)))


@settings(max_examples=60, deadline=None)
@given(structures, structures, structures)
def test_bisimilarity_is_an_equivalence(a, b, c):
    assert are_guarded_bisimilar(a, a)
    assert are_guarded_bisimilar(a, b) == are_guarded_bisimilar(b, a)
    if are_guarded_bisimilar(a, b) and are_guarded_bisimilar(b, c):
        assert are_guarded_bisimilar(a, c)


@settings(max_examples=80, deadline=None)
@given(structures, st.integers(0, 10**6))
def test_guarded_sentences_cannot_separate_bisimilar_structures(a, seed):
    rng = random.Random(seed)
    b = disjoint_union(a, shuffled(a, rng))
    for _ in range(10):
        f = random_gf_sentence(rng, PE, 2, 2)
        assert model_check(a, f) == model_check(b, f)


@settings(max_examples=80, deadline=None)
@given(structures)
def test_ordering_does_not_change_the_quotient(a):
    plain, ordered = invariant(a), ordered_invariant(a)
    assert len(plain.labels) == len(ordered.labels)
    assert invariants_isomorphic(plain, ordered)
