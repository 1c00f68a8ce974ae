import pytest

from guardedkit.bisim import invariant
from guardedkit.core import Structure, parse_structure
from guardedkit.cover import (
    Const, CoverError, CoverParams, CoverTooLarge, Func, SuperscriptBudgetExceeded, build_cover, check_conformality,
    check_cover, check_realises, check_weak_acyclicity, classify_pairs, height, j_unique, minimal_j, project,
    realise_width_one, relation_of, run_checks, truncate,
)
from guardedkit.bisim import are_guarded_bisimilar
from guardedkit.queries import evaluate, treeify
from guardedkit.samples import cycle, path, query_corpus, structure_corpus


def small(name, n=2, m=None, mode="reduced"):
    inv = invariant(structure_corpus()[name])
    return build_cover(inv, CoverParams(n, m, J=minimal_j(2, m or n), edge_mode=mode))


def test_truncation_rules():
    c = Const(0, 0, 5)
    assert truncate(c, 0) == c
    f = Func(3, 1, 1, 7, (Const(0, 0, 2),))
    assert truncate(f, 0) == Const(1, 1, 7)
    g = Func(4, 0, 0, 1, (f,))
    assert truncate(g, 1) == Func(4, 0, 0, 1, (Const(1, 1, 7),))
    for t in (c, f, g):
        assert truncate(t, height(t)) == t
    with pytest.raises(ValueError):
        truncate(c, -1)


def test_superscripts_unique_along_paths():
    assert j_unique(Func(0, 0, 0, 1, (Const(0, 0, 2),)))
    assert not j_unique(Func(0, 0, 0, 1, (Const(0, 0, 1),)))


def test_params_validation():
    with pytest.raises(ValueError):
        CoverParams(1)
    with pytest.raises(ValueError):
        CoverParams(3, 2)
    with pytest.raises(ValueError):
        CoverParams(2, edge_mode="bogus")
    p = CoverParams(3)
    assert p.M == 6
    assert p.j_budget(2) == 2 ** 5
    assert CoverParams(2, 4).j_budget(3) == 3 ** 6


def test_constant_layer_has_budget_many_hyperedges_per_class():
    inv = invariant(cycle(2))
    c = build_cover(inv, CoverParams(2, 2, J=4, edge_mode="all"))
    level0 = [r for r in c.records if r.level == 0]
    for e in range(len(c.inv.types)):
        assert sum(1 for r in level0 if r.cls == e) == c.J == 4


def test_width_one_input_is_rejected_and_realised_directly():
    inv = invariant(parse_structure("P(a)"))
    with pytest.raises(CoverError):
        build_cover(inv, CoverParams(2))
    a = realise_width_one(inv)
    assert are_guarded_bisimilar(a, parse_structure("P(a)"))


@pytest.mark.parametrize("name", ["edge", "c2", "c3", "sym-edge", "star", "tail-loop"])
def test_small_covers_realise_their_invariant(name):
    c = small(name)
    assert check_realises(c)
    for t in c.terms:
        assert height(t) <= c.N and j_unique(t)


def test_three_cycle_cover_passes_all_checks():
    suite = run_checks(small("c3"))
    assert suite.ok, suite.report()


def test_projection_to_own_level_is_identity():
    c = small("c3")
    target, pi = project(c, 2)
    assert target is c and all(k == v for k, v in pi.items())
    assert check_cover(pi, c.structure, c.structure)
    with pytest.raises(ValueError):
        project(c, 3)


def test_projection_between_levels_is_a_cover():
    c = small("path2", 3, 3)
    lower = build_cover(c.inv.source, c.params.with_level(2))
    _, pi = project(c, 2, lower)
    assert check_cover(pi, c.structure, lower.structure)
    assert all(pi[c.index[t]] == lower.index[t] for t in c.terms if isinstance(t, Const))


def test_collapse_map_is_not_rigid():
    a = path(1)
    b = path(1)
    folded = Structure(a.signature, ["x"], [("E", (0, 0))])
    rep = check_cover({0: 0, 1: 0}, b, folded)
    assert not rep.ok
    assert any("rigidity" in p for p in rep.problems)
    assert check_cover({0: 0, 1: 1}, a, b)


def test_pairs_are_classified_exactly_once():
    c = small("path2", 3, 3)
    table = classify_pairs(c)
    assert table
    for (s, t), rel in table.items():
        assert {rel, table[(t, s)]} in ({"sib"}, {"pred", "succ"})
    sib_a, sib_b = Func(0, 0, 0, 1, (Const(0, 0, 0),)), Func(0, 0, 1, 1, (Const(0, 0, 0),))
    assert relation_of(c, sib_a, sib_b) == "sib"


def test_conformality_bounds():
    c = small("c3")
    assert check_conformality(c, 2)
    assert check_conformality(c, c.N)
    with pytest.raises(ValueError):
        check_conformality(c, c.N + 1)


def test_covers_satisfy_treeified_queries():
    c = small("c3")
    for name, q in query_corpus().items():
        if q.height <= c.N and evaluate(c.structure, q):
            assert evaluate(c.structure, treeify(q, c.structure.signature))


def test_weak_acyclicity_on_edge_cover():
    inv = invariant(structure_corpus()["path2"])
    big = build_cover(inv, CoverParams(3, 3, J=8, edge_mode="reduced"))
    lower = build_cover(inv, CoverParams(2, 3, J=8, edge_mode="reduced"))
    _, pi = project(big, 2, lower)
    qs = [cycle(2), path(2), parse_structure("E(x,x)")]
    assert check_weak_acyclicity(big, lower, pi, 2, qs)


def test_size_and_budget_guards():
    inv = invariant(cycle(3))
    with pytest.raises(CoverTooLarge):
        build_cover(inv, CoverParams(2, 2, edge_mode="all", max_elements=100))
    with pytest.raises(SuperscriptBudgetExceeded):
        build_cover(inv, CoverParams(2, 2, J=1, edge_mode="reduced"))


def test_minimal_budget_formula():
    assert minimal_j(2, 2) == 4
    assert minimal_j(3, 2) == 15
