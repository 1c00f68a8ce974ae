"""Named example structures, queries and seeded random generators."""

from __future__ import annotations

import itertools
import random

from .core import Hypergraph, Signature, Structure
from .logic import (
    And, Atom, Exists, Forall, Formula, Implies, Not, Or, Truth, conjunction,
)
from .queries import ConjunctiveQuery, UnionQuery

EDGE = Signature({"E": 2})


def cycle(n: int, rel: str = "E") -> Structure:
    return Structure.from_facts([(rel, (i, (i + 1) % n)) for i in range(n)], Signature({rel: 2}))


def path(n: int, rel: str = "E") -> Structure:
    """Directed path with n edges."""
    return Structure.from_facts([(rel, (i, i + 1)) for i in range(n)], Signature({rel: 2}))


def structure_corpus() -> dict[str, Structure]:
    """Small width-2 structures (at most 4 elements) used across tests and scripts."""
    pe = Signature({"P": 1, "E": 2})
    out = {
        "edge": path(1),
        "path2": path(2),
        "path3": path(3),
        "c2": cycle(2),
        "c3": cycle(3),
        "c4": cycle(4),
        "loop": Structure.from_facts([("E", (0, 0))], EDGE),
        "sym-edge": Structure.from_facts([("E", (0, 1)), ("E", (1, 0))], EDGE),
        "marked-c3": Structure.from_facts([("E", (0, 1)), ("E", (1, 2)), ("E", (2, 0)), ("P", (0,))], pe),
        "star": Structure.from_facts([("E", (0, 1)), ("E", (0, 2)), ("E", (0, 3))], EDGE),
        "tail-loop": Structure.from_facts([("E", (0, 1)), ("E", (1, 1))], EDGE),
    }
    return out


def query_corpus() -> dict[str, UnionQuery]:
    def cq(*atoms):
        return UnionQuery((ConjunctiveQuery.of(atoms),))

    return {
        "edge": cq(("E", ("x", "y"))),
        "loop": cq(("E", ("x", "x"))),
        "2-path": cq(("E", ("x", "y")), ("E", ("y", "z"))),
        "back-edge": cq(("E", ("x", "y")), ("E", ("y", "x"))),
        "3-path": cq(("E", ("x", "y")), ("E", ("y", "z")), ("E", ("z", "u"))),
        "triangle": cq(("E", ("x", "y")), ("E", ("y", "z")), ("E", ("z", "x"))),
        "fork": cq(("E", ("x", "y")), ("E", ("x", "z"))),
    }


def random_structure(rng: random.Random, signature: Signature, size: int, density: float = 0.3) -> Structure:
    facts = []
    for rel in signature.names:
        k = signature.arity(rel)
        for args in itertools.product(range(size), repeat=k):
            if rng.random() < density:
                facts.append((rel, args))
    return Structure(signature, [f"e{i}" for i in range(size)], facts)


def random_hypergraph(rng: random.Random, max_vertices: int = 6, max_edges: int = 8, max_width: int = 4) -> Hypergraph:
    n = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for _ in range(rng.randint(1, max_edges)):
        k = rng.randint(1, min(max_width, n))
        edges.append(rng.sample(verts, k))
    return Hypergraph.of(edges, verts)


def random_gf_sentence(rng: random.Random, signature: Signature, depth: int = 2, parts: int = 2) -> Formula:
    """A guarded sentence of width at most 2 over unary and binary relations."""
    unary = [r for r in signature.names if signature.arity(r) == 1]
    binary = [r for r in signature.names if signature.arity(r) == 2]

    def literal(vs):
        options = [Atom(r, (v,)) for r in unary for v in vs]
        options += [Atom(r, (a, b)) for r in binary for a in vs for b in vs]
        a = rng.choice(options)
        return Not(a) if rng.random() < 0.4 else a

    def guard_for(bound, outer):
        if len(bound) == 1 and not outer and unary and (not binary or rng.random() < 0.5):
            return Atom(rng.choice(unary), bound)
        vs = list(outer) + list(bound)
        if len(vs) == 1:
            return Atom(rng.choice(binary), (vs[0], vs[0])) if binary else Atom(rng.choice(unary), tuple(vs))
        a, b = vs
        return Atom(rng.choice(binary), (a, b) if rng.random() < 0.5 else (b, a))

    def formula(free: tuple, d: int) -> Formula:
        if d == 0 or (free and rng.random() < 0.3):
            if not free:
                return Truth(rng.random() < 0.8)
            return literal(free)
        kind = rng.random()
        if kind < 0.25 and free:
            op = And if rng.random() < 0.5 else Or
            return op(formula(free, d - 1), formula(free, d - 1))
        return quantified(free, d)

    def quantified(free: tuple, d: int) -> Formula:
        names = ("x", "y")
        if not free:
            bound = ("x",) if rng.random() < 0.5 or not binary else ("x", "y")
            outer: tuple = ()
        else:
            keep = free[:1] if len(free) == 2 and rng.random() < 0.7 else free
            keep = keep if len(keep) == 1 else keep[:1]
            other = next(v for v in names if v not in keep)
            bound, outer = (other,), keep
        if not binary and outer:
            return literal(free)
        g = guard_for(bound, outer)
        body = formula(tuple(dict.fromkeys(outer + bound)), d - 1)
        if rng.random() < 0.5:
            return Exists(bound, (g,), body)
        return Forall(bound, (g,), body)

    return conjunction(quantified((), depth) for _ in range(parts))


def random_cgf_sentence(rng: random.Random, depth: int = 2) -> Formula:
    """A clique-guarded sentence over E/2 with a three-variable clique guard."""
    e = lambda a, b: Atom("E", (a, b))
    lits = [e("x", "y"), e("y", "z"), e("z", "x"), e("x", "x"), Atom("P", ("x",)), Atom("P", ("z",))]
    body = lits[rng.randrange(len(lits))]
    if rng.random() < 0.5:
        body = Not(body)
    if depth > 1 and rng.random() < 0.5:
        body = Or(body, lits[rng.randrange(len(lits))])
    clique = (e("x", "y"), e("y", "z"), e("z", "x"))
    inner = Forall(("x", "y", "z"), clique, body) if rng.random() < 0.6 else Exists(("x", "y", "z"), clique, body)
    extra = rng.choice([
        Exists(("x", "y"), (e("x", "y"),), Truth(True)),
        Forall(("x", "y"), (e("x", "y"),), Exists(("z",), (e("y", "z"),), Truth(True))),
        Forall(("x", "y"), (e("x", "y"),), Implies(Atom("P", ("x",)), Atom("P", ("y",)))),
        Exists(("x",), (Atom("P", ("x",)),), Truth(True)),
    ])
    return And(inner, extra)
