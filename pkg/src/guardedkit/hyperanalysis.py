"""Acyclicity of hypergraphs, join trees and homomorphism search."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .core import Hypergraph, ParseError, Structure, gaifman_graph, structure_hypergraph

_VERTEX_RE = re.compile(r"^[A-Za-z0-9_]+$")


class OracleBudgetExceeded(RuntimeError):
    pass


@dataclass
class TreeDecomposition:
    bags: list[frozenset]
    parent: list[int | None]

    def children(self, node: int) -> list[int]:
        return [i for i, p in enumerate(self.parent) if p == node]

    def roots(self) -> list[int]:
        return [i for i, p in enumerate(self.parent) if p is None]

    def violations(self, h: Hypergraph) -> list[str]:
        problems = []
        seen = set()
        for r in self.roots():
            stack = [r]
            while stack:
                n = stack.pop()
                if n in seen:
                    problems.append(f"node {n} reached twice")
                    continue
                seen.add(n)
                stack.extend(self.children(n))
        if len(seen) != len(self.bags):
            problems.append("parent relation is not a forest")
        for v in h.vertices:
            nodes = {i for i, b in enumerate(self.bags) if v in b}
            if not nodes:
                continue
            tops = [i for i in nodes if self.parent[i] not in nodes]
            if len(tops) != 1:
                problems.append(f"bags containing {v!r} are not connected")
        for e in h.edges:
            if not any(e <= b for b in self.bags):
                problems.append(f"hyperedge {sorted(e, key=repr)} not inside a bag")
        for i, b in enumerate(self.bags):
            if b and not any(b <= e for e in h.edges):
                problems.append(f"bag {i} is not guarded")
        return problems

    def to_text(self, label=str) -> str:
        lines = []

        def walk(n, depth):
            members = ",".join(label(v) for v in sorted(self.bags[n], key=repr))
            lines.append("  " * depth + "{" + members + "}")
            for c in self.children(n):
                walk(c, depth + 1)

        for r in self.roots():
            walk(r, 0)
        return "\n".join(lines) + "\n"


def graham_reduce(h: Hypergraph, rng: random.Random | None = None) -> tuple[bool, TreeDecomposition | None]:
    """GYO reduction. With ``rng`` the applicable deletions are picked at random."""
    order = h.vertex_order()
    edges = list(h.edges)
    alive = [set(e) for e in edges]
    active = list(range(len(edges)))
    parent: list[int | None] = [None] * len(edges)

    while True:
        steps = []
        counts: dict = {}
        for i in active:
            for v in alive[i]:
                counts.setdefault(v, []).append(i)
        for v in sorted(counts, key=order.get):
            if len(counts[v]) == 1:
                steps.append(("vertex", v, counts[v][0]))
        for i in active:
            if not alive[i]:
                steps.append(("empty", i, None))
                continue
            for j in active:
                if i != j and alive[i] <= alive[j] and (alive[i] != alive[j] or i > j):
                    steps.append(("edge", i, j))
                    break
        if not steps:
            break
        kind, a, b = rng.choice(steps) if rng else steps[0]
        if kind == "vertex":
            alive[b].discard(a)
        elif kind == "empty":
            active.remove(a)
        else:
            parent[a] = b
            active.remove(a)

    if active:
        return False, None
    return True, TreeDecomposition([frozenset(e) for e in edges], parent)


def uncovered_clique(h: Hypergraph, n: int | None = None) -> frozenset | None:
    """A clique of the Gaifman graph (size 2..n) not inside any hyperedge, if one exists."""
    g = gaifman_graph(h)
    limit = n if n is not None else h.width + 1
    order = h.vertex_order()
    by_vertex: dict = {}
    for e in h.edges:
        for v in e:
            by_vertex.setdefault(v, []).append(e)

    def covered(s):
        pivot = min(s, key=order.get)
        return any(s <= e for e in by_vertex.get(pivot, ()))

    for clique in sorted(nx.find_cliques(g), key=lambda c: sorted(order[v] for v in c)):
        c = frozenset(clique)
        if len(c) < 2 or covered(c):
            continue
        if len(c) <= limit:
            return c
        for sub in itertools.combinations(sorted(c, key=order.get), limit):
            s = frozenset(sub)
            if not covered(s):
                return s
    return None


def is_conformal(h: Hypergraph, n: int | None = None) -> bool:
    if n is not None and n < 2:
        raise ValueError("bound must be at least 2")
    return uncovered_clique(h, n) is None


def chordless_cycle(h: Hypergraph, n: int | None = None) -> list | None:
    """A chordless cycle of length 4..n in the Gaifman graph, if one exists."""
    g = gaifman_graph(h)
    if n is None:
        if nx.is_chordal(g):
            return None
        bound = None
    else:
        if n < 4:
            return None
        bound = n
    for cyc in nx.chordless_cycles(g, length_bound=bound):
        if len(cyc) >= 4:
            return list(cyc)
    return None


def is_chordal(h: Hypergraph, n: int | None = None) -> bool:
    if n is not None and n < 2:
        raise ValueError("bound must be at least 2")
    return chordless_cycle(h, n) is None


def is_acyclic(h: Hypergraph) -> bool:
    verdict = is_conformal(h) and is_chordal(h)
    graham, _ = graham_reduce(h)
    if verdict != graham:
        raise AssertionError(f"acyclicity tests disagree on {h}")
    return verdict


def parse_hypergraph(text: str) -> Hypergraph:
    """One hyperedge per line, vertices separated by commas or spaces; braces optional.

    A line ``vertex a b`` declares isolated vertices.
    """
    edges = []
    vertices: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        isolated = line.startswith("vertex ")
        if isolated:
            line = line[len("vertex "):]
        items = [v for v in re.split(r"[\s,]+", line.strip().strip("{}").strip()) if v]
        for v in items:
            if not _VERTEX_RE.match(v):
                raise ParseError(f"bad vertex name {v!r}", lineno)
        if isolated:
            vertices.extend(items)
        elif items:
            edges.append(items)
            vertices.extend(items)
    return Hypergraph.of(edges, vertices)


def format_hypergraph(h: Hypergraph) -> str:
    order = h.vertex_order()
    lines = ["{" + ",".join(str(v) for v in sorted(e, key=order.get)) + "}" for e in h.edges]
    covered = set().union(*h.edges) if h.edges else set()
    lonely = [str(v) for v in h.vertices if v not in covered]
    if lonely:
        lines.append("vertex " + " ".join(lonely))
    return "\n".join(lines) + "\n"


def atoms_hypergraph(atoms: Iterable[tuple[str, tuple]], vertices: Iterable = ()) -> Hypergraph:
    return Hypergraph.of([set(args) for _, args in atoms if args], vertices)


def structure_is_acyclic(a: Structure) -> bool:
    return graham_reduce(structure_hypergraph(a))[0]


# homomorphisms ---------------------------------------------------------------

def _plan(atoms: Sequence[tuple[str, tuple]]) -> list[tuple[str, tuple]]:
    """Order atoms so that each one shares variables with earlier ones when possible."""
    rest = list(atoms)
    plan = []
    bound: set = set()
    while rest:
        best = max(range(len(rest)), key=lambda i: (len(set(rest[i][1]) & bound), -i))
        atom = rest.pop(best)
        plan.append(atom)
        bound.update(atom[1])
    return plan


def match_atoms(atoms: Sequence[tuple[str, tuple]], dst: Structure, partial: dict | None = None) -> Iterator[dict]:
    """Assignments of the variables in ``atoms`` making every atom a fact of ``dst``."""
    plan = _plan(list(dict.fromkeys(atoms)))
    assignment = dict(partial or {})

    def extend(k):
        if k == len(plan):
            yield dict(assignment)
            return
        rel, args = plan[k]
        for cand in dst.tuples(rel):
            newly = []
            ok = True
            for var, val in zip(args, cand):
                cur = assignment.get(var)
                if cur is None:
                    assignment[var] = val
                    newly.append(var)
                elif cur != val:
                    ok = False
                    break
            if ok:
                yield from extend(k + 1)
            for var in newly:
                del assignment[var]

    yield from extend(0)


def find_homomorphisms(src: Structure, dst: Structure, limit: int | None = None) -> list[dict[int, int]]:
    fixed = {src.constants[c]: dst.constants[c] for c in src.constants if c in dst.constants}
    atoms = src.fact_list()
    covered = {x for _, args in atoms for x in args} | set(fixed)
    free = [x for x in src.universe if x not in covered]
    out: list[dict[int, int]] = []
    for base in match_atoms(atoms, dst, fixed):
        for rest in itertools.product(dst.universe, repeat=len(free)):
            hom = dict(base)
            hom.update(zip(free, rest))
            out.append({k: hom[k] for k in sorted(hom)})
            if limit is not None and len(out) >= limit:
                return out
    return out


def is_homomorphism(mapping: dict, src: Structure, dst: Structure) -> bool:
    if set(mapping) != set(src.universe):
        return False
    return all(dst.holds(rel, tuple(mapping[x] for x in args)) for rel, args in src.facts)


def tree_decomposable_hom_exists(q: Structure, a: Structure, size_bound: int | None = None,
                                 budget: int = 200_000) -> bool:
    """Brute force: is there an acyclic set of at most ``size_bound`` facts of ``a`` receiving ``q``?

    Every candidate set must contain the image of some homomorphism, so the
    search enumerates, per image, all supersets within the size bound.
    """
    bound = 3 * len(q.facts) if size_bound is None else size_bound
    facts = a.fact_list()
    images = []
    for hom in find_homomorphisms(q, a):
        img = frozenset((rel, tuple(hom[x] for x in args)) for rel, args in q.facts)
        if img not in images:
            images.append(img)
    work = 0
    for img in images:
        if len(img) > bound:
            continue
        others = [f for f in facts if f not in img]
        room = bound - len(img)
        work += sum(comb(len(others), k) for k in range(room + 1))
        if work > budget:
            raise OracleBudgetExceeded(f"oracle budget exceeded: {work} candidate fact sets > {budget}")
    for img in images:
        if len(img) > bound:
            continue
        others = [f for f in facts if f not in img]
        for k in range(bound - len(img) + 1):
            for extra in itertools.combinations(others, k):
                chosen = list(img) + list(extra)
                if graham_reduce(atoms_hypergraph(chosen))[0]:
                    return True
    return False


def acyclic_extension_exists(base: Iterable[tuple[str, tuple]], pool: Sequence[tuple[str, tuple]],
                             max_extra: int, budget: int = 200_000) -> bool:
    """Is ``base`` plus at most ``max_extra`` facts from ``pool`` an acyclic fact set?"""
    base = list(base)
    pool = [f for f in pool if f not in set(base)]
    work = sum(comb(len(pool), k) for k in range(max_extra + 1))
    if work > budget:
        raise OracleBudgetExceeded(f"oracle budget exceeded: {work} candidate fact sets > {budget}")
    for k in range(max_extra + 1):
        for extra in itertools.combinations(pool, k):
            if graham_reduce(atoms_hypergraph(base + list(extra)))[0]:
                return True
    return False
