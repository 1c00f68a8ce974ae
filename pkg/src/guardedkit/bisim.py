"""Guarded bisimulation: game graphs, partition refinement and (ordered) invariants."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .core import AtomicType, ParseError, Signature, Structure, maximal_guarded_sets, pad

Rho = tuple  # sorted tuple of (i, j) position pairs, 0-based


class SignatureMismatch(ValueError):
    pass


@lru_cache(maxsize=None)
def injections_within(pairs: frozenset) -> tuple:
    """All nonempty partial injections contained in a set of position pairs, sorted."""
    pairs = sorted(pairs)
    out = []
    for k in range(1, len(pairs) + 1):
        for sub in itertools.combinations(pairs, k):
            if len({i for i, _ in sub}) == k and len({j for _, j in sub}) == k:
                out.append(sub)
    return tuple(sorted(out))


def structure_width(a: Structure) -> int:
    return max((len(s) for s in maximal_guarded_sets(a)), default=1)


class _TypeIndex:
    """Atomic types of tuples, using a per-element fact index."""

    def __init__(self, a: Structure):
        self.a = a
        self.nullary = [(r, ()) for r, args in a.facts if not args]
        self.by_elem: dict[int, list] = {}
        for rel, args in a.facts:
            for x in set(args):
                self.by_elem.setdefault(x, []).append((rel, args))
        self.const_of = {v: c for c, v in sorted(a.constants.items())}
        self.ground = [(rel, args) for rel, args in a.facts if args and all(y in self.const_of for y in args)]
        self.by_scope: dict[frozenset, list] = {}
        for rel, args in a.facts:
            scope = frozenset(y for y in args if y not in self.const_of)
            if scope:
                self.by_scope.setdefault(scope, []).append((rel, args))

    def facts_within(self, elements) -> list:
        """Facts whose arguments lie in ``elements`` or are constants."""
        elements = sorted(set(elements))
        found = list(self.nullary)
        for k in range(1, len(elements) + 1):
            for sub in itertools.combinations(elements, k):
                found.extend(self.by_scope.get(frozenset(sub), ()))
        return found + self.ground

    def type_of(self, tup: Sequence[int], facts: list | None = None) -> AtomicType:
        if facts is None:
            facts = self.facts_within(tup)
        partition = [tup.index(x) for x in tup]
        pos: dict[int, int] = {}
        for i, x in enumerate(tup):
            pos.setdefault(x, i)
        atoms = [(rel, tuple(pos[y] if y in pos else ("c", self.const_of[y]) for y in args)) for rel, args in facts]
        return AtomicType.make(partition, atoms)


@dataclass
class GameGraph:
    """Maximal guarded tuples padded to ``width``; edges are kept implicit.

    Vertices u and v are joined by every nonempty partial injection rho with
    u[i] == v[j] for all (i, j) in rho. Single-pair edges are aggregated per
    element; larger rho only arise between vertices sharing two distinct
    elements or a repeated one, and those partners are listed explicitly.
    """

    signature: Signature
    width: int
    vertices: list[tuple]
    labels: list[AtomicType]
    partners: list[list[int]] = field(default_factory=list)
    _wide: list | None = field(default=None, repr=False)

    def wide_edges(self) -> list[list[tuple[Rho, int]]]:
        """Edges whose rho has at least two pairs."""
        if self._wide is None:
            self._wide = [[(rho, v) for v in self.partners[u]
                           for rho in injections_within(_matches(tup, self.vertices[v])) if len(rho) > 1]
                          for u, tup in enumerate(self.vertices)]
        return self._wide

    @property
    def edges(self) -> list[list[tuple[Rho, int]]]:
        """Explicit out-edges per vertex (quadratic; meant for small structures)."""
        containing: dict[int, list[int]] = {}
        for k, v in enumerate(self.vertices):
            for x in set(v):
                containing.setdefault(x, []).append(k)
        out = []
        for u in self.vertices:
            row = []
            for m in sorted({m for x in set(u) for m in containing[x]}):
                row.extend((rho, m) for rho in injections_within(_matches(u, self.vertices[m])))
            out.append(row)
        return out

    def edge_count(self) -> int:
        return sum(len(e) for e in self.edges)

    def successors(self, colors: Sequence[int]) -> list[set]:
        """Per vertex, the set of (rho, class of target) over all its edges."""
        at: dict[int, set] = {}
        for v, tup in enumerate(self.vertices):
            for j, x in enumerate(tup):
                at.setdefault(x, set()).add((j, colors[v]))
        single: dict = {}
        out = []
        wide = self.wide_edges()
        for u, tup in enumerate(self.vertices):
            s = set()
            for i, x in enumerate(tup):
                part = single.get((i, x))
                if part is None:
                    part = single[(i, x)] = frozenset((((i, j),), c) for j, c in at[x])
                s |= part
            s.update((rho, colors[v]) for rho, v in wide[u])
            out.append(s)
        return out


def _matches(u: tuple, v: tuple) -> frozenset:
    return frozenset((i, j) for i in range(len(u)) for j in range(len(v)) if u[i] == v[j])


def game_graph(a: Structure, width: int | None = None) -> GameGraph:
    w = structure_width(a) if width is None else width
    types = _TypeIndex(a)
    vertices: list[tuple] = []
    labels: list[AtomicType] = []
    for s in maximal_guarded_sets(a):
        if len(s) > w:
            raise ValueError(f"guarded set of size {len(s)} exceeds width {w}")
        inner = types.facts_within(s)
        for perm in itertools.permutations(sorted(s)):
            vertices.append(pad(perm, w))
            labels.append(types.type_of(vertices[-1], inner))
    by_pair: dict = {}
    repeated: dict = {}
    for k, v in enumerate(vertices):
        distinct = sorted(set(v))
        for pair in itertools.combinations(distinct, 2):
            by_pair.setdefault(pair, []).append(k)
        for x in distinct:
            if v.count(x) > 1:
                repeated.setdefault(x, []).append(k)
    partners = []
    for v in vertices:
        distinct = sorted(set(v))
        near = set()
        for pair in itertools.combinations(distinct, 2):
            near.update(by_pair[pair])
        for x in distinct:
            if v.count(x) > 1:
                near.update(repeated[x])
        partners.append(sorted(near))
    return GameGraph(a.signature, w, vertices, labels, partners)


def type_order_key(t: AtomicType, signature: Signature) -> tuple:
    return tuple(t.literals(signature))


def refine(initial: Sequence[int], successors) -> tuple[list[int], list[set], int]:
    """Naive partition refinement with canonically ranked classes.

    ``initial`` holds canonical ranks and ``successors(colors)`` returns, per
    vertex, its set of (rho, class) incidences. Each round ranks vertices by
    old rank, then by the incidence bit vector over the grid ordered by rho
    and then by class, with 1 above 0. The bit vector is compared through its
    sorted list of set positions, negated, which induces the same order.
    Returns the final ranks, the final incidence sets and the round count.
    """
    colors = list(initial)
    rounds = 0
    while True:
        succ = successors(colors)
        k = len(set(colors))
        sigma = {rho: n for n, rho in enumerate(sorted({rho for s in succ for rho, _ in s}))}
        keys = [(colors[v], tuple(sorted(-(sigma[rho] * k + c) for rho, c in s))[::-1])
                for v, s in enumerate(succ)]
        ranking = {key: n for n, key in enumerate(sorted(set(keys)))}
        new = [ranking[key] for key in keys]
        rounds += 1
        if len(ranking) == k:
            return new, successors(new), rounds
        colors = new


def _initial_ranks(labels: Sequence[AtomicType], signature: Signature) -> list[int]:
    memo: dict = {}
    keys = [memo[t] if t in memo else memo.setdefault(t, type_order_key(t, signature)) for t in labels]
    ranking = {key: n for n, key in enumerate(sorted(set(keys)))}
    return [ranking[k] for k in keys]


def _explicit(edges: Sequence[Sequence[tuple[Rho, int]]]):
    def successors(colors):
        return [{(rho, colors[t]) for rho, t in out} for out in edges]
    return successors


@dataclass(frozen=True)
class Invariant:
    signature: Signature
    width: int
    labels: tuple  # class id -> AtomicType
    edges: frozenset  # of (class, rho, class)
    ordered: bool = False
    stages: int = field(default=0, compare=False)

    @property
    def classes(self) -> range:
        return range(len(self.labels))

    def out_edges(self) -> list[list[tuple[Rho, int]]]:
        out: list[list] = [[] for _ in self.labels]
        for c, rho, d in sorted(self.edges):
            out[c].append((rho, d))
        return out

    def core_positions(self, c: int) -> list[int]:
        return self.labels[c].distinct_positions()


def _quotient(g: GameGraph, colors: list[int], succ: list[set], ordered: bool, stages: int) -> Invariant:
    k = len(set(colors))
    labels: list = [None] * k
    edges = set()
    for v, c in enumerate(colors):
        if labels[c] is None:
            labels[c] = g.labels[v]
            edges.update((c, rho, d) for rho, d in succ[v])
    return Invariant(g.signature, g.width, tuple(labels), frozenset(edges), ordered, stages)


def invariant(a: Structure, width: int | None = None) -> Invariant:
    g = game_graph(a, width)
    colors, succ, stages = refine(_initial_ranks(g.labels, g.signature), g.successors)
    return _quotient(g, colors, succ, False, stages)


def ordered_invariant(a: Structure, width: int | None = None) -> Invariant:
    """The invariant with classes numbered by the refinement ordering (class 0 is least)."""
    g = game_graph(a, width)
    colors, succ, stages = refine(_initial_ranks(g.labels, g.signature), g.successors)
    return _quotient(g, colors, succ, True, stages)


def _check_signatures(a: Structure, b: Structure) -> None:
    if a.signature.relations != b.signature.relations:
        raise SignatureMismatch(f"signatures differ: {a.signature} vs {b.signature}")


def are_guarded_bisimilar(a: Structure, b: Structure) -> bool:
    _check_signatures(a, b)
    w = max(structure_width(a), structure_width(b))
    ga, gb = game_graph(a, w), game_graph(b, w)
    shift = len(ga.vertices)
    union = GameGraph(a.signature, w, ga.vertices + [tuple(("b", x) for x in v) for v in gb.vertices],
                      ga.labels + gb.labels, ga.partners + [[t + shift for t in p] for p in gb.partners])
    colors, _, _ = refine(_initial_ranks(union.labels, a.signature), union.successors)
    return set(colors[:shift]) == set(colors[shift:])


def invariants_isomorphic(i1: Invariant, i2: Invariant) -> bool:
    """Isomorphism of two bisimulation quotients (labels and rho-edges)."""
    if i1.width != i2.width or i1.signature.relations != i2.signature.relations:
        return False
    if len(i1.labels) != len(i2.labels):
        return False
    shift = len(i1.labels)
    labels = list(i1.labels) + list(i2.labels)
    edges = i1.out_edges() + [[(rho, t + shift) for rho, t in out] for out in i2.out_edges()]
    colors, _, _ = refine(_initial_ranks(labels, i1.signature), _explicit(edges))
    left, right = colors[:shift], colors[shift:]
    return len(set(left)) == shift and sorted(left) == sorted(right)


# text format -----------------------------------------------------------------

def format_rho(rho: Rho) -> str:
    return "[" + ",".join(f"({i + 1},{j + 1})" for i, j in rho) + "]"


def format_invariant(inv: Invariant) -> str:
    lines = [f"rel {r}/{k}" for r, k in inv.signature.relations.items()]
    lines.append(f"width {inv.width}")
    if inv.ordered:
        lines.append("ordered")
    for c, t in enumerate(inv.labels):
        lines.append(f"class {c}: type={t.digest()} {' & '.join(t.literals(inv.signature))}".rstrip())
    for c, rho, d in sorted(inv.edges):
        lines.append(f"edge {c} -{format_rho(rho)}-> {d}")
    return "\n".join(lines) + "\n"


_LIT = re.compile(r"^(!?)([A-Za-z0-9_]+)\(([^)]*)\)$")
_EQ = re.compile(r"^x(\d+)(=|!=)x(\d+)$")


def _parse_type(literals: list[str], width: int) -> AtomicType:
    parent = list(range(width))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    atoms = []
    for lit in literals:
        m = _EQ.match(lit)
        if m:
            if m.group(2) == "=":
                i, j = sorted((find(int(m.group(1)) - 1), find(int(m.group(3)) - 1)))
                parent[j] = i
            continue
        m = _LIT.match(lit)
        if not m:
            raise ParseError(f"bad literal {lit!r}")
        if not m.group(1):
            args = tuple(int(x.strip()[1:]) - 1 for x in m.group(3).split(",") if x.strip())
            atoms.append((m.group(2), args))
    partition = [min(j for j in range(width) if find(j) == find(i)) for i in range(width)]
    return AtomicType.make(partition, atoms)


def parse_invariant(text: str) -> Invariant:
    rels: dict[str, int] = {}
    width = None
    ordered = False
    labels: dict[int, AtomicType] = {}
    edges = set()
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := re.match(r"^rel\s+([A-Za-z0-9_]+)\s*/\s*(\d+)$", line):
            rels[m.group(1)] = int(m.group(2))
        elif m := re.match(r"^width\s+(\d+)$", line):
            width = int(m.group(1))
        elif line == "ordered":
            ordered = True
        elif m := re.match(r"^class\s+(\d+)\s*:\s*type=\w+\s*(.*)$", line):
            if width is None:
                raise ParseError("class line before width line", n)
            lits = [x.strip() for x in m.group(2).split("&") if x.strip()]
            labels[int(m.group(1))] = _parse_type(lits, width)
        elif m := re.match(r"^edge\s+(\d+)\s*-\[(.*)\]->\s*(\d+)$", line):
            pairs = re.findall(r"\((\d+),(\d+)\)", m.group(2))
            rho = tuple(sorted((int(i) - 1, int(j) - 1) for i, j in pairs))
            edges.add((int(m.group(1)), rho, int(m.group(3))))
        else:
            raise ParseError(f"cannot parse {line!r}", n)
    if width is None:
        raise ParseError("missing width line")
    if sorted(labels) != list(range(len(labels))):
        raise ParseError("class ids must be 0..k-1")
    return Invariant(Signature(rels), width, tuple(labels[c] for c in range(len(labels))), frozenset(edges), ordered)
