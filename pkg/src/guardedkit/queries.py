"""Boolean conjunctive queries, their unions, acyclic rewriting and treeification."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .core import ParseError, Signature, Structure
from .hyperanalysis import atoms_hypergraph, graham_reduce, match_atoms
from .logic import TRUE, Atom, Exists, Formula, conjunction


class TreeifyBudgetExceeded(RuntimeError):
    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class ConjunctiveQuery:
    atoms: tuple  # of (relation, argument tuple)

    @classmethod
    def of(cls, atoms: Iterable[tuple[str, Sequence]]) -> "ConjunctiveQuery":
        return cls(tuple(dict.fromkeys((r, tuple(a)) for r, a in atoms)))

    @property
    def variables(self) -> tuple:
        return tuple(dict.fromkeys(v for _, args in self.atoms for v in args))

    def __len__(self) -> int:
        return len(self.atoms)

    def relations(self) -> dict[str, int]:
        return {r: len(a) for r, a in self.atoms}

    def canonical_structure(self, signature: Signature | None = None) -> Structure:
        sig = signature or Signature(self.relations())
        return Structure.from_facts(self.atoms, sig, self.variables)

    def __str__(self) -> str:
        body = " & ".join(f"{r}({','.join(map(str, a))})" for r, a in self.atoms) or "true"
        vs = self.variables
        return f"exists {','.join(map(str, vs))} . {body}" if vs else body


@dataclass(frozen=True)
class UnionQuery:
    disjuncts: tuple  # of ConjunctiveQuery; empty means false

    @property
    def height(self) -> int:
        return max((len(d) for d in self.disjuncts), default=0)

    @property
    def size(self) -> int:
        return sum(1 + len(a) for d in self.disjuncts for _, a in d.atoms)

    def relations(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for d in self.disjuncts:
            out.update(d.relations())
        return out

    def signature(self) -> Signature:
        return Signature(self.relations())

    def __str__(self) -> str:
        if not self.disjuncts:
            return "FALSE"
        return " || ".join(str(d) for d in self.disjuncts)


def parse_query(text: str) -> UnionQuery:
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    m = re.match(r"^[A-Za-z0-9_]+\s*:=\s*(.*)$", body)
    if m:
        body = m.group(1)
    if not body:
        raise ParseError("empty query")
    disjuncts = []
    arities: dict[str, int] = {}
    for part in body.split("||"):
        part = part.strip()
        declared = None
        qm = re.match(r"^exists\s+([A-Za-z0-9_,\s]*?)\s*\.\s*(.*)$", part)
        if qm:
            declared = [v.strip() for v in qm.group(1).split(",") if v.strip()]
            part = qm.group(2)
        atoms = []
        for piece in [p.strip() for p in part.split("&")]:
            if piece == "true":
                continue
            am = re.match(r"^([A-Za-z0-9_]+)\s*\(([^)]*)\)$", piece)
            if not am:
                raise ParseError(f"cannot parse atom {piece!r}")
            args = tuple(a.strip() for a in am.group(2).split(",") if a.strip())
            if arities.setdefault(am.group(1), len(args)) != len(args):
                raise ParseError(f"relation {am.group(1)} used with two arities")
            atoms.append((am.group(1), args))
        cq = ConjunctiveQuery.of(atoms)
        if declared is not None:
            free = set(cq.variables) - set(declared)
            if free:
                raise ParseError(f"free variables {sorted(free)} in a Boolean query")
        disjuncts.append(cq)
    return UnionQuery(tuple(disjuncts))


def format_query(q: UnionQuery, name: str = "Q") -> str:
    return f"{name} := {q}\n"


def evaluate(a: Structure, q: UnionQuery) -> bool:
    for rel, k in q.relations().items():
        if rel not in a.signature or a.signature.arity(rel) != k:
            raise ValueError(f"relation {rel}/{k} not in the structure's signature")
    for d in q.disjuncts:
        if not d.atoms:
            return True
        for _ in match_atoms(list(d.atoms), a):
            return True
    return False


def cq_entails(t: ConjunctiveQuery, q: ConjunctiveQuery) -> bool:
    """t implies q, i.e. q's canonical structure maps into t's."""
    if not q.atoms:
        return True
    target = t.canonical_structure(Signature({**t.relations(), **q.relations()}))
    renamed = [(r, tuple(("q", v) for v in a)) for r, a in q.atoms]
    for _ in match_atoms(renamed, target):
        return True
    return False


def is_acyclic_query(q: ConjunctiveQuery) -> bool:
    return graham_reduce(atoms_hypergraph(q.atoms, q.variables))[0]


def acq_to_gf(q: ConjunctiveQuery) -> Formula:
    """Guarded existential sentence equivalent to an acyclic query."""
    h = atoms_hypergraph(q.atoms, q.variables)
    ok, td = graham_reduce(h)
    if not ok:
        raise ValueError("query is cyclic")
    bags = td.bags
    adj = {i: set() for i in range(len(bags))}
    for i, p in enumerate(td.parent):
        if p is not None:
            adj[i].add(p)
            adj[p].add(i)
    home: dict[int, list] = {i: [] for i in range(len(bags))}
    nullary = []
    for rel, args in q.atoms:
        if not args:
            nullary.append(Atom(rel, ()))
            continue
        s = frozenset(args)
        exact = [i for i, b in enumerate(bags) if b == s]
        home[exact[0] if exact else next(i for i, b in enumerate(bags) if s <= b)].append(Atom(rel, args))
    first_node = {}
    for i, (rel, args) in enumerate(q.atoms):
        if args:
            s = frozenset(args)
            node = next(j for j, b in enumerate(bags) if b == s)
            first_node.setdefault(node, i)
    seen: set[int] = set()
    parts: list[Formula] = list(nullary)

    def build(node: int, outer: frozenset) -> Formula:
        seen.add(node)
        own = home[node]
        guard = own[0]
        kids = [build(c, bags[node] | outer) for c in sorted(adj[node]) if c not in seen]
        body = conjunction(own[1:] + kids) if (own[1:] or kids) else TRUE
        fresh = tuple(v for v in guard.variables() if v not in outer)
        if not fresh:
            return conjunction(own + kids)
        return Exists(fresh, (guard,), body)

    # rooting each component at its widest bag keeps the nesting shallow
    for node in sorted(first_node, key=lambda j: (-len(bags[j]), first_node[j])):
        if node not in seen:
            parts.append(build(node, frozenset()))
    return conjunction(parts) if parts else TRUE


# canonical forms -------------------------------------------------------------

def canonical_form(atoms: Iterable[tuple[str, tuple]]) -> tuple:
    """Isomorphism-invariant form of an atom set (variables renamed to 0..n-1)."""
    atoms = list(dict.fromkeys((r, tuple(a)) for r, a in atoms))
    vs = list(dict.fromkeys(v for _, a in atoms for v in a))
    if not vs:
        return tuple(sorted(atoms))
    occ: dict = {v: [] for v in vs}
    for rel, args in atoms:
        pattern = tuple(args.index(u) for u in args)
        for i, v in enumerate(args):
            occ[v].append((rel, i, pattern))
    colors = _ranks({v: tuple(sorted(occ[v])) for v in vs})
    colors = _refine(atoms, vs, colors)
    return _search(atoms, vs, colors)


def _ranks(sig: dict) -> dict:
    order = {s: k for k, s in enumerate(sorted(set(sig.values())))}
    return {v: order[s] for v, s in sig.items()}


def _refine(atoms, vs, colors):
    while True:
        sig = {}
        for v in vs:
            sig[v] = [colors[v]]
        for rel, args in atoms:
            neigh = tuple(colors[u] for u in args)
            for i, v in enumerate(args):
                sig[v].append((rel, i, neigh))
        new = _ranks({v: (s[0], tuple(sorted(s[1:]))) for v, s in sig.items()})
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def _search(atoms, vs, colors):
    classes: dict[int, list] = {}
    for v in vs:
        classes.setdefault(colors[v], []).append(v)
    ambiguous = [c for c in sorted(classes) if len(classes[c]) > 1]
    if not ambiguous:
        return tuple(sorted((r, tuple(colors[v] for v in a)) for r, a in atoms))
    target = classes[ambiguous[0]]
    best = None
    for v in target:
        trial = {u: 2 * c + 1 for u, c in colors.items()}
        trial[v] = 2 * colors[v]
        form = _search(atoms, vs, _refine(atoms, vs, _ranks(trial)))
        if best is None or form < best:
            best = form
    return best


def query_from_form(form: tuple) -> ConjunctiveQuery:
    return ConjunctiveQuery.of((r, tuple(f"v{x}" for x in a)) for r, a in form)


# treeification ---------------------------------------------------------------

def set_partitions(items: Sequence) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def _chordal_completions(g: nx.Graph, max_clique: int) -> Iterator[nx.Graph]:
    nodes = list(g.nodes)
    missing = [e for e in itertools.combinations(nodes, 2) if not g.has_edge(*e)]
    for k in range(len(missing) + 1):
        for extra in itertools.combinations(missing, k):
            h = g.copy()
            h.add_edges_from(extra)
            if nx.is_chordal(h) and max((len(c) for c in nx.find_cliques(h)), default=0) <= max_clique:
                yield h


def _placements(clique: Sequence, rel: str, arity: int) -> Iterator[tuple]:
    """Atoms of ``rel`` with the clique's variables at distinct positions, fresh elsewhere."""
    for positions in itertools.permutations(range(arity), len(clique)):
        args = [None] * arity
        for v, p in zip(clique, positions):
            args[p] = v
        fresh = 0
        for i in range(arity):
            if args[i] is None:
                args[i] = ("fresh", fresh)
                fresh += 1
        yield (rel, tuple(args))


def treeify_candidates(q: ConjunctiveQuery, sig: Signature, max_atoms: int | None = None,
                       budget: int = 200_000) -> list[ConjunctiveQuery]:
    """Acyclic queries entailing q: a homomorphic image of q plus guards for a chordal completion."""
    bound = 3 * len(q) if max_atoms is None else max_atoms
    if not q.atoms:
        return [q]
    arities = sig.relations
    big = max(arities.values(), default=1)
    xs = list(q.variables)
    work = 0
    seen: dict[tuple, ConjunctiveQuery] = {}
    for part in set_partitions(xs):
        rep = {}
        for block in part:
            for v in block:
                rep[v] = block[0]
        image = list(dict.fromkeys((r, tuple(rep[v] for v in a)) for r, a in q.atoms))
        if len(image) > bound:
            continue
        ivars = list(dict.fromkeys(v for _, a in image for v in a))
        g = nx.Graph()
        g.add_nodes_from(ivars)
        for _, a in image:
            g.add_edges_from(itertools.combinations(set(a), 2))
        nonedges = len(ivars) * (len(ivars) - 1) // 2 - g.number_of_edges()
        work += 2 ** nonedges
        if work > budget:
            raise TreeifyBudgetExceeded(f"treeification budget exceeded: more than {budget} completions to examine",
                                        estimate=_size_estimate(q, sig))
        covered = [frozenset(a) for _, a in image]
        for h in _chordal_completions(g, big):
            open_cliques = [sorted(c, key=ivars.index) for c in nx.find_cliques(h)
                            if len(c) > 1 and not any(frozenset(c) <= s for s in covered)]
            if len(image) + len(open_cliques) > bound:
                continue
            options = []
            for c in sorted(open_cliques):
                opts = [pl for rel, k in sorted(arities.items()) if k >= len(c) for pl in _placements(c, rel, k)]
                options.append(opts)
            for choice in itertools.product(*options):
                atoms = list(image)
                for n, (rel, args) in enumerate(choice):
                    atoms.append((rel, tuple(("g", n, a[1]) if isinstance(a, tuple) else a for a in args)))
                form = canonical_form(atoms)
                if form not in seen:
                    seen[form] = query_from_form(form)
                    work += 1
                    if work > budget:
                        raise TreeifyBudgetExceeded("treeification budget exceeded while collecting disjuncts",
                                                    estimate=_size_estimate(q, sig))
    return [seen[k] for k in sorted(seen, key=lambda f: (len(f), f))]


def _size_estimate(q: ConjunctiveQuery, sig: Signature) -> float:
    r = max(len(sig.names), 1)
    w = sig.width
    n = 3 * len(q)
    return float(r * (n * w) ** w) ** n


def exhaustive_treeify(q: ConjunctiveQuery, sig: Signature, max_atoms: int | None = None,
                       budget: int = 2_000_000) -> list[ConjunctiveQuery]:
    """All acyclic queries over sig with at most 3|q| atoms entailing q (up to isomorphism)."""
    bound = 3 * len(q) if max_atoms is None else max_atoms
    w = sig.width
    nvars = bound * w
    candidates = [(rel, args) for rel, k in sorted(sig.relations.items())
                  for args in itertools.product(range(nvars), repeat=k)]
    total = sum(comb(len(candidates), k) for k in range(1, bound + 1))
    if total > budget:
        raise TreeifyBudgetExceeded(f"exhaustive treeification needs {total} atom sets (budget {budget})",
                                    estimate=float(total))
    seen: dict[tuple, ConjunctiveQuery] = {}
    for k in range(1, bound + 1):
        for atoms in itertools.combinations(candidates, k):
            used = sorted({v for _, a in atoms for v in a})
            if used != list(range(len(used))):
                continue
            if not graham_reduce(atoms_hypergraph(atoms))[0]:
                continue
            form = canonical_form(atoms)
            if form in seen:
                continue
            cq = query_from_form(form)
            if cq_entails(cq, q):
                seen[form] = cq
    return [seen[k] for k in sorted(seen, key=lambda f: (len(f), f))]


def minimize_union(disjuncts: list[ConjunctiveQuery]) -> list[ConjunctiveQuery]:
    """Drop disjuncts that entail another disjunct (keeping the first of equivalent ones)."""
    keep: list[ConjunctiveQuery] = []
    for i, d in enumerate(disjuncts):
        rels = set(d.relations())
        redundant = False
        for j, other in enumerate(disjuncts):
            if i == j or not set(other.relations()) <= rels:
                continue
            if cq_entails(d, other) and (not cq_entails(other, d) or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(d)
    return keep


def treeify(q: UnionQuery, sig: Signature | None = None, minimize: bool = False, max_atoms: int | None = None,
            budget: int = 200_000, exhaustive: bool = False) -> UnionQuery:
    sig = q.signature() if sig is None else sig.union(q.signature())
    out: list[ConjunctiveQuery] = []
    forms = set()
    for d in q.disjuncts:
        found = exhaustive_treeify(d, sig, max_atoms, budget) if exhaustive else \
            treeify_candidates(d, sig, max_atoms, budget)
        for t in found:
            if not cq_entails(t, d) or not is_acyclic_query(t):
                raise AssertionError(f"treeification produced a bad disjunct {t}")
            key = canonical_form(t.atoms)
            if key not in forms:
                forms.add(key)
                out.append(t)
    if minimize:
        out = minimize_union(out)
    return UnionQuery(tuple(out))
