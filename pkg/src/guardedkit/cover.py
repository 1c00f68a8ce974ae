"""Finite covers built from terms over a bisimulation invariant, plus structural checkers."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import networkx as nx

from .bisim import Invariant, _TypeIndex, invariant, invariants_isomorphic
from .core import Hypergraph, Structure, maximal_guarded_sets
from .hyperanalysis import acyclic_extension_exists, is_conformal


class CoverError(RuntimeError):
    pass


class CoverTooLarge(CoverError):
    pass


class SuperscriptBudgetExceeded(CoverError):
    pass


class Const(NamedTuple):
    cls: int
    pos: int
    j: int


class Func(NamedTuple):
    edge: int
    target: int
    pos: int
    j: int
    args: tuple


@lru_cache(maxsize=None)
def height(t) -> int:
    if isinstance(t, Const):
        return 0
    return 1 + max(height(a) for a in t.args)


@lru_cache(maxsize=None)
def j_values(t) -> frozenset:
    if isinstance(t, Const):
        return frozenset([t.j])
    out = {t.j}
    for a in t.args:
        out |= j_values(a)
    return frozenset(out)


@lru_cache(maxsize=None)
def truncate(t, depth: int):
    if depth < 0:
        raise ValueError("truncation depth must be nonnegative")
    if isinstance(t, Const):
        return t
    if depth == 0:
        return Const(t.target, t.pos, t.j)
    return Func(t.edge, t.target, t.pos, t.j, tuple(truncate(a, depth - 1) for a in t.args))


def j_unique(t) -> bool:
    """No superscript occurs twice along any root-to-leaf path of the term."""
    def walk(u, seen):
        if u.j in seen:
            return False
        if isinstance(u, Const):
            return True
        return all(walk(a, seen | {u.j}) for a in u.args)
    return walk(t, frozenset())


def format_term(t) -> str:
    if isinstance(t, Const):
        return f"c[e={t.cls},i={t.pos + 1},j={t.j}]"
    return f"f[rho={t.edge},i={t.pos + 1},j={t.j}](" + ",".join(format_term(a) for a in t.args) + ")"


@lru_cache(maxsize=None)
def term_key(t) -> tuple:
    """Height first, then root symbol, then arguments."""
    if isinstance(t, Const):
        return (0, 0, t.cls, t.pos, t.j, ())
    return (height(t), 1, t.edge, t.pos, t.j, tuple(term_key(a) for a in t.args))


EDGE_MODES = ("all", "maximal", "reduced")


@dataclass(frozen=True)
class CoverParams:
    N: int
    m: int | None = None
    J: int | None = None
    edge_mode: str = "all"
    max_elements: int = 5000

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if self.m is not None and self.m < self.N:
            raise ValueError("m must be at least N")
        if self.J is not None and self.J < 1:
            raise ValueError("J must be positive")
        if self.edge_mode not in EDGE_MODES:
            raise ValueError(f"edge_mode must be one of {EDGE_MODES}")

    @property
    def level(self) -> int:
        return self.N if self.m is None else self.m

    @property
    def M(self) -> int:
        return (self.N * self.N + self.N) // 2

    def j_budget(self, width: int) -> int:
        return self.J if self.J is not None else width ** (self.level + 2)

    def with_level(self, n: int) -> "CoverParams":
        return CoverParams(n, self.m if self.m is not None else max(n, self.N), self.J, self.edge_mode,
                           self.max_elements)


def minimal_j(width: int, n: int) -> int:
    """Smallest superscript budget that never blocks an extension at level n."""
    symbols = sum((width - 1) ** k for k in range(n + 1))
    return (width - 1) * symbols + 1


@dataclass(frozen=True)
class CoverInvariant:
    """An invariant with repeated (padding) positions removed from every class."""

    source: Invariant
    types: tuple  # class -> AtomicType over distinct positions
    edges: tuple  # sorted (d, rho, e) with rho over distinct positions
    full: tuple  # class -> list of (edge id) bijective edges
    extending: tuple  # class -> list of (edge id) edges with fresh positions

    @property
    def width(self) -> int:
        return max((t.arity for t in self.types), default=0)

    def seed_classes(self) -> list[int]:
        """Least class of every orbit under bijective edges."""
        out = []
        for e in range(len(self.types)):
            if not any(self.edges[k][2] < e for k in self.full[e]):
                out.append(e)
        return out

    @classmethod
    def of(cls, inv: Invariant, edge_mode: str = "all") -> "CoverInvariant":
        cores = [inv.labels[c].distinct_positions() for c in inv.classes]
        types = tuple(inv.labels[c].restrict(cores[c]) for c in inv.classes)

        def core_index(c, p):
            return cores[c].index(inv.labels[c].partition[p])

        edges = set()
        for d, rho, e in inv.edges:
            edges.add((d, tuple(sorted({(core_index(d, i), core_index(e, j)) for i, j in rho})), e))
        if edge_mode in ("maximal", "reduced"):
            by_ends: dict[tuple, list[frozenset]] = {}
            for d, rho, e in edges:
                by_ends.setdefault((d, e), []).append(frozenset(rho))
            edges = {(d, rho, e) for d, rho, e in edges
                     if not any(frozenset(rho) < r2 for r2 in by_ends[(d, e)])}
        if edge_mode == "reduced":
            edges = _drop_reorderings(edges, types)
        edges = tuple(sorted(edges))
        full: list[list[int]] = [[] for _ in types]
        extending: list[list[int]] = [[] for _ in types]
        for k, (d, rho, e) in enumerate(edges):
            if len(rho) == types[e].arity:
                if len(rho) != types[d].arity:
                    raise CoverError(f"edge {k} maps a smaller class onto all of class {e}")
                full[d].append(k)
            else:
                extending[d].append(k)
        return cls(inv, types, edges, tuple(map(tuple, full)), tuple(map(tuple, extending)))


def _drop_reorderings(edges: set, types: tuple) -> set:
    """Keep one extending edge per orbit under composing with bijective edges on either side.

    Edges in one orbit extend a hyperedge by the same fresh terms up to a
    reordering of the tuple, so one of them suffices to realise the invariant.
    """
    def bijective(d, rho, e):
        return len(rho) == types[e].arity == types[d].arity

    bij = [x for x in edges if bijective(*x)]
    keep = set(bij)
    covered = set()
    for d, rho, e in sorted(edges):
        if bijective(d, rho, e) or (d, rho, e) in covered:
            continue
        keep.add((d, rho, e))
        for src, s, d1 in bij:
            if d1 != d:
                continue
            back = {i: p for p, i in s}
            for e1, t, dst in bij:
                if e1 == e:
                    fwd = dict(t)
                    covered.add((src, tuple(sorted((back[i], fwd[j]) for i, j in rho)), dst))
    return keep


@dataclass
class Hyperedge:
    cls: int
    tup: tuple
    level: int
    parent: int | None = None  # record this one extends
    edge: int | None = None
    j: int | None = None

    @property
    def members(self) -> frozenset:
        return frozenset(self.tup)

    def fresh(self) -> frozenset:
        """Terms introduced in this hyperedge."""
        if self.edge is None:
            return self.members
        return frozenset(t for t in self.tup if isinstance(t, Func) and t.edge == self.edge and t.j == self.j)


@dataclass
class Cover:
    inv: CoverInvariant
    params: CoverParams
    J: int
    records: list[Hyperedge]
    by_set: dict
    terms: list
    index: dict
    structure: Structure
    sub_hyperedges: list[frozenset] = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.params.N

    def __len__(self) -> int:
        return len(self.terms)

    def hypergraph(self) -> Hypergraph:
        edges = [r.members for r in self.records] + self.sub_hyperedges
        return Hypergraph.of([[self.index[t] for t in e] for e in edges], range(len(self.terms)))

    def guards_of(self, x: frozenset) -> list[int]:
        idx = self._elem_index()
        sets = [idx.get(t, set()) for t in x]
        return sorted(set.intersection(*map(set, sets))) if sets else []

    def _elem_index(self) -> dict:
        cached = self.__dict__.get("_eidx")
        if cached is None:
            cached = {}
            for k, r in enumerate(self.records):
                for t in r.members:
                    cached.setdefault(t, set()).add(k)
            self.__dict__["_eidx"] = cached
        return cached

    def primary_guards(self, x: frozenset) -> list[int]:
        return [k for k in self.guards_of(x) if self.records[k].fresh() & x]

    def provenance(self) -> str:
        lines = [f"t{k} = {format_term(t)}" for k, t in enumerate(self.terms)]
        for k, r in enumerate(self.records):
            src = "constants" if r.parent is None else f"h{r.parent} -rho{r.edge},j={r.j}->"
            lines.append(f"h{k}: class {r.cls} level {r.level} {src} ({','.join(f't{self.index[t]}' for t in r.tup)})")
        return "\n".join(lines) + "\n"


def _views(cinv: CoverInvariant, rec: Hyperedge):
    yield rec.cls, rec.tup
    for k in cinv.full[rec.cls]:
        _, rho, e = cinv.edges[k]
        out = [None] * cinv.types[e].arity
        for i, j in rho:
            out[j] = rec.tup[i]
        if (e, tuple(out)) != (rec.cls, rec.tup):
            yield e, tuple(out)


def build_cover(inv: Invariant, params: CoverParams) -> Cover:
    cinv = CoverInvariant.of(inv, params.edge_mode)
    w = cinv.width
    if w < 2:
        raise CoverError("width-1 invariants have no term cover; use realise_width_one")
    budget = params.j_budget(w)
    n = params.N
    records: list[Hyperedge] = []
    by_set: dict[frozenset, int] = {}
    elements: set = set()
    queue: deque = deque()

    def add(rec: Hyperedge):
        s = rec.members
        if s in by_set:
            return
        by_set[s] = len(records)
        records.append(rec)
        elements.update(s)
        if len(elements) > params.max_elements:
            raise CoverTooLarge(f"cover exceeds {params.max_elements} elements")
        for view in _views(cinv, rec):
            queue.append((len(records) - 1, view))

    seeded = cinv.seed_classes() if params.edge_mode == "reduced" else range(len(cinv.types))
    for e in seeded:
        t = cinv.types[e]
        for j in range(budget):
            add(Hyperedge(e, tuple(Const(e, i, j) for i in range(t.arity)), 0))
    while queue:
        k, (d, s) = queue.popleft()
        level = records[k].level
        for eid in cinv.extending[d]:
            _, rho, e = cinv.edges[eid]
            dom = [l for l, _ in rho]
            base = tuple(s[l] for l in dom)
            used = frozenset().union(*(j_values(t) for t in base))
            args = tuple(truncate(t, n - 1) for t in base)
            image = {i: s[l] for l, i in rho}
            arity = cinv.types[e].arity
            available = [j for j in range(budget) if j not in used]
            if not available:
                raise SuperscriptBudgetExceeded(f"superscript budget {budget} exhausted extending along edge {eid}")
            for j in available:
                tup = tuple(image[i] if i in image else Func(eid, e, i, j, args) for i in range(arity))
                add(Hyperedge(e, tup, level + 1, k, eid, j))
    terms = sorted(elements, key=term_key)
    index = {t: k for k, t in enumerate(terms)}
    facts = set()
    subs = set()
    for r in records:
        tau = cinv.types[r.cls]
        for rel, args in tau.atoms:
            if any(not isinstance(a, int) for a in args):
                continue
            facts.add((rel, tuple(index[r.tup[a]] for a in args)))
            members = frozenset(r.tup[a] for a in args)
            if members and members != r.members:
                subs.add(members)
    sig = inv.signature
    structure = Structure(sig, [f"t{k}" for k in range(len(terms))], facts)
    return Cover(cinv, params, budget, records, by_set, terms, index, structure,
                 sorted(subs, key=lambda s: sorted(index[t] for t in s)))


def realise_width_one(inv: Invariant) -> Structure:
    """One element per class; exact for invariants whose guarded sets are singletons."""
    facts = set()
    for c, t in enumerate(inv.labels):
        if len(t.distinct_positions()) != 1:
            raise CoverError("invariant has guarded sets of size above 1")
        for rel, args in t.atoms:
            facts.add((rel, tuple(c for _ in args)))
    return Structure(inv.signature, [f"t{c}" for c in inv.classes], facts)


# projections and checks ------------------------------------------------------

@dataclass
class CheckReport:
    ok: bool
    problems: list[str] = field(default_factory=list)
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, message: str, limit: int = 20) -> None:
        self.ok = False
        if len(self.problems) < limit:
            self.problems.append(message)


def project(c: Cover, k: int, target: Cover | None = None) -> tuple[Cover, dict[int, int]]:
    """Truncate every term at depth k; returns the level-k cover and the element map."""
    if not 2 <= k <= c.N:
        raise ValueError(f"projection level {k} outside 2..{c.N}")
    if target is None:
        target = c if k == c.N else build_cover(c.inv.source, c.params.with_level(k))
    mapping = {}
    for idx, t in enumerate(c.terms):
        u = truncate(t, k)
        if u not in target.index:
            raise CoverError(f"truncation of {format_term(t)} is not an element of the level-{k} cover")
        mapping[idx] = target.index[u]
    return target, mapping


def check_cover(pi: dict[int, int], b: Structure, a: Structure) -> CheckReport:
    """Onto, homomorphic, rigid on guarded sets, and inducing a guarded bisimulation."""
    rep = CheckReport(True)
    if set(pi) != set(b.universe):
        rep.fail("map is not total")
        return rep
    if set(pi.values()) != set(a.universe):
        rep.fail("onto: some elements of the target are not hit")
    for rel, args in b.facts:
        if not a.holds(rel, tuple(pi[x] for x in args)):
            rep.fail(f"homomorphism: {rel}{args} not preserved")
    bsets = maximal_guarded_sets(b)
    b_types, a_types = _TypeIndex(b), _TypeIndex(a)
    for s in bsets:
        img = {pi[x] for x in s}
        if len(img) != len(s):
            rep.fail(f"rigidity: guarded set {sorted(s)} is collapsed")
            continue
        tup = sorted(s)
        if b_types.type_of(tup) != a_types.type_of([pi[x] for x in tup]):
            rep.fail(f"partial isomorphism: type of {tup} changes")
    if not rep.ok:
        return rep
    asets = maximal_guarded_sets(a)
    a_by_elem: dict[int, list] = {}
    for y in asets:
        for v in y:
            a_by_elem.setdefault(v, []).append(y)
    preimages: dict[frozenset, list[frozenset]] = {}
    for s in bsets:
        preimages.setdefault(frozenset(pi[x] for x in s), []).append(s)
    for s in asets:
        if s not in preimages:
            rep.fail(f"back: maximal guarded set {sorted(s)} of the target has no guarded preimage")
    for x in bsets:
        img = frozenset(pi[v] for v in x)
        inv_x = {pi[v]: v for v in x}
        for y in {y for v in img for y in a_by_elem[v]}:
            shared = y & img
            want = {inv_x[v] for v in shared}
            if not any(want <= cand for cand in preimages.get(y, [])):
                rep.fail(f"back: from {sorted(x)} the move to {sorted(y)} cannot be answered")
    return rep


def check_conformality(c: Cover, n: int) -> bool:
    if n > c.N:
        raise ValueError("bound exceeds the cover level")
    return is_conformal(c.hypergraph(), n)


def check_realises(c: Cover) -> bool:
    """The invariant of the cover is the input invariant."""
    got = invariant(c.structure, c.inv.source.width)
    return invariants_isomorphic(got, c.inv.source)


def check_primary_guards(c: Cover) -> CheckReport:
    rep = CheckReport(True)
    checked = 0
    seen = set()
    for r in c.records:
        members = sorted(r.members, key=term_key)
        for k in range(1, len(members) + 1):
            for x in itertools.combinations(members, k):
                x = frozenset(x)
                if x in seen:
                    continue
                seen.add(x)
                checked += 1
                classes = {c.records[g].cls for g in c.primary_guards(x)}
                if len(classes) != 1:
                    rep.fail(f"guarded set {[format_term(t) for t in x]} has primary guards in classes {sorted(classes)}")
    rep.detail = f"{checked} guarded sets"
    return rep


def relation_of(c: Cover, s, t) -> str:
    """'sib', 'pred' (s precedes t) or 'succ' (t precedes s) for a guarded pair."""
    n = c.N
    sib = (isinstance(s, Const) and isinstance(t, Const) and (s.cls, s.j) == (t.cls, t.j)) or \
          (isinstance(s, Func) and isinstance(t, Func) and (s.edge, s.j, s.args) == (t.edge, t.j, t.args))
    pred = isinstance(t, Func) and truncate(s, n - 1) in t.args
    succ = isinstance(s, Func) and truncate(t, n - 1) in s.args
    hits = [name for name, ok in (("sib", sib), ("pred", pred), ("succ", succ)) if ok]
    if len(hits) != 1:
        raise CoverError(f"pair {format_term(s)}, {format_term(t)} classified as {hits or 'nothing'}")
    return hits[0]


def classify_pairs(c: Cover) -> dict[tuple, str]:
    table = {}
    for r in c.records:
        for s, t in itertools.permutations(r.members, 2):
            if (s, t) not in table:
                table[(s, t)] = relation_of(c, s, t)
    return table


def check_pair_partition(c: Cover) -> CheckReport:
    rep = CheckReport(True)
    try:
        table = classify_pairs(c)
    except CoverError as exc:
        rep.fail(str(exc))
        return rep
    rep.detail = f"{len(table) // 2} guarded pairs"
    return rep


def pred_graph(c: Cover) -> nx.DiGraph:
    g = nx.DiGraph()
    for (s, t), rel in classify_pairs(c).items():
        if rel == "pred":
            g.add_edge(s, t)
    return g


def check_pred_acyclic(c: Cover) -> CheckReport:
    rep = CheckReport(True)
    g = pred_graph(c)
    for cyc in nx.simple_cycles(g, length_bound=c.N):
        rep.fail(f"pred cycle of length {len(cyc)}")
        break
    return rep


def check_pred_transitive(c: Cover) -> CheckReport:
    rep = CheckReport(True)
    if c.N < 3:
        rep.detail = "vacuous below level 3"
        return rep
    table = classify_pairs(c)
    for r in c.records:
        for a, b, d in itertools.permutations(r.members, 3):
            if table[(a, b)] == "pred" and table[(b, d)] == "pred" and table[(a, d)] != "pred":
                rep.fail(f"pred not transitive on {[format_term(x) for x in (a, b, d)]}")
    return rep


def e_of(c: Cover, x: frozenset) -> int | None:
    classes = {c.records[g].cls for g in c.primary_guards(x)}
    return classes.pop() if len(classes) == 1 else None


def check_primary_truncation(c: Cover, lower: Cover, samples: int = 500, rng: random.Random | None = None) -> CheckReport:
    """Class of the primary guards is stable under one truncation step (level 3 and above)."""
    rep = CheckReport(True)
    if c.N < 3:
        rep.detail = "vacuous below level 3"
        return rep
    rng = rng or random.Random(0)
    sets = []
    for r in c.records:
        members = sorted(r.members, key=term_key)
        for k in range(1, len(members) + 1):
            sets.extend(frozenset(x) for x in itertools.combinations(members, k))
    sets = list(dict.fromkeys(sets))
    if len(sets) > samples:
        sets = rng.sample(sets, samples)
    for x in sets:
        y = frozenset(truncate(t, lower.N) for t in x)
        if e_of(c, x) != e_of(lower, y):
            rep.fail(f"class of primary guards changes under truncation for {[format_term(t) for t in x]}")
    rep.detail = f"{len(sets)} guarded sets"
    return rep


def _short_cycles(adj: dict, bound: int, limit: int) -> list[list]:
    """Cycles of length 3..bound, each listed once, starting from its least vertex."""
    order = {v: k for k, v in enumerate(sorted(adj, key=term_key))}
    out: list[list] = []

    def extend(path: list, on_path: set):
        last = path[-1]
        for v in adj[last]:
            if v == path[0] and len(path) >= 3 and order[path[1]] < order[last]:
                out.append(list(path))
                if len(out) >= limit:
                    return True
            elif v not in on_path and order[v] > order[path[0]] and len(path) < bound:
                path.append(v)
                on_path.add(v)
                done = extend(path, on_path)
                path.pop()
                on_path.discard(v)
                if done:
                    return True
        return False

    for s in sorted(adj, key=order.get):
        if extend([s], {s}):
            break
    return out


def check_chords(c: Cover, lower: Cover, samples: int = 200, rng: random.Random | None = None) -> CheckReport:
    """Every short cycle has a vertex whose neighbourhood triangle is guarded one level down."""
    rep = CheckReport(True)
    rng = rng or random.Random(0)
    adj: dict = {}
    for r in c.records:
        for s, t in itertools.combinations(r.members, 2):
            adj.setdefault(s, set()).add(t)
            adj.setdefault(t, set()).add(s)
    cycles = _short_cycles(adj, c.N, 20 * samples)
    if len(cycles) > samples:
        cycles = rng.sample(cycles, samples)
    for cyc in cycles:
        n = len(cyc)
        found = False
        for i in range(n):
            tri = frozenset(truncate(cyc[(i + d) % n], lower.N) for d in (-1, 0, 1))
            if len(tri) == 1 or lower.guards_of(tri):
                found = True
                break
        if not found:
            rep.fail(f"cycle of length {n} has no guarded triangle after truncation")
    rep.detail = f"{len(cycles)} cycles"
    return rep


def check_weak_acyclicity(big: Cover, small: Cover, pi: dict[int, int], n: int, queries: Sequence[Structure],
                          max_images: int = 200, budget: int = 200_000) -> CheckReport:
    """For each query and (sampled) homomorphism into ``big``, the projected image sits in an acyclic part of ``small``."""
    from .hyperanalysis import match_atoms

    rep = CheckReport(True)
    facts = small.structure.fact_list()
    by_elem: dict[int, list] = {}
    for f in facts:
        for x in set(f[1]):
            by_elem.setdefault(x, []).append(f)
    images_checked = 0
    for q in queries:
        if len(q) > n:
            continue
        seen = set()
        for hom in match_atoms(q.fact_list(), big.structure):
            img = frozenset((rel, tuple(pi[hom[x]] for x in args)) for rel, args in q.facts)
            if img in seen:
                continue
            seen.add(img)
            if len(seen) > max_images:
                break
            verts = {x for _, args in img for x in args}
            pool = sorted({f for v in verts for f in by_elem.get(v, ())} - img)
            images_checked += 1
            if not acyclic_extension_exists(img, pool, max_extra=len(verts), budget=budget):
                rep.fail(f"image {sorted(img)} of a {len(q.facts)}-atom query has no acyclic extension")
    rep.detail = f"{images_checked} images"
    return rep


@dataclass
class CheckSuite:
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(bool(r) for r in self.results.values())

    def report(self) -> str:
        lines = []
        for name, r in self.results.items():
            status = "pass" if bool(r) else "FAIL"
            extra = ""
            if isinstance(r, CheckReport):
                extra = (" (" + r.detail + ")" if r.detail else "") + "".join(f"\n    {p}" for p in r.problems)
            lines.append(f"{name}: {status}{extra}")
        return "\n".join(lines) + "\n"


def hyperedges_by_class(c: Cover) -> set[tuple[int, frozenset]]:
    return {(r.cls, r.members) for r in c.records}


def run_checks(c: Cover, lower: Cover | None = None) -> CheckSuite:
    suite = CheckSuite()
    suite.results["primary guards in one class"] = check_primary_guards(c)
    suite.results["invariant realised"] = check_realises(c)
    if c.N > 2:
        lower = lower or build_cover(c.inv.source, c.params.with_level(c.N - 1))
        _, pi = project(c, c.N - 1, lower)
        suite.results["projection is a cover"] = check_cover(pi, c.structure, lower.structure)
        projected = {(r.cls, frozenset(truncate(t, lower.N) for t in r.members)) for r in c.records}
        suite.results["projection maps hyperedges onto"] = CheckReport(projected == hyperedges_by_class(lower))
        suite.results["primary class stable under truncation"] = check_primary_truncation(c, lower)
        suite.results["short cycles gain chords"] = check_chords(c, lower)
    else:
        _, pi = project(c, c.N)
        suite.results["projection is a cover"] = check_cover(pi, c.structure, c.structure)
    suite.results["sib/pred partition guarded pairs"] = check_pair_partition(c)
    if bool(suite.results["sib/pred partition guarded pairs"]):
        suite.results["no short pred cycles"] = check_pred_acyclic(c)
        suite.results["pred transitive on guarded sets"] = check_pred_transitive(c)
    suite.results[f"{c.N}-conformal"] = CheckReport(check_conformality(c, c.N))
    return suite
