"""Decision procedures: satisfiability by type elimination, query answering, small models, canonisation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .bisim import Invariant, ordered_invariant
from .core import AtomicType, Signature, Structure
from .cover import CoverInvariant, CoverParams, build_cover, minimal_j, realise_width_one
from .hyperanalysis import match_atoms, structure_is_acyclic
from .logic import (
    And, Atom, Eq, Exists, Formula, Iff, Implies, Not, Or, Truth, conjunction, nnf,
    cgf_to_gf, free_variables, gtgd_to_gf, is_clique_guarded_formula, model_check, print_formula,
    scott_normal_form, signature_of, TGD,
)
from .queries import ConjunctiveQuery, UnionQuery, acq_to_gf, evaluate, treeify


class TypeBudgetExceeded(RuntimeError):
    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


SAT, UNSAT = "SAT", "UNSAT"
ENTAILED, NOT_ENTAILED = "ENTAILED", "NOT-ENTAILED"


# ground formulas with three-valued evaluation --------------------------------
#
# A ground formula is True, False, ("a", atom), ("n", g), ("&", gs) or ("|", gs)
# where atom is (rel, positions).

def _neg(g):
    if isinstance(g, bool):
        return not g
    if g[0] == "n":
        return g[1]
    return ("n", g)


def _junction(op: str, parts) -> object:
    unit = op == "&"
    out = []
    for p in parts:
        if isinstance(p, bool):
            if p != unit:
                return p
            continue
        out.append(p)
    if not out:
        return unit
    return out[0] if len(out) == 1 else (op, tuple(out))


def _ground(f: Formula, env: dict, const) -> object:
    """Instantiate a quantifier-free formula; ``const(atom)`` gives fixed truth values or None."""
    if isinstance(f, Atom):
        atom = (f.rel, tuple(env[v] for v in f.args))
        value = const(atom)
        return ("a", atom) if value is None else value
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Not):
        return _neg(_ground(f.body, env, const))
    if isinstance(f, And):
        return _junction("&", (_ground(f.left, env, const), _ground(f.right, env, const)))
    if isinstance(f, Or):
        return _junction("|", (_ground(f.left, env, const), _ground(f.right, env, const)))
    if isinstance(f, Implies):
        return _junction("|", (_neg(_ground(f.left, env, const)), _ground(f.right, env, const)))
    if isinstance(f, Iff):
        l, r = _ground(f.left, env, const), _ground(f.right, env, const)
        return _junction("|", (_junction("&", (l, r)), _junction("&", (_neg(l), _neg(r)))))
    raise ValueError(f"quantifier inside a normal-form body: {print_formula(f)}")


def _eval3(g, assign: dict):
    if isinstance(g, bool):
        return g
    tag = g[0]
    if tag == "a":
        return assign.get(g[1])
    if tag == "n":
        v = _eval3(g[1], assign)
        return None if v is None else not v
    unit = tag == "&"
    unknown = False
    for p in g[1]:
        v = _eval3(p, assign)
        if v is None:
            unknown = True
        elif v != unit:
            return v
    return None if unknown else unit


def _atoms_of(g, out: set) -> set:
    if isinstance(g, bool):
        return out
    if g[0] == "a":
        out.add(g[1])
    elif g[0] == "n":
        _atoms_of(g[1], out)
    else:
        for p in g[1]:
            _atoms_of(p, out)
    return out


# polarity --------------------------------------------------------------------

def polarities(f: Formula) -> dict[str, set]:
    """Relation -> subset of {+1, -1}: the signs of its occurrences in the negation normal form.

    Universal guards count as negative occurrences, existential guards as positive ones.
    """
    out: dict[str, set] = {}

    def walk(g, sign):
        if isinstance(g, Atom):
            out.setdefault(g.rel, set()).add(sign)
        elif isinstance(g, Not):
            walk(g.body, -sign)
        elif isinstance(g, (And, Or)):
            walk(g.left, sign)
            walk(g.right, sign)
        elif isinstance(g, Exists):
            for a in g.guard:
                walk(a, 1)
            walk(g.body, sign)
        elif hasattr(g, "guard"):
            for a in g.guard:
                walk(a, -1)
            walk(g.body, sign)

    walk(nnf(f), 1)
    return out


# types -----------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CoreType:
    """Atomic type over positions 0..n-1, all distinct; ``atoms`` lists the true non-fixed atoms."""

    n: int
    atoms: tuple

    def atom_set(self) -> frozenset:
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = frozenset(self.atoms)
            object.__setattr__(self, "_set", cached)
        return cached

    def describe(self) -> str:
        body = " & ".join(f"{r}({','.join(str(a + 1) for a in args)})" for r, args in self.atoms)
        return f"[{self.n}] {body or 'no atoms'}"


def _restriction(t: CoreType, positions: Sequence[int]) -> tuple:
    """Key of the type of the (possibly repeating) tuple of ``positions`` of t."""
    first: dict[int, int] = {}
    for k, p in enumerate(positions):
        first.setdefault(p, k)
    pattern = tuple(first[p] for p in positions)
    atoms = frozenset((rel, tuple(first[a] for a in args)) for rel, args in t.atoms
                      if all(a in first for a in args))
    return pattern, atoms


@dataclass
class _Space:
    """Everything the elimination needs for one valuation of the nullary symbols."""

    width: int
    signature: Signature
    fixed: dict  # relation -> bool (polarity fixing)
    nullary: dict  # nullary relation -> bool
    types: list  # guarded CoreTypes in canonical order
    demands: list  # per type: list of (key, demanding positions)
    supplies: list  # per type: dict key -> (alpha positions of xs, full alpha)
    global_demands: list  # keys with empty trigger tuple
    generated: int = 0


@dataclass
class SatResult:
    verdict: str
    width: int
    signature: Signature
    original_signature: Signature
    types: list = field(default_factory=list)  # surviving CoreTypes
    trace: list = field(default_factory=list)  # (type description, missing requirement)
    stats: dict = field(default_factory=dict)
    space: _Space | None = field(default=None, repr=False)
    _witness: Invariant | None = field(default=None, repr=False)

    @property
    def sat(self) -> bool:
        return self.verdict == SAT

    def atomic_type(self, t: CoreType) -> AtomicType:
        return _full_type(t, self.space, self.width)

    @property
    def witness(self) -> Invariant | None:
        """Invariant over the surviving types with every compatible rho-edge."""
        if self.verdict != SAT:
            return None
        if self._witness is None:
            labels = [self.atomic_type(t) for t in self.types]
            self._witness = _all_edges_invariant(self.signature, self.width, labels)
        return self._witness


def _full_type(t: CoreType, space: _Space, w: int) -> AtomicType:
    atoms = list(t.atoms)
    for rel, value in space.nullary.items():
        if value:
            atoms.append((rel, ()))
    for rel, value in space.fixed.items():
        k = space.signature.arity(rel)
        if value and k:
            atoms.extend((rel, args) for args in itertools.product(range(t.n), repeat=k))
    partition = list(range(t.n)) + [t.n - 1] * (w - t.n)
    return AtomicType.make(partition, atoms)


def _all_edges_invariant(sig: Signature, w: int, labels: list[AtomicType]) -> Invariant:
    groups: dict = {}
    for c, t in enumerate(labels):
        for k in range(1, w + 1):
            for pos in itertools.permutations(range(w), k):
                groups.setdefault(t.restrict(pos), []).append((c, pos))
    edges = set()
    for members in groups.values():
        for c, p in members:
            for d, q in members:
                edges.add((c, tuple(sorted(zip(p, q))), d))
    return Invariant(sig, w, tuple(labels), frozenset(edges))


def _instances(conj, n: int, const) -> list:
    """Ground (not guard or body) for every map of the conjunct's variables onto 0..n-1."""
    out = []
    vs = conj.variables
    for image in itertools.product(range(n), repeat=len(vs)):
        if len(set(image)) != n:
            continue
        env = dict(zip(vs, image))
        guard = _junction("&", [_ground(g, env, const) for g in conj.guard])
        g = _junction("|", (_neg(guard), _ground(conj.body, env, const)))
        if g is not True:
            out.append(g)
    return out


def _level_atoms(sig: Signature, n: int, fixed: dict) -> list:
    out = []
    for rel in sig.names:
        k = sig.arity(rel)
        if k == 0 or rel in fixed:
            continue
        for args in itertools.product(range(n), repeat=k):
            if len(set(args)) == n:
                out.append((rel, args))
    return out


def _supply_instances(reqs, n: int, const) -> list:
    """Ground guard-and-body of every existential whose witness tuple uses all n positions."""
    out = []
    for e in reqs:
        fx = tuple(v for v in e.variables if v in free_variables(Exists(e.witnesses, e.guard, e.body)))
        allvars = fx + tuple(e.witnesses)
        for alpha in itertools.product(range(n), repeat=len(allvars)):
            if len(set(alpha)) != n:
                continue
            env = dict(zip(allvars, alpha))
            g = _junction("&", [_ground(x, env, const) for x in e.guard] + [_ground(e.body, env, const)])
            if g is not False:
                out.append(g)
    return out


def _generate_level(n: int, w: int, sig: Signature, universals, const, lower: dict, fixed: dict,
                    budget: list, reqs=()) -> tuple[list, list]:
    """All universal-respecting types over n distinct positions, and the guarded ones among them.

    Above one position only witness sets are ever realised, so the guarded list keeps
    just the types that supply some existential on all n positions.
    """
    top = _level_atoms(sig, n, fixed)
    inst = []
    for u in universals:
        inst.extend(_instances(u, n, const))
    if any(g is False for g in inst):
        return [], []
    touching: dict = {}
    for k, g in enumerate(inst):
        for a in _atoms_of(g, set()):
            touching.setdefault(a, []).append(k)

    comps = []
    if n > 1:
        for sub in itertools.combinations(range(n), n - 1):
            rows = []
            for t in lower[n - 1]:
                full = {}
                for rel, args in _all_atoms(sig, n - 1, fixed):
                    full[(rel, tuple(sub[a] for a in args))] = (rel, args) in t.atom_set()
                rows.append(full)
            comps.append(rows)

    assign: dict = {}
    found_all: list = []
    found_guarded: list = []
    need_all = n < w
    # a relation fixed to true with arity >= n guards every n-tuple
    auto = any(v and sig.arity(r) >= n for r, v in fixed.items())
    supply = _supply_instances(reqs, n, const) if n > 1 else [True]
    if not (supply or need_all):
        return [], []

    def ok(changed) -> bool:
        ids = {k for a in changed for k in touching.get(a, ())}
        if not all(_eval3(inst[k], assign) is not False for k in ids):
            return False
        return need_all or any(_eval3(g, assign) is not False for g in supply)

    def finish():
        budget[1] += 1
        if budget[1] > budget[0]:
            raise TypeBudgetExceeded(f"type budget exceeded: more than {budget[0]} types or search nodes", 0.0)
        guarded = (n == 1 or auto or any(assign[a] for a in top)) and any(_eval3(g, assign) for g in supply)
        if not (guarded or need_all):
            return
        t = CoreType(n, tuple(sorted(a for a, v in assign.items() if v)))
        found_all.append(t)
        if guarded:
            found_guarded.append(t)

    # rows of component i indexed by their values on atoms shared with earlier components
    shared: list[list] = []
    fresh: list[list] = []
    index: list[dict] = []
    seen_atoms: set = set()
    for rows in comps:
        keys = list(rows[0]) if rows else []
        shared.append([a for a in keys if a in seen_atoms])
        fresh.append([a for a in keys if a not in seen_atoms])
        seen_atoms.update(keys)
        by_key: dict = {}
        for row in rows:
            by_key.setdefault(tuple(row[a] for a in shared[-1]), []).append(row)
        index.append(by_key)

    def place_comp(i):
        if i == len(comps):
            finish()
            return
        new = fresh[i]
        for row in index[i].get(tuple(assign[a] for a in shared[i]), ()):
            for a in new:
                assign[a] = row[a]
            budget[1] += 1
            if ok(new):
                place_comp(i + 1)
            for a in new:
                del assign[a]

    supply_atoms = sorted({a for g in supply for a in _atoms_of(g, set())})

    def supply_possible() -> bool:
        # joint lookahead on the open atoms of the supply formulas; the rest stay unknown
        open_atoms = [a for a in supply_atoms if a not in assign]
        if not open_atoms or len(open_atoms) > 12:
            return True
        ids = {k for a in open_atoms for k in touching.get(a, ())}
        try:
            for values in itertools.product((False, True), repeat=len(open_atoms)):
                assign.update(zip(open_atoms, values))
                if all(_eval3(inst[k], assign) is not False for k in ids) and \
                        any(_eval3(g, assign) is not False for g in supply):
                    return True
            return False
        finally:
            for a in open_atoms:
                del assign[a]

    def place_top(i):
        if i == len(top):
            if not need_all and n > 1 and not auto and not any(assign[a] for a in top):
                return
            if not need_all and not supply_possible():
                return
            place_comp(0)
            return
        a = top[i]
        for v in (False, True):
            assign[a] = v
            if ok([a]):
                place_top(i + 1)
            del assign[a]

    place_top(0)
    if budget[1] > budget[0]:
        raise TypeBudgetExceeded(f"type budget exceeded: more than {budget[0]} types or search nodes", 0.0)
    return sorted(found_all), sorted(found_guarded)


def _all_atoms(sig: Signature, n: int, fixed: dict) -> list:
    out = []
    for rel in sig.names:
        k = sig.arity(rel)
        if k == 0 or rel in fixed:
            continue
        out.extend((rel, args) for args in itertools.product(range(n), repeat=k))
    return out


def _estimate(sig: Signature, w: int) -> float:
    """Number of raw atom valuations over w positions (the naive type count)."""
    bits = sum(w ** sig.arity(r) for r in sig.names if sig.arity(r) > 0)
    return 2.0 ** bits


def _spaces(snf, w: int, nullary: dict, fixed: dict, budget: list):
    """Yield the elimination input restricted to types of at most k positions, k = 1..w.

    A closed set found before k reaches w is already a model description;
    only an empty result at k = w means unsatisfiable.
    """
    sig = snf.signature

    def const(atom):
        rel = atom[0]
        if rel in nullary:
            return nullary[rel]
        return fixed.get(rel)

    for u in snf.universals:
        if not u.variables:
            if _ground(u.body, {}, const) is False:
                return
    universals = [u for u in snf.universals if u.variables]
    reqs = snf.exists
    global_demands = []
    for r, e in enumerate(reqs):
        if not e.variables and const((e.trigger.rel, ())) is not False:
            global_demands.append((r, ((), frozenset())))
    lower: dict = {}
    types: list = []
    demands: list = []
    supplies: list = []
    for n in range(1, w + 1):
        allt, guarded = _generate_level(n, w, sig, universals, const, lower, fixed, budget, reqs)
        lower[n] = allt
        for t in guarded:
            dem, sup = _requirements(t, reqs, const)
            types.append(t)
            demands.append(dem)
            supplies.append(sup)
        yield _Space(w, sig, fixed, nullary, list(types), list(demands), list(supplies),
                     global_demands, budget[1])


def _requirements(t: CoreType, reqs, const) -> tuple[list, dict]:
    tset = t.atom_set()

    def value(atom):
        v = const(atom)
        return (atom in tset) if v is None else v

    dem: list = []
    sup: dict = {}
    for r, e in enumerate(reqs):
        xs = e.variables
        # the witness only has to agree on the variables free in the existential
        shared = free_variables(Exists(e.witnesses, e.guard, e.body))
        keep = [i for i, v in enumerate(xs) if v in shared]
        fx = tuple(xs[i] for i in keep)
        if xs:
            for beta in itertools.product(range(t.n), repeat=len(xs)):
                env = dict(zip(xs, beta))
                if value((e.trigger.rel, tuple(env[v] for v in e.trigger.args))):
                    sub = tuple(beta[i] for i in keep)
                    item = ((r, _restriction(t, sub)), sub)
                    if item not in dem:
                        dem.append(item)
        allvars = fx + tuple(e.witnesses)
        for alpha in itertools.product(range(t.n), repeat=len(allvars)):
            env = dict(zip(allvars, alpha))
            g = _junction("&", [_ground(x, env, const) for x in e.guard] + [_ground(e.body, env, const)])
            if _eval3(g, _closed(g, tset)) is True:
                key = (r, _restriction(t, alpha[:len(fx)]))
                sup.setdefault(key, alpha)
    return dem, sup


def _closed(g, tset: frozenset) -> dict:
    """Total assignment for the atoms of g: true exactly on tset."""
    return {a: a in tset for a in _atoms_of(g, set())}


def _eliminate(space: _Space, reqs) -> tuple[list[int], list]:
    alive = [True] * len(space.types)
    count: dict = {}
    for k, sup in enumerate(space.supplies):
        for key in sup:
            count[key] = count.get(key, 0) + 1
    trace = []
    changed = True
    while changed:
        changed = False
        for k, t in enumerate(space.types):
            if not alive[k]:
                continue
            missing = next((key for key, _ in space.demands[k] if count.get(key, 0) == 0), None)
            if missing is None:
                continue
            alive[k] = False
            changed = True
            trace.append((t.describe(), reqs[missing[0]].formula()))
            for key in space.supplies[k]:
                count[key] -= 1
    survivors = [k for k in range(len(space.types)) if alive[k]]
    for key in space.global_demands:
        if count.get(key, 0) == 0:
            trace.append(("(domain)", reqs[key[0]].formula()))
            return [], trace
    return survivors, trace


def _forced_nullary(snf) -> dict:
    """Nullary symbols asserted (or denied) by a sentence-level conjunct of their own."""
    out = {}
    for u in snf.universals:
        if u.variables:
            continue
        b = u.body
        if isinstance(b, Atom) and not b.args:
            out[b.rel] = True
        elif isinstance(b, Not) and isinstance(b.body, Atom) and not b.body.args:
            out[b.body.rel] = False
    return out


def gf_sat(f: Formula, max_types: int = 200_000) -> SatResult:
    """Satisfiability of a guarded sentence by type elimination over guarded atomic types."""
    if free_variables(f):
        raise ValueError("not a sentence")
    original = signature_of(f)
    if is_clique_guarded_formula(f):
        f = cgf_to_gf(f)
    snf = scott_normal_form(f)
    sig = snf.signature
    w = max(snf.width, 1)
    signs = polarities(snf.formula())
    fixed = {}
    for rel in sig.names:
        s = signs.get(rel, set())
        if sig.arity(rel) and s == {1}:
            fixed[rel] = True
        elif sig.arity(rel) and s == {-1}:
            fixed[rel] = False
    forced = _forced_nullary(snf)
    zero = [rel for rel in sig.names if sig.arity(rel) == 0 and rel not in forced]
    trace: list = []
    valuations = []
    for values in itertools.product((False, True), repeat=len(zero)):
        nullary = dict(forced)
        nullary.update(zip(zero, values))
        valuations.append(nullary)
    budget = [max_types, 0]
    gens = [(v, _spaces(snf, w, v, fixed, budget)) for v in valuations]
    for k in range(1, w + 1):
        for nullary, gen in gens:
            label = ",".join(f"{r}={'1' if v else '0'}" for r, v in nullary.items())
            prefix = f"{{{label}}} " if label else ""
            try:
                space = next(gen, None)
            except TypeBudgetExceeded as exc:
                exc.estimate = _estimate(sig, w)
                raise
            if space is None:
                if k == 1:
                    trace.append((prefix + "(all types)", "a sentence-level conjunct is false"))
                continue
            survivors, tr = _eliminate(space, snf.exists)
            if k == w:
                trace.extend((prefix + t, print_formula(r)) for t, r in tr)
            if survivors:
                space.types = [space.types[i] for i in survivors]
                space.demands = [space.demands[i] for i in survivors]
                space.supplies = [space.supplies[i] for i in survivors]
                stats = {"width": w, "levels used": k, "search nodes": budget[1],
                         "surviving types": len(survivors), "fixed relations": dict(fixed),
                         "nullary": dict(nullary)}
                return SatResult(SAT, w, sig, original, space.types, trace, stats, space)
    return SatResult(UNSAT, w, sig, original, [], trace, {"width": w, "search nodes": budget[1],
                                                          "fixed relations": dict(fixed)})


# small models ----------------------------------------------------------------

def skeleton(r: SatResult) -> Invariant:
    """Witness classes reachable through one chosen supplier per requirement.

    Requirements met inside the demanding tuple add no edge; the others add
    an extending edge to the least supplying type.
    """
    space = r.space
    suppliers: dict = {}
    for k in range(len(space.types)):
        for key in space.supplies[k]:
            suppliers.setdefault(key, k)
    roots = sorted({suppliers[key] for key in space.global_demands}) or [0]
    chosen: list[int] = []
    index: dict[int, int] = {}
    edges = set()
    queue = list(roots)
    for k in roots:
        index.setdefault(k, len(index))
    while queue:
        k = queue.pop(0)
        chosen.append(k)
        for key, beta in space.demands[k]:
            s = suppliers[key]
            alpha = space.supplies[s][key]
            xs_len = len(beta)
            rho = tuple(sorted(set(zip(beta, alpha[:xs_len]))))
            target = space.types[s]
            if {j for _, j in rho} == set(range(target.n)):
                continue
            if s not in index:
                index[s] = len(index)
                queue.append(s)
            edges.add((k, rho, s))
    order = sorted(index, key=index.get)
    labels = tuple(r.atomic_type(space.types[k]) for k in order)
    renamed = frozenset((index[a], rho, index[b]) for a, rho, b in edges)
    return Invariant(r.signature, r.width, labels, renamed)


def small_model(r: SatResult, params: CoverParams | None = None) -> Structure:
    """A finite model: a cover of the elimination skeleton, reduced to the input signature."""
    if r.verdict != SAT:
        raise ValueError("small_model needs a SAT result")
    inv = skeleton(r)
    cw = CoverInvariant.of(inv).width
    if cw < 2:
        model = realise_width_one(inv)
    else:
        params = params or CoverParams(2, J=minimal_j(cw, 2), edge_mode="reduced")
        model = build_cover(inv, params).structure
    return model.reduct(r.original_signature.names)


# query answering -------------------------------------------------------------

@dataclass
class AnswerResult:
    verdict: str
    counter_model: Structure | None = None
    stats: dict = field(default_factory=dict)

    @property
    def entailed(self) -> bool:
        return self.verdict == ENTAILED


def negated_treeification(chi: UnionQuery) -> Formula:
    return conjunction([Not(acq_to_gf(d)) for d in chi.disjuncts])


def answer_query(f: Formula, q: UnionQuery, certify: bool = False, max_types: int = 200_000,
                 max_treeify: int = 200_000, j_budget: int | None = None) -> AnswerResult:
    """Does every model of f satisfy q? Counter-models are finite and checked."""
    if free_variables(f):
        raise ValueError("not a sentence")
    g = cgf_to_gf(f) if is_clique_guarded_formula(f) else f
    sig = signature_of(f)
    stats: dict = {}
    base = gf_sat(g, max_types)
    if not base.sat:
        stats["vacuous"] = True
        return AnswerResult(ENTAILED, None, stats)
    # the clique-guard relation of the translation must be available to the acyclic disjuncts
    chi = treeify(q, signature_of(g), minimize=True, budget=max_treeify)
    stats["disjuncts"] = len(chi.disjuncts)
    stats["treeified atoms"] = sum(len(d) for d in chi.disjuncts)
    r = gf_sat(And(g, negated_treeification(chi)), max_types)
    stats["search nodes"] = r.stats.get("search nodes")
    if not r.sat:
        return AnswerResult(ENTAILED, None, stats)
    h = max(q.height, 1)
    cw = CoverInvariant.of(skeleton(r)).width
    levels = [max(2, 3 * h)] if certify else [max(2, h), max(2, 3 * h)]
    model = None
    for n in dict.fromkeys(levels):
        params = CoverParams(n, J=j_budget or minimal_j(max(cw, 2), n), edge_mode="reduced")
        model = small_model(r, params)
        model = model.reduct([n for n in model.signature.names if n in sig or n in q.relations()])
        stats["cover level"] = n
        stats["model size"] = len(model)
        if not model_check(model, f):
            raise AssertionError("counter-model does not satisfy the sentence")
        if not evaluate(_with_query_relations(model, q), q):
            return AnswerResult(NOT_ENTAILED, model, stats)
    raise AssertionError(f"counter-model at cover level {stats['cover level']} still satisfies the query")


def _with_query_relations(a: Structure, q: UnionQuery) -> Structure:
    rels = dict(a.signature.relations)
    for rel, k in q.relations().items():
        rels.setdefault(rel, k)
    if rels == a.signature.relations:
        return a
    return a.with_signature(Signature(rels))


def database_sentence(db: Structure) -> Formula:
    """An existential guarded sentence whose models are those receiving a homomorphism from db."""
    if not db.facts and not len(db):
        return Truth(True)
    names = [f"d{x}" for x in db.universe]
    facts = [Atom(rel, tuple(names[x] for x in args)) for rel, args in db.fact_list()]
    covered = {x for _, args in db.facts for x in args}
    if len(covered) == len(db) and structure_is_acyclic(db) and facts:
        return acq_to_gf(ConjunctiveQuery.of([(a.rel, a.args) for a in facts]))
    taken = set(db.signature.names)
    dom = "Dom"
    while dom in taken:
        dom += "_"
    return Exists(tuple(names), (Atom(dom, tuple(names)),), conjunction(facts))


def chase(db: Structure, rules: Sequence[TGD], max_rounds: int = 6, max_facts: int = 20_000) -> tuple[Structure, bool]:
    """Restricted chase in parallel rounds. Returns (structure, reached a fixpoint).

    A rule fires on a body match only when no extension of the frontier
    already satisfies its head; existential variables get fresh nulls.
    """
    rels = dict(db.signature.relations)
    for rule in rules:
        for a in rule.body + rule.head:
            if rels.setdefault(a.rel, len(a.args)) != len(a.args):
                raise ValueError(f"relation {a.rel} used with two arities")
    sig = Signature(rels, db.signature.constants)
    names = list(db.names)
    facts = set(db.facts)
    for _ in range(max_rounds):
        current = Structure(sig, names, facts, db.constants)
        added = set()
        for rule in rules:
            body = [(a.rel, a.args) for a in rule.body]
            head = [(a.rel, a.args) for a in rule.head]
            for match in match_atoms(body, current):
                frontier = {v: match[v] for v in rule.frontier}
                if next(match_atoms(head, current, frontier), None) is not None:
                    continue
                env = dict(match)
                for v in rule.existentials:
                    env[v] = len(names)
                    names.append(f"_n{len(names)}")
                for rel, args in head:
                    fact = (rel, tuple(env[v] for v in args))
                    if fact not in facts:
                        added.add(fact)
        if not added:
            return current, True
        facts |= added
        if len(facts) > max_facts:
            break
    return Structure(sig, names, facts, db.constants), False


def answer_query_database(db: Structure, rules: Sequence[TGD], q: UnionQuery, chase_rounds: int = 6,
                          **kw) -> AnswerResult:
    """Does every model of db and the rules satisfy q?

    A bounded chase runs first: q on a chase prefix means ENTAILED, and a
    terminating chase is a universal model that decides the question. Otherwise
    the encoded sentence goes through answer_query.
    """
    sentences = gtgd_to_gf(list(rules))
    if chase_rounds:
        c, done = chase(db, rules, chase_rounds)
        c = _with_query_relations(c, q)
        if evaluate(c, q):
            return AnswerResult(ENTAILED, None, {"route": "chase", "chase size": len(c)})
        if done:
            return AnswerResult(NOT_ENTAILED, c, {"route": "chase", "chase size": len(c), "model size": len(c)})
    f = conjunction([database_sentence(db)] + sentences)
    result = answer_query(f, q, **kw)
    result.stats["route"] = "type elimination"
    return result


# canonisation ----------------------------------------------------------------

@dataclass
class Canonical:
    structure: Structure
    method: str  # "cover" or "width-one"


def canonise_report(a: Structure) -> Canonical:
    inv = ordered_invariant(a)
    cinv = CoverInvariant.of(inv, "reduced")
    if cinv.width < 2:
        return Canonical(realise_width_one(inv), "width-one")
    c = build_cover(inv, CoverParams(2, J=minimal_j(cinv.width, 2), edge_mode="reduced"))
    return Canonical(c.structure, "cover")


def canonise(a: Structure) -> Structure:
    """Canonical representative of the guarded bisimulation class of a; element order is the canonical one."""
    return canonise_report(a).structure
