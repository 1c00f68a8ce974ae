"""Signatures, finite relational structures, hypergraphs and atomic types."""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import networkx as nx


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class Signature:
    """Relation names with arities plus a set of constant names."""

    def __init__(self, relations: dict[str, int] | Iterable[tuple[str, int]] = (), constants: Iterable[str] = ()):
        rels = dict(relations)
        for name, arity in rels.items():
            if arity < 0:
                raise ValueError(f"negative arity for {name}")
        consts = frozenset(constants)
        clash = consts & set(rels)
        if clash:
            raise ValueError(f"names used both as relation and constant: {sorted(clash)}")
        self._relations = tuple(sorted(rels.items()))
        self._arity = dict(self._relations)
        self.constants = consts

    @property
    def relations(self) -> dict[str, int]:
        return dict(self._relations)

    def arity(self, name: str) -> int:
        return self._arity[name]

    def __contains__(self, name: str) -> bool:
        return name in self._arity

    @property
    def names(self) -> list[str]:
        return [r for r, _ in self._relations]

    @property
    def width(self) -> int:
        return max([a for _, a in self._relations] + [1])

    def union(self, other: "Signature") -> "Signature":
        rels = dict(self._relations)
        for name, arity in other._relations:
            if rels.get(name, arity) != arity:
                raise ValueError(f"arity clash for {name}: {rels[name]} vs {arity}")
            rels[name] = arity
        return Signature(rels, self.constants | other.constants)

    def restrict(self, names: Iterable[str]) -> "Signature":
        keep = set(names)
        return Signature({r: a for r, a in self._relations if r in keep}, self.constants)

    def __eq__(self, other):
        return isinstance(other, Signature) and self._relations == other._relations and self.constants == other.constants

    def __hash__(self):
        return hash((self._relations, self.constants))

    def __repr__(self):
        rels = ", ".join(f"{r}/{a}" for r, a in self._relations)
        return f"Signature({rels})"


Fact = tuple  # (relation, tuple of element ids)


class Structure:
    """Finite relational structure with elements interned as 0..n-1.

    ``names`` keeps the external label of every element in input order.
    """

    def __init__(self, signature: Signature, names: Sequence[str], facts: Iterable[Fact] = (),
                 constants: dict[str, int] | None = None):
        self.signature = signature
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate element names")
        n = len(self.names)
        fs = set()
        for rel, args in facts:
            args = tuple(args)
            if rel not in signature:
                raise ValueError(f"unknown relation {rel}")
            if len(args) != signature.arity(rel):
                raise ValueError(f"arity mismatch in {rel}{args}")
            if any(not (0 <= a < n) for a in args):
                raise ValueError(f"element outside universe in {rel}{args}")
            fs.add((rel, args))
        self.facts = frozenset(fs)
        self.constants = dict(constants or {})
        missing = signature.constants - set(self.constants)
        if missing:
            raise ValueError(f"constants without interpretation: {sorted(missing)}")
        self._by_rel: dict[str, list[tuple]] = {r: [] for r in signature.names}
        for rel, args in sorted(self.facts):
            self._by_rel[rel].append(args)

    @property
    def universe(self) -> range:
        return range(len(self.names))

    def __len__(self) -> int:
        return len(self.names)

    def tuples(self, rel: str) -> list[tuple]:
        return self._by_rel.get(rel, [])

    def holds(self, rel: str, args: tuple) -> bool:
        return (rel, tuple(args)) in self.facts

    def index(self, name: str) -> int:
        return self.names.index(name)

    @classmethod
    def from_facts(cls, facts: Iterable[tuple[str, Sequence[Hashable]]], signature: Signature | None = None,
                   elements: Sequence[Hashable] = ()) -> "Structure":
        """Build from facts over arbitrary hashable element labels (labels are str()-ed)."""
        order: dict[Hashable, int] = {}
        for e in elements:
            order.setdefault(e, len(order))
        rels: dict[str, int] = {}
        raw = []
        for rel, args in facts:
            args = tuple(args)
            rels.setdefault(rel, len(args))
            if rels[rel] != len(args):
                raise ValueError(f"arity mismatch for {rel}")
            for a in args:
                order.setdefault(a, len(order))
            raw.append((rel, tuple(order[a] for a in args)))
        sig = signature if signature is not None else Signature(rels)
        return cls(sig, [str(e) for e in order], raw)

    def with_signature(self, signature: Signature) -> "Structure":
        return Structure(signature, self.names, [f for f in self.facts if f[0] in signature], self.constants)

    def reduct(self, names: Iterable[str]) -> "Structure":
        return self.with_signature(self.signature.restrict(names))

    def fact_list(self) -> list[Fact]:
        return sorted(self.facts)

    def __eq__(self, other):
        return (isinstance(other, Structure) and self.signature == other.signature and self.names == other.names
                and self.facts == other.facts and self.constants == other.constants)

    def __hash__(self):
        return hash((self.signature, self.names, self.facts))

    def __repr__(self):
        return f"Structure({len(self.names)} elements, {len(self.facts)} facts)"


_IDENT = r"[A-Za-z0-9_]+"
_FACT_RE = re.compile(rf"^({_IDENT})\s*\(\s*(.*?)\s*\)$")
_REL_RE = re.compile(rf"^rel\s+({_IDENT})\s*/\s*(\d+)$")
_CONST_RE = re.compile(rf"^(const|elem)\s+({_IDENT})$")
_ELEM_RE = re.compile(rf"^{_IDENT}$")


def parse_structure(text: str) -> Structure:
    rels: dict[str, int] = {}
    consts: list[str] = []
    names: dict[str, int] = {}
    facts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _REL_RE.match(line)
        if m:
            name, arity = m.group(1), int(m.group(2))
            if rels.get(name, arity) != arity:
                raise ParseError(f"relation {name} redeclared with arity {arity}", lineno)
            rels[name] = arity
            continue
        m = _CONST_RE.match(line)
        if m:
            if m.group(1) == "const":
                consts.append(m.group(2))
            names.setdefault(m.group(2), len(names))
            continue
        m = _FACT_RE.match(line)
        if not m:
            raise ParseError(f"cannot parse {line!r}", lineno)
        rel, body = m.group(1), m.group(2)
        args = [a.strip() for a in body.split(",")] if body else []
        for col, a in enumerate(args):
            if not _ELEM_RE.match(a):
                raise ParseError(f"bad element name {a!r}", lineno, col + 1)
        if rels.setdefault(rel, len(args)) != len(args):
            raise ParseError(f"relation {rel} used with arity {len(args)}, expected {rels[rel]}", lineno)
        for a in args:
            names.setdefault(a, len(names))
        facts.append((rel, tuple(names[a] for a in args)))
    sig = Signature(rels, consts)
    return Structure(sig, list(names), facts, {c: names[c] for c in consts})


def format_structure(a: Structure) -> str:
    lines = [f"rel {r}/{k}" for r, k in a.signature.relations.items()]
    lines += [f"const {c}" for c in sorted(a.constants)]
    used = {x for _, args in a.facts for x in args}
    for rel, args in a.fact_list():
        lines.append(f"{rel}({','.join(a.names[x] for x in args)})")
    # isolated elements need their own line to survive a round trip
    for x in a.universe:
        if x not in used and a.names[x] not in a.constants:
            lines.append(f"elem {a.names[x]}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    edges: tuple  # tuple of frozensets, deterministic order

    @classmethod
    def of(cls, edges: Iterable[Iterable[Hashable]], vertices: Iterable[Hashable] = ()) -> "Hypergraph":
        order: dict[Hashable, int] = {}
        for v in vertices:
            order.setdefault(v, len(order))
        es = []
        for e in edges:
            e = list(e)
            for v in e:
                order.setdefault(v, len(order))
            es.append(frozenset(e))
        uniq = sorted(set(es), key=lambda s: sorted(order[v] for v in s))
        return cls(tuple(order), tuple(uniq))

    @property
    def width(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    def vertex_order(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}


def gaifman_graph(h: Hypergraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(h.vertices)
    order = h.vertex_order()
    for e in h.edges:
        g.add_edges_from(itertools.combinations(sorted(e, key=order.get), 2))
    return g


def maximal_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    uniq = sorted(set(sets), key=len, reverse=True)
    out: list[frozenset] = []
    by_elem: dict = {}
    for s in uniq:
        if s:
            pivot = next(iter(s))
            if any(s < t for t in by_elem.get(pivot, ())):
                continue
        elif out:
            continue
        out.append(s)
        for x in s:
            by_elem.setdefault(x, []).append(s)
    return out


def guarded_sets(a: Structure) -> set[frozenset]:
    """Sets covered by a single fact, plus all singletons (not subset-closed)."""
    gs = {frozenset([x]) for x in a.universe}
    gs.update(frozenset(args) for _, args in a.facts if args)
    return gs


def maximal_guarded_sets(a: Structure) -> list[frozenset]:
    ms = maximal_sets(guarded_sets(a))
    return sorted(ms, key=lambda s: sorted(s))


def structure_hypergraph(a: Structure) -> Hypergraph:
    return Hypergraph.of(maximal_guarded_sets(a), a.universe)


def is_guarded(a: Structure, elements: Iterable[int]) -> bool:
    s = frozenset(elements)
    if not s:
        raise ValueError("guardedness of the empty set is undefined")
    if len(s) == 1:
        return True
    return any(s <= set(args) for _, args in a.facts)


def is_clique_guarded(a: Structure, elements: Iterable[int]) -> bool:
    s = sorted(set(elements))
    if not s:
        raise ValueError("guardedness of the empty set is undefined")
    return all(is_guarded(a, pair) for pair in itertools.combinations(s, 2))


@dataclass(frozen=True, order=True)
class AtomicType:
    """Canonical atomic type of an n-tuple.

    ``partition[i]`` is the least position equal to position i. ``atoms`` lists
    the true atoms with arguments rewritten to representative positions; all
    other atoms over the signature are false. Constant arguments appear as
    ``("c", name)`` pairs.
    """

    arity: int
    partition: tuple
    atoms: tuple = field(default=())

    @classmethod
    def make(cls, partition: Sequence[int], atoms: Iterable[tuple[str, tuple]]) -> "AtomicType":
        part = tuple(partition)
        canon = set()
        for rel, args in atoms:
            canon.add((rel, tuple(part[a] if isinstance(a, int) else a for a in args)))
        return cls(len(part), part, tuple(sorted(canon, key=_atom_key)))

    def holds(self, rel: str, args: Sequence) -> bool:
        key = (rel, tuple(self.partition[a] if isinstance(a, int) else a for a in args))
        return key in self._atom_set()

    def _atom_set(self) -> frozenset:
        cached = self.__dict__.get("_atomset")
        if cached is None:
            cached = frozenset(self.atoms)
            object.__setattr__(self, "_atomset", cached)
        return cached

    def equal(self, i: int, j: int) -> bool:
        return self.partition[i] == self.partition[j]

    def restrict(self, positions: Sequence[int]) -> "AtomicType":
        """Type of the sub-tuple picking ``positions`` (in that order)."""
        positions = list(positions)
        part = []
        for k, p in enumerate(positions):
            rep = next(m for m in range(k + 1) if self.partition[positions[m]] == self.partition[p])
            part.append(rep)
        # map representative position of self -> first index in restriction
        back = {}
        for k, p in enumerate(positions):
            back.setdefault(self.partition[p], k)
        atoms = []
        for rel, args in self.atoms:
            if all((not isinstance(x, int)) or x in back for x in args):
                atoms.append((rel, tuple(back[x] if isinstance(x, int) else x for x in args)))
        return AtomicType.make(part, atoms)

    def distinct_positions(self) -> list[int]:
        return [i for i in range(self.arity) if self.partition[i] == i]

    def literals(self, signature: Signature) -> list[str]:
        """Complete literal list in canonical order (atoms by relation then argument vector)."""
        out = []
        for i, j in itertools.combinations(range(self.arity), 2):
            out.append(f"x{i + 1}{'=' if self.equal(i, j) else '!='}x{j + 1}")
        true = self._atom_set()
        for rel in signature.names:
            k = signature.arity(rel)
            for args in itertools.product(range(self.arity), repeat=k):
                if any(self.partition[a] != a for a in args):
                    continue
                mark = "" if (rel, args) in true else "!"
                out.append(f"{mark}{rel}({','.join(f'x{a + 1}' for a in args)})")
        return out

    def serialize(self) -> str:
        eq = "".join(str(p) for p in self.partition)
        atoms = ";".join(f"{r}({','.join(str(a) for a in args)})" for r, args in self.atoms)
        return f"{self.arity}|{eq}|{atoms}"

    def digest(self) -> str:
        return hashlib.sha1(self.serialize().encode()).hexdigest()[:10]


def _atom_key(atom):
    rel, args = atom
    return (rel, tuple((0, a) if isinstance(a, int) else (1, str(a)) for a in args))


def atomic_type_of(a: Structure, tup: Sequence[int]) -> AtomicType:
    tup = tuple(tup)
    for x in tup:
        if not (0 <= x < len(a.names)):
            raise ValueError(f"element {x} outside universe")
    partition = [tup.index(x) for x in tup]
    pos = {}
    for i, x in enumerate(tup):
        pos.setdefault(x, i)
    const_of = {v: c for c, v in sorted(a.constants.items())}
    atoms = []
    for rel, args in a.facts:
        if all(x in pos for x in args):
            atoms.append((rel, tuple(pos[x] for x in args)))
        elif a.constants and all(x in pos or x in const_of for x in args):
            atoms.append((rel, tuple(pos[x] if x in pos else ("c", const_of[x]) for x in args)))
    return AtomicType.make(partition, atoms)


def pad(tup: Sequence, width: int) -> tuple:
    """Pad a nonempty tuple to ``width`` by repeating its last component."""
    tup = tuple(tup)
    if not tup:
        raise ValueError("cannot pad the empty tuple")
    return tup + (tup[-1],) * (width - len(tup))
