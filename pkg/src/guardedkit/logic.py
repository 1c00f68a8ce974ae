"""Guarded and clique-guarded formulas: syntax, normal forms, translations, semantics."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .core import ParseError, Signature, Structure
from .hyperanalysis import match_atoms


class UnguardedError(ParseError):
    pass


# AST -------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple

    def variables(self) -> tuple:
        return tuple(dict.fromkeys(self.args))


@dataclass(frozen=True)
class Eq:
    left: str
    right: str

    @property
    def args(self) -> tuple:
        return (self.left, self.right)

    def variables(self) -> tuple:
        return tuple(dict.fromkeys(self.args))


@dataclass(frozen=True)
class Truth:
    value: bool


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    variables: tuple
    guard: tuple  # of Atom / Eq; more than one only for clique guards
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    variables: tuple
    guard: tuple
    body: "Formula"


Formula = Union[Atom, Eq, Truth, Not, And, Or, Implies, Iff, Exists, Forall]
TRUE = Truth(True)
FALSE = Truth(False)
Quantifier = (Exists, Forall)
Binary = (And, Or, Implies, Iff)


def conjunction(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjunction(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def guard_variables(guard: tuple) -> tuple:
    return tuple(dict.fromkeys(v for g in guard for v in g.args))


def free_variables(f: Formula) -> tuple:
    """Free variables in order of first occurrence."""
    if isinstance(f, (Atom, Eq)):
        return f.variables()
    if isinstance(f, Truth):
        return ()
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, Binary):
        return tuple(dict.fromkeys(free_variables(f.left) + free_variables(f.right)))
    inner = guard_variables(f.guard) + free_variables(f.body)
    return tuple(v for v in dict.fromkeys(inner) if v not in f.variables)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, Binary):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, Quantifier):
        for g in f.guard:
            yield g
        yield from subformulas(f.body)


def width(f: Formula) -> int:
    return max((len(free_variables(s)) for s in subformulas(f)), default=0)


def scope_width(f: Formula) -> int:
    """Largest number of variables simultaneously in scope, counting clique guards as one unit."""
    best = width(f)
    for s in subformulas(f):
        if isinstance(s, Quantifier):
            best = max(best, len(set(guard_variables(s.guard)) | set(free_variables(s.body))))
    return best


def size(f: Formula) -> int:
    """Symbol count: connectives, quantifiers, atoms and their argument slots."""
    n = 0
    for s in subformulas(f):
        if isinstance(s, (Atom, Eq)):
            n += 1 + len(s.args)
        elif isinstance(s, Quantifier):
            n += 1 + len(s.variables)
        else:
            n += 1
    return n


def relations(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for s in subformulas(f):
        if isinstance(s, Atom):
            if out.setdefault(s.rel, len(s.args)) != len(s.args):
                raise ValueError(f"relation {s.rel} used with two arities")
    return out


def signature_of(f: Formula) -> Signature:
    return Signature(relations(f))


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(s, Quantifier) for s in subformulas(f))


def is_clique_guarded_formula(f: Formula) -> bool:
    return any(isinstance(s, Quantifier) and len(s.guard) > 1 for s in subformulas(f))


# printing --------------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _print_atomic(g) -> str:
    if isinstance(g, Eq):
        return f"{g.left} = {g.right}"
    return f"{g.rel}({','.join(g.args)})"


def print_formula(f: Formula) -> str:
    return _pr(f, 0)


def _pr(f: Formula, ctx: int) -> str:
    if isinstance(f, (Atom, Eq)):
        s = _print_atomic(f)
        return f"({s})" if isinstance(f, Eq) and ctx >= 5 else s
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return "!" + _pr(f.body, 5)
    if isinstance(f, Quantifier):
        kw = "exists" if isinstance(f, Exists) else "forall"
        guard = " & ".join(_print_atomic(g) for g in f.guard)
        s = f"{kw} {','.join(f.variables)} . {guard} : {_pr(f.body, 0)}"
        return f"({s})" if ctx > 0 else s
    p = _PREC[type(f)]
    if isinstance(f, Implies):
        lhs, rhs = _pr(f.left, p + 1), _pr(f.right, p)
    else:
        lhs, rhs = _pr(f.left, p), _pr(f.right, p + 1)
    s = f"{lhs} {_OPS[type(f)]} {rhs}"
    return f"({s})" if ctx > p else s


# parsing ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<->|->|\|\||:=|[()!&|,.:;=])|([A-Za-z0-9_]+))")


@dataclass
class Token:
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            m = _TOKEN.match(line, pos)
            if not m:
                col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
                raise ParseError(f"unexpected character {line[col - 1]!r}", lineno, col)
            tok = m.group(1) or m.group(2)
            out.append(Token(tok, lineno, m.start(m.lastindex) + 1))
            pos = m.end()
    return out


_KEYWORDS = {"exists", "forall", "true", "false"}


class _Parser:
    def __init__(self, tokens: list[Token], cgf: bool, signature: Signature | None):
        self.toks = tokens
        self.i = 0
        self.cgf = cgf
        self.signature = signature
        self.arities: dict[str, int] = dict(signature.relations) if signature else {}

    def peek(self, k=0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek() or (self.toks[-1] if self.toks else None)
        if tok is None:
            raise cls(msg)
        raise cls(msg, tok.line, tok.col)

    def take(self, text=None) -> Token:
        tok = self.peek()
        if tok is None:
            self.error(f"unexpected end of input (expected {text or 'token'})")
        if text is not None and tok.text != text:
            self.error(f"expected {text!r}, found {tok.text!r}")
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z0-9_]+", tok.text) or tok.text in _KEYWORDS:
            self.i -= 1
            self.error(f"expected identifier, found {tok.text!r}")
        return tok.text

    def formula(self) -> Formula:
        left = self.implication()
        while self.peek() and self.peek().text == "<->":
            self.take()
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() and self.peek().text == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction_()
        while self.peek() and self.peek().text == "|":
            self.take()
            left = Or(left, self.conjunction_())
        return left

    def conjunction_(self) -> Formula:
        left = self.unary()
        while self.peek() and self.peek().text == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok and tok.text == "!":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok.text == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok.text in ("exists", "forall"):
            return self.quantifier()
        if tok.text == "true":
            self.take()
            return TRUE
        if tok.text == "false":
            self.take()
            return FALSE
        return self.atomic()

    def atomic(self):
        start = self.peek()
        name = self.ident()
        nxt = self.peek()
        if nxt and nxt.text == "=":
            self.take()
            return Eq(name, self.ident())
        self.take("(")
        args = []
        if self.peek() and self.peek().text != ")":
            args.append(self.ident())
            while self.peek() and self.peek().text == ",":
                self.take()
                args.append(self.ident())
        self.take(")")
        if self.signature is not None and name not in self.arities:
            self.error(f"unknown relation {name}", start)
        if self.arities.setdefault(name, len(args)) != len(args):
            self.error(f"relation {name} used with arity {len(args)}, expected {self.arities[name]}", start)
        return Atom(name, tuple(args))

    def quantifier(self) -> Formula:
        kw = self.take()
        variables = [self.ident()]
        while self.peek() and self.peek().text == ",":
            self.take()
            variables.append(self.ident())
        self.take(".")
        guard_tok = self.peek()
        if guard_tok is not None and (guard_tok.text in _KEYWORDS or guard_tok.text in "(!"):
            self.error("unguarded quantifier: the guard must be an atom or an equality", kw, UnguardedError)
        guard = [self.atomic()]
        while self.peek() and self.peek().text == "&":
            self.take()
            guard.append(self.atomic())
        if len(guard) > 1 and not self.cgf:
            self.error("conjunctive guard requires clique-guarded mode", guard_tok, UnguardedError)
        self.take(":")
        body = self.formula()
        cls = Exists if kw.text == "exists" else Forall
        node = cls(tuple(variables), tuple(guard), body)
        problem = guard_problem(node)
        if problem:
            self.error(problem, kw, UnguardedError)
        return node


def guard_problem(q: Exists | Forall) -> str | None:
    gv = set(guard_variables(q.guard))
    if len(set(q.variables)) != len(q.variables):
        return "repeated bound variable"
    missing = [v for v in q.variables if v not in gv]
    if missing:
        return f"unguarded quantifier: bound variable {missing[0]} not in guard"
    loose = [v for v in free_variables(q.body) if v not in gv]
    if loose:
        return f"unguarded quantifier: variable {loose[0]} of the body not in guard"
    if len(q.guard) > 1:
        for u, v in itertools.combinations(sorted(gv), 2):
            if not any(u in g.args and v in g.args for g in q.guard):
                return f"clique guard does not cover the pair {u},{v}"
    return None


def parse_formula(text: str, cgf: bool = False, signature: Signature | None = None) -> Formula:
    toks = tokenize(text)
    if not toks:
        raise ParseError("empty formula")
    p = _Parser(toks, cgf, signature)
    f = p.formula()
    if p.peek() is not None:
        p.error(f"unexpected {p.peek().text!r}")
    return f


def parse_sentence(text: str, cgf: bool = False, signature: Signature | None = None) -> Formula:
    f = parse_formula(text, cgf, signature)
    fv = free_variables(f)
    if fv:
        raise ParseError(f"not a sentence: free variables {', '.join(fv)}")
    return f


def parse_formula_file(text: str, cgf: bool = False) -> list[Formula]:
    """Sentences separated by ';' (comments with '#')."""
    toks = tokenize(text)
    chunks: list[list[Token]] = [[]]
    for t in toks:
        if t.text == ";":
            chunks.append([])
        else:
            chunks[-1].append(t)
    out = []
    arities: dict[str, int] = {}
    for chunk in chunks:
        if not chunk:
            continue
        p = _Parser(chunk, cgf, None)
        p.arities = arities
        f = p.formula()
        if p.peek() is not None:
            p.error(f"unexpected {p.peek().text!r}")
        fv = free_variables(f)
        if fv:
            raise ParseError(f"not a sentence: free variables {', '.join(fv)}", chunk[0].line, chunk[0].col)
        out.append(f)
    return out


# negation normal form --------------------------------------------------------

def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form using only And, Or, Not-on-atoms and quantifiers."""
    if isinstance(f, (Atom, Eq)):
        return Not(f) if negate else f
    if isinstance(f, Truth):
        return Truth(f.value != negate)
    if isinstance(f, Not):
        return nnf(f.body, not negate)
    if isinstance(f, And):
        parts = (nnf(f.left, negate), nnf(f.right, negate))
        return Or(*parts) if negate else And(*parts)
    if isinstance(f, Or):
        parts = (nnf(f.left, negate), nnf(f.right, negate))
        return And(*parts) if negate else Or(*parts)
    if isinstance(f, Implies):
        return nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, Iff):
        both = And(Or(Not(f.left), f.right), Or(f.left, Not(f.right)))
        return nnf(both, negate)
    if isinstance(f, Exists):
        body = nnf(f.body, negate)
        return Forall(f.variables, f.guard, body) if negate else Exists(f.variables, f.guard, body)
    body = nnf(f.body, negate)
    return Exists(f.variables, f.guard, body) if negate else Forall(f.variables, f.guard, body)


def simplify(f: Formula) -> Formula:
    """Constant folding for true/false."""
    if isinstance(f, Not):
        b = simplify(f.body)
        return Truth(not b.value) if isinstance(b, Truth) else Not(b)
    if isinstance(f, (And, Or)):
        l, r = simplify(f.left), simplify(f.right)
        unit = isinstance(f, And)
        for a, b in ((l, r), (r, l)):
            if isinstance(a, Truth):
                return b if a.value == unit else a
        return type(f)(l, r)
    if isinstance(f, Implies):
        return simplify(Or(Not(f.left), f.right)) if any(isinstance(x, Truth) for x in (f.left, f.right)) else \
            Implies(simplify(f.left), simplify(f.right))
    if isinstance(f, Iff):
        return Iff(simplify(f.left), simplify(f.right))
    if isinstance(f, Quantifier):
        return type(f)(f.variables, f.guard, simplify(f.body))
    return f


# Scott normal form -----------------------------------------------------------

@dataclass(frozen=True)
class UniversalConjunct:
    """forall vars . guard : body with a quantifier-free body (no vars and no guard at top level)."""
    variables: tuple
    guard: tuple
    body: Formula

    def formula(self) -> Formula:
        if not self.variables:
            return self.body
        return Forall(self.variables, self.guard, self.body)


@dataclass(frozen=True)
class ExistConjunct:
    """forall xs . trigger -> exists ys . guard : body with a quantifier-free body."""
    variables: tuple
    trigger: Atom
    witnesses: tuple
    guard: tuple
    body: Formula

    def formula(self) -> Formula:
        inner = Exists(self.witnesses, self.guard, self.body)
        if not self.variables:
            return Implies(self.trigger, inner)
        return Forall(self.variables, (self.trigger,), inner)


@dataclass
class ScottNormalForm:
    universals: list[UniversalConjunct]
    exists: list[ExistConjunct]
    fresh: dict[str, int]
    signature: Signature

    def formula(self) -> Formula:
        return conjunction([u.formula() for u in self.universals] + [e.formula() for e in self.exists])

    @property
    def width(self) -> int:
        return width(self.formula())


def _fresh_name(base: str, taken: set[str]) -> str:
    k = 0
    while f"{base}{k}" in taken:
        k += 1
    name = f"{base}{k}"
    taken.add(name)
    return name


def scott_normal_form(f: Formula) -> ScottNormalForm:
    fv = free_variables(f)
    if fv:
        raise ValueError(f"not a sentence: free variables {fv}")
    sig = signature_of(f)
    taken = set(sig.names)
    universals: list[UniversalConjunct] = []
    exists: list[ExistConjunct] = []
    fresh: dict[str, int] = {}
    names: dict[Formula, Atom] = {}

    def name_for(q: Formula) -> Atom:
        if q in names:
            return names[q]
        xs = free_variables(q)
        atom = Atom(_fresh_name("S", taken), xs)
        fresh[atom.rel] = len(xs)
        names[q] = atom
        body = reduce(q.body)
        if isinstance(q, Exists):
            exists.append(ExistConjunct(xs, atom, q.variables, q.guard, body))
        else:
            allvars = guard_variables(q.guard)
            universals.append(UniversalConjunct(allvars, q.guard, simplify(Or(Not(atom), body))))
        return atom

    def reduce(g: Formula) -> Formula:
        if isinstance(g, Quantifier):
            return name_for(g)
        if isinstance(g, Not):
            return Not(reduce(g.body))
        if isinstance(g, (And, Or)):
            return type(g)(reduce(g.left), reduce(g.right))
        return g

    for part in conjuncts(simplify(nnf(f))):
        # parts already in the normal-form shape are kept without naming
        if isinstance(part, Forall) and is_quantifier_free(part.body):
            universals.append(UniversalConjunct(guard_variables(part.guard), part.guard, part.body))
            continue
        if isinstance(part, Forall) and len(part.guard) == 1 and isinstance(part.guard[0], Atom):
            inner = conjuncts(part.body)
            if all(isinstance(c, Exists) and is_quantifier_free(c.body) for c in inner):
                xs = guard_variables(part.guard)
                for c in inner:
                    exists.append(ExistConjunct(xs, part.guard[0], c.variables, c.guard, c.body))
                continue
        if isinstance(part, Truth) and part.value:
            continue
        if isinstance(part, Forall):
            universals.append(UniversalConjunct(guard_variables(part.guard), part.guard, reduce(part.body)))
            continue
        universals.append(UniversalConjunct((), (), reduce(part)))
    full = sig.union(Signature(fresh))
    return ScottNormalForm(universals, exists, fresh, full)


# clique guards to guards -----------------------------------------------------

def cgf_to_gf(f: Formula, signature: Signature | None = None, guard_name: str = "G") -> Formula:
    """Replace clique guards by a fresh relation and add the guardedness axioms."""
    if free_variables(f):
        raise ValueError("not a sentence")
    sig = signature or signature_of(f)
    taken = set(sig.names) | set(relations(f))
    name = guard_name
    while name in taken:
        name += "_"
    w = max(sig.width, scope_width(f), 1)

    def padded(vs: tuple) -> tuple:
        vs = tuple(vs)
        return vs + (vs[-1],) * (w - len(vs))

    def tr(g: Formula) -> Formula:
        if isinstance(g, Not):
            return Not(tr(g.body))
        if isinstance(g, Binary):
            return type(g)(tr(g.left), tr(g.right))
        if isinstance(g, Quantifier):
            body = tr(g.body)
            if len(g.guard) <= 1:
                return type(g)(g.variables, g.guard, body)
            xs = [v for v in guard_variables(g.guard) if v not in g.variables]
            order = tuple(xs) + tuple(g.variables)
            alpha = conjunction(g.guard)
            gatom = Atom(name, padded(order))
            if isinstance(g, Exists):
                return Exists(g.variables, (gatom,), And(alpha, body))
            return Forall(g.variables, (gatom,), Implies(alpha, body))
        return g

    translated = tr(f)
    axioms = []
    rels = dict(sig.relations)
    rels.update(relations(f))
    rels[name] = w
    for rel, k in sorted(rels.items()):
        if k == 0:
            continue
        zs = tuple(f"z{i + 1}" for i in range(k))
        for us in itertools.product(zs, repeat=w):
            axioms.append(Forall(zs, (Atom(rel, zs),), Atom(name, us)))
    return conjunction([translated] + axioms)


def gf_size_constants(f: Formula, translated: Formula, signature: Signature) -> tuple[int, int]:
    """(size of the rewritten sentence, size of the axiom block)."""
    parts = conjuncts(translated)
    return size(parts[0]), sum(size(p) for p in parts[1:])


# tuple generating dependencies ----------------------------------------------

@dataclass(frozen=True)
class TGD:
    body: tuple  # of Atom
    head: tuple  # of Atom
    existentials: tuple = ()

    @property
    def universal_variables(self) -> tuple:
        return tuple(dict.fromkeys(v for a in self.body for v in a.args))

    @property
    def frontier(self) -> tuple:
        head_vars = {v for a in self.head for v in a.args}
        return tuple(v for v in self.universal_variables if v in head_vars)

    def guard(self) -> Atom | None:
        uv = set(self.universal_variables)
        for a in self.body:
            if set(a.args) >= uv:
                return a
        return None

    @property
    def is_guarded(self) -> bool:
        return self.guard() is not None

    def __str__(self):
        body = ", ".join(_print_atomic(a) for a in self.body)
        head = ", ".join(_print_atomic(a) for a in self.head)
        ex = f"exists {','.join(self.existentials)} . " if self.existentials else ""
        return f"{body} -> {ex}{head}"


def parse_tgds(text: str) -> list[TGD]:
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError("rule without '->'", lineno)
        lhs, rhs = line.split("->", 1)
        rhs = rhs.strip()
        existentials: tuple = ()
        m = re.match(r"exists\s+([A-Za-z0-9_,\s]+?)\s*\.\s*(.*)$", rhs)
        if m:
            existentials = tuple(v.strip() for v in m.group(1).split(","))
            rhs = m.group(2)
        body = tuple(_parse_atom_list(lhs, lineno))
        head = tuple(_parse_atom_list(rhs, lineno))
        rule = TGD(body, head, existentials)
        head_vars = {v for a in head for v in a.args}
        stray = head_vars - set(rule.universal_variables) - set(existentials)
        if stray:
            raise ParseError(f"head variables {sorted(stray)} neither in body nor existential", lineno)
        rules.append(rule)
    return rules


def _parse_atom_list(text: str, lineno: int) -> list[Atom]:
    out = []
    for m in re.finditer(r"([A-Za-z0-9_]+)\s*\(([^)]*)\)", text):
        args = tuple(a.strip() for a in m.group(2).split(",") if a.strip())
        out.append(Atom(m.group(1), args))
    leftover = re.sub(r"([A-Za-z0-9_]+)\s*\(([^)]*)\)", "", text).replace(",", "").replace("&", "").strip()
    if leftover or not out:
        raise ParseError(f"cannot parse atoms in {text.strip()!r}", lineno)
    return out


class UnguardedRuleError(ValueError):
    pass


def gtgd_to_gf(rules: list[TGD]) -> list[Formula]:
    """Guarded sentences equivalent to the rules (up to auxiliary relations)."""
    taken = {a.rel for r in rules for a in r.body + r.head}
    need_aux = [r for r in rules if r.existentials or len(r.head) > 1]
    out: list[Formula] = []
    for k, rule in enumerate(rules):
        g = rule.guard()
        if g is None:
            raise UnguardedRuleError(f"rule {k + 1} is not guarded: {rule}")
        uv = rule.universal_variables
        rest = list(rule.body)
        rest.remove(g)
        if rule in need_aux:
            base = "aux" if len(need_aux) == 1 else f"aux{k + 1}"
            name = base
            while name in taken:
                name += "_"
            taken.add(name)
            aux = Atom(name, rule.frontier + rule.existentials)
            head: Formula = Exists(rule.existentials, (aux,), TRUE) if rule.existentials else aux
            out.append(Forall(uv, (g,), Implies(conjunction(rest), head) if rest else head))
            avars = aux.args
            for h in rule.head:
                out.append(Forall(avars, (aux,), h))
        else:
            h = rule.head[0]
            out.append(Forall(uv, (g,), Implies(conjunction(rest), h) if rest else h))
    return out


# semantics -------------------------------------------------------------------

class SignatureMismatch(ValueError):
    pass


def model_check(a: Structure, f: Formula, assignment: dict | None = None) -> bool:
    for rel, k in relations(f).items():
        if rel not in a.signature or a.signature.arity(rel) != k:
            raise SignatureMismatch(f"relation {rel}/{k} not in the structure's signature")
    return _eval(a, f, dict(assignment or {}))


def _eval(a: Structure, f: Formula, env: dict) -> bool:
    if isinstance(f, Atom):
        return a.holds(f.rel, tuple(env[v] for v in f.args))
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Not):
        return not _eval(a, f.body, env)
    if isinstance(f, And):
        return _eval(a, f.left, env) and _eval(a, f.right, env)
    if isinstance(f, Or):
        return _eval(a, f.left, env) or _eval(a, f.right, env)
    if isinstance(f, Implies):
        return (not _eval(a, f.left, env)) or _eval(a, f.right, env)
    if isinstance(f, Iff):
        return _eval(a, f.left, env) == _eval(a, f.right, env)
    want = isinstance(f, Exists)
    outer = {v: env[v] for v in env if v not in f.variables}
    for binding in guard_assignments(a, f.guard, f.variables, outer):
        if _eval(a, f.body, binding) == want:
            return want
    return not want


def guard_assignments(a: Structure, guard: tuple, variables: tuple, env: dict) -> Iterator[dict]:
    atoms = [(g.rel, g.args) for g in guard if isinstance(g, Atom)]
    eqs = [g for g in guard if isinstance(g, Eq)]
    seen = set()
    if atoms:
        candidates = match_atoms(atoms, a, env)
    else:
        candidates = iter([dict(env)])
    for cand in candidates:
        for binding in _solve_eqs(a, eqs, cand):
            key = tuple(binding.get(v) for v in variables)
            if key in seen:
                continue
            seen.add(key)
            yield binding


def _solve_eqs(a: Structure, eqs: list[Eq], env: dict) -> Iterator[dict]:
    if not eqs:
        yield env
        return
    e, rest = eqs[0], eqs[1:]
    l, r = env.get(e.left), env.get(e.right)
    if l is not None and r is not None:
        if l == r:
            yield from _solve_eqs(a, rest, env)
    elif l is not None:
        yield from _solve_eqs(a, rest, {**env, e.right: l})
    elif r is not None:
        yield from _solve_eqs(a, rest, {**env, e.left: r})
    else:
        for x in a.universe:
            yield from _solve_eqs(a, rest, {**env, e.left: x, e.right: x})
