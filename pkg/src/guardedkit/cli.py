"""Command-line front end: ``guardedkit <command> ...``.

Exit codes: 0 on a completed decision (whatever the verdict), 2 for usage
and input errors, 3 when a resource ceiling is hit, 4 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from pathlib import Path

from .bisim import format_invariant, invariant, ordered_invariant, parse_invariant
from .core import ParseError, Signature, format_structure, parse_structure, structure_hypergraph
from .cover import (
    CoverError, CoverInvariant, CoverParams, CoverTooLarge, EDGE_MODES, SuperscriptBudgetExceeded, build_cover,
    realise_width_one, run_checks,
)
from .hyperanalysis import (
    OracleBudgetExceeded, chordless_cycle, format_hypergraph, graham_reduce, is_acyclic,
    parse_hypergraph, uncovered_clique,
)
from .logic import (
    UnguardedError, UnguardedRuleError, conjunction, gtgd_to_gf, model_check, parse_formula_file, parse_tgds,
    print_formula,
)
from .queries import TreeifyBudgetExceeded, format_query, parse_query, treeify
from .solver import (
    TypeBudgetExceeded, answer_query, answer_query_database, canonise_report, chase, gf_sat, small_model,
)

USAGE, RESOURCE, INTERNAL = 2, 3, 4


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _load_formula(path: str, cgf: bool = False):
    text = _read(path)
    cgf = cgf or path.endswith(".cgf")
    try:
        parts = parse_formula_file(text, cgf=cgf)
    except UnguardedError:
        if cgf:
            raise
        parts = parse_formula_file(text, cgf=True)
    if not parts:
        raise UsageError(f"{path}: no sentence found")
    return conjunction(parts)


def _load_signature(path: str) -> Signature:
    return parse_structure(_read(path)).signature


def _emit(args, lines: list[str], data: dict) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True, default=str))
    else:
        for line in lines:
            print(line)


def _stats_lines(stats: dict) -> list[str]:
    return [f"  {k}: {v}" for k, v in stats.items()]


# commands --------------------------------------------------------------------

def cmd_parse(args) -> None:
    text = _read(args.file)
    kind = args.kind or _guess_kind(args.file, text)
    if kind == "structure":
        out = format_structure(parse_structure(text))
    elif kind == "formula":
        out = print_formula(_load_formula(args.file, args.cgf)) + "\n"
    elif kind == "query":
        out = format_query(parse_query(text))
    elif kind == "rules":
        out = "".join(f"{r}\n" for r in parse_tgds(text))
    elif kind == "invariant":
        out = format_invariant(parse_invariant(text))
    else:
        out = format_hypergraph(parse_hypergraph(text))
    _emit(args, [out.rstrip("\n")], {"kind": kind, "text": out})


def _guess_kind(path: str, text: str) -> str:
    suffix = Path(path).suffix
    by_suffix = {".struct": "structure", ".db": "structure", ".sig": "structure", ".gf": "formula",
                 ".cgf": "formula", ".ucq": "query", ".q": "query", ".tgd": "rules", ".rules": "rules",
                 ".inv": "invariant", ".hg": "hypergraph"}
    if suffix in by_suffix:
        return by_suffix[suffix]
    if "->" in text and "exists" not in text.split("->", 1)[0]:
        return "rules"
    if ":=" in text:
        return "query"
    if re.search(r"^(width \d+|class \d+:)", text, re.M):
        return "invariant"
    if "(" in text:
        return "structure"
    return "hypergraph"


def cmd_modelcheck(args) -> None:
    a = parse_structure(_read(args.structure))
    f = _load_formula(args.formula, args.cgf)
    value = model_check(a, f)
    _emit(args, ["true" if value else "false"], {"holds": value})


def cmd_sat(args) -> None:
    f = _load_formula(args.formula, args.cgf)
    r = gf_sat(f, args.max_types)
    lines = [r.verdict] + _stats_lines(r.stats)
    data = {"verdict": r.verdict, "stats": r.stats}
    if r.sat and args.witness:
        _write(args.witness, format_invariant(r.witness))
        data["witness"] = args.witness
    if r.sat and args.model:
        m = small_model(r)
        if not model_check(m, f):
            raise AssertionError("small model does not satisfy the sentence")
        _write(args.model, format_structure(m))
        data["model"] = args.model
        lines.append(f"  model size: {len(m)}")
    if not r.sat and args.trace:
        lines += [f"  eliminated {t}: missing {req}" for t, req in r.trace]
        data["trace"] = r.trace
    _emit(args, lines, data)


def cmd_answer(args) -> None:
    f = _load_formula(args.formula, args.cgf)
    q = parse_query(_read(args.query))
    res = answer_query(f, q, certify=args.certify_acyclic, max_types=args.max_types,
                       max_treeify=args.max_treeify, j_budget=args.j_budget)
    _report_answer(args, res)


def _report_answer(args, res) -> None:
    head = res.verdict + (" (vacuous)" if res.stats.get("vacuous") else "")
    data = {"verdict": res.verdict, "stats": res.stats}
    if res.counter_model is not None and args.counter_model:
        _write(args.counter_model, format_structure(res.counter_model))
        data["counter_model"] = args.counter_model
    _emit(args, [head] + _stats_lines(res.stats), data)


def cmd_chase_db(args) -> None:
    db = parse_structure(_read(args.db))
    rules = parse_tgds(_read(args.rules))
    gtgd_to_gf(rules)  # rejects unguarded rules up front
    if args.query:
        q = parse_query(_read(args.query))
        res = answer_query_database(db, rules, q, chase_rounds=args.rounds, max_types=args.max_types,
                                    max_treeify=args.max_treeify, j_budget=args.j_budget)
        _report_answer(args, res)
        return
    result, done = chase(db, rules, args.rounds)
    text = format_structure(result)
    status = "fixpoint" if done else f"stopped after {args.rounds} rounds"
    if args.json:
        _emit(args, [], {"fixpoint": done, "structure": text})
    else:
        print(f"# chase {status}")
        sys.stdout.write(text)


def cmd_treeify(args) -> None:
    q = parse_query(_read(args.query))
    sig = _load_signature(args.sig) if args.sig else None
    chi = treeify(q, sig, minimize=args.minimize, budget=args.max_treeify)
    text = format_query(chi, "T")
    if args.json:
        _emit(args, [], {"disjuncts": [str(d) for d in chi.disjuncts], "text": text})
    else:
        sys.stdout.write(text)


def cmd_cover(args) -> None:
    inv = parse_invariant(_read(args.invariant))
    if CoverInvariant.of(inv, args.edge_mode).width < 2:
        text = format_structure(realise_width_one(inv))
        _emit(args, ["# width-one invariant: direct realisation", text.rstrip("\n")],
              {"structure": text, "method": "width-one"})
        return
    params = CoverParams(args.N, args.m, args.j_budget, args.edge_mode, args.max_elements)
    c = build_cover(inv, params)
    suite = run_checks(c) if args.checks else None
    if args.provenance:
        _write(args.provenance, c.provenance())
    text = format_structure(c.structure)
    if args.json:
        data = {"structure": text, "size": len(c), "hyperedges": len(c.records)}
        if suite:
            data["checks"] = {k: bool(v) for k, v in suite.results.items()}
        _emit(args, [], data)
        return
    sys.stdout.write(text)
    if suite:
        sys.stdout.write("# " + suite.report().rstrip("\n").replace("\n", "\n# ") + "\n")


def cmd_invariant(args) -> None:
    a = parse_structure(_read(args.structure))
    inv = ordered_invariant(a) if args.ordered else invariant(a)
    text = format_invariant(inv)
    if args.json:
        _emit(args, [], {"classes": len(inv.labels), "edges": len(inv.edges), "text": text})
    else:
        sys.stdout.write(text)


def cmd_canon(args) -> None:
    a = parse_structure(_read(args.structure))
    res = canonise_report(a)
    text = format_structure(res.structure)
    if args.json:
        _emit(args, [], {"method": res.method, "structure": text})
    else:
        if res.method != "cover":
            print(f"# canonisation method: {res.method}")
        sys.stdout.write(text)


def cmd_analyze(args) -> None:
    text = _read(args.file)
    kind = args.kind or _guess_kind(args.file, text)
    if kind == "structure":
        a = parse_structure(text)
        h = structure_hypergraph(a)
        name = lambda v: a.names[v]
    elif kind == "hypergraph":
        h = parse_hypergraph(text)
        name = str
    else:
        raise UsageError(f"analyze expects a structure or hypergraph, got {kind}")

    def show(vs):
        return "{" + ",".join(name(v) for v in sorted(vs, key=h.vertex_order().get)) + "}"

    clique = uncovered_clique(h)
    cyc = chordless_cycle(h)
    acyclic = is_acyclic(h)
    lines = [f"vertices: {len(h.vertices)}", f"hyperedges: {len(h.edges)}", f"width: {h.width}"]
    lines.append("conformal: yes" if clique is None else f"conformal: no (witness clique {show(clique)})")
    lines.append("chordal: yes" if cyc is None else
                 f"chordal: no (chordless cycle {' - '.join(name(v) for v in cyc)})")
    lines.append(f"acyclic: {'yes' if acyclic else 'no'}")
    data = {"vertices": len(h.vertices), "hyperedges": len(h.edges), "width": h.width,
            "conformal": clique is None, "chordal": cyc is None, "acyclic": acyclic,
            "clique": sorted(name(v) for v in clique) if clique else None,
            "cycle": [name(v) for v in cyc] if cyc else None}
    if acyclic:
        _, td = graham_reduce(h)
        lines.append("join tree:")
        lines += ["  " + line for line in td.to_text(name).splitlines()]
        data["join_tree"] = td.to_text(name)
    if args.seed is not None:
        verdict, _ = graham_reduce(h, random.Random(args.seed))
        lines.append(f"graham (random order, seed {args.seed}): {'reduces' if verdict else 'stuck'}")
        data["graham_random"] = verdict
    _emit(args, lines, data)


# argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized cross-checks")
    common.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    common.add_argument("--cgf", action="store_true", help="read formulas as clique-guarded")

    limits = argparse.ArgumentParser(add_help=False)
    limits.add_argument("--max-types", type=int, default=200_000)
    limits.add_argument("--max-treeify", type=int, default=200_000)
    limits.add_argument("--j-budget", type=int, default=None)

    p = argparse.ArgumentParser(prog="guardedkit", description="Guarded logic toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and re-print a file")
    s.add_argument("file")
    s.add_argument("--kind", choices=["structure", "formula", "query", "rules", "invariant", "hypergraph"])
    s.set_defaults(run=cmd_parse)

    s = sub.add_parser("modelcheck", parents=[common], help="evaluate a sentence on a structure")
    s.add_argument("structure")
    s.add_argument("formula")
    s.set_defaults(run=cmd_modelcheck)

    s = sub.add_parser("sat", parents=[common, limits], help="decide satisfiability")
    s.add_argument("formula")
    s.add_argument("--witness", help="write the witness invariant here")
    s.add_argument("--model", help="write a finite model here")
    s.add_argument("--trace", action="store_true", help="print the elimination trace on UNSAT")
    s.set_defaults(run=cmd_sat)

    s = sub.add_parser("answer", parents=[common, limits], help="decide query entailment")
    s.add_argument("formula")
    s.add_argument("query")
    s.add_argument("--counter-model", help="write the finite counter-model here")
    s.add_argument("--certify-acyclic", action="store_true", help="build the counter-model at level 3h")
    s.set_defaults(run=cmd_answer)

    s = sub.add_parser("chase-db", parents=[common, limits], help="chase a database, optionally answer a query")
    s.add_argument("db")
    s.add_argument("rules")
    s.add_argument("--query")
    s.add_argument("--rounds", type=int, default=6)
    s.add_argument("--counter-model", help="write the finite counter-model here")
    s.set_defaults(run=cmd_chase_db)

    s = sub.add_parser("treeify", parents=[common], help="acyclic approximations of a query")
    s.add_argument("query")
    s.add_argument("--sig", help="structure file whose signature is used")
    s.add_argument("--minimize", action="store_true", help="drop disjuncts entailing another")
    s.add_argument("--max-treeify", type=int, default=200_000)
    s.set_defaults(run=cmd_treeify)

    s = sub.add_parser("cover", parents=[common], help="finite cover of an invariant")
    s.add_argument("invariant")
    s.add_argument("--N", type=int, default=2)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--j-budget", type=int, default=None)
    s.add_argument("--edge-mode", choices=EDGE_MODES, default="reduced")
    s.add_argument("--max-elements", type=int, default=5000)
    s.add_argument("--provenance", help="write term provenance here")
    s.add_argument("--checks", action="store_true", help="run the structural checks on the cover")
    s.set_defaults(run=cmd_cover)

    s = sub.add_parser("invariant", parents=[common], help="guarded bisimulation invariant")
    s.add_argument("structure")
    s.add_argument("--ordered", action="store_true")
    s.set_defaults(run=cmd_invariant)

    s = sub.add_parser("canon", parents=[common], help="canonical structure up to guarded bisimulation")
    s.add_argument("structure")
    s.set_defaults(run=cmd_canon)

    s = sub.add_parser("analyze", parents=[common], help="conformality, chordality and acyclicity")
    s.add_argument("file")
    s.add_argument("--kind", choices=["structure", "hypergraph"])
    s.set_defaults(run=cmd_analyze)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else 0
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return USAGE
    try:
        args.run(args)
    except (UsageError, ParseError, UnguardedRuleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (TypeBudgetExceeded, TreeifyBudgetExceeded) as exc:
        print(f"resource limit: {exc} (estimated size {exc.estimate:.3g})", file=sys.stderr)
        return RESOURCE
    except (CoverTooLarge, SuperscriptBudgetExceeded, OracleBudgetExceeded) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return RESOURCE
    except (AssertionError, CoverError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
