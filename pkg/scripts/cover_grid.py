"""Build covers for every width-2 corpus invariant over a grid of (N, m) and run the structural checks.

    python3 scripts/cover_grid.py --J 8 --cap 5000
"""

import argparse
import time

from guardedkit.bisim import invariant
from guardedkit.cover import CoverInvariant, CoverParams, CoverTooLarge, build_cover, run_checks
from guardedkit.samples import structure_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--J", type=int, default=8)
    ap.add_argument("--cap", type=int, default=5000)
    ap.add_argument("--edge-mode", default="reduced", choices=["reduced", "all"])
    ap.add_argument("--grid", default="2,2 2,4 3,3", help="space-separated N,m pairs")
    args = ap.parse_args()
    grid = [tuple(map(int, p.split(","))) for p in args.grid.split()]
    print(f"{'structure':<12} {'N':>2} {'m':>2} {'elements':>9} {'checks':<40} seconds")
    for name, a in structure_corpus().items():
        inv = invariant(a)
        if CoverInvariant.of(inv).width < 2:
            continue
        for n, m in grid:
            start = time.time()
            try:
                c = build_cover(inv, CoverParams(n, m, J=args.J, edge_mode=args.edge_mode, max_elements=args.cap))
            except CoverTooLarge:
                print(f"{name:<12} {n:>2} {m:>2} {'>' + str(args.cap):>9} {'-':<40} {time.time() - start:.1f}")
                continue
            suite = run_checks(c)
            bad = [k for k, v in suite.results.items() if not v]
            verdict = "all pass" if suite.ok else "fail: " + ",".join(bad)
            print(f"{name:<12} {n:>2} {m:>2} {len(c):>9} {verdict:<40} {time.time() - start:.1f}")


if __name__ == "__main__":
    main()
