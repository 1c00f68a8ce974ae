"""Test whether truncating a level-N cover down to level N-1 is a guarded bisimulation.

Prints the first failed back-move with the terms involved.

    python3 scripts/projection_probe.py --structure c3 --J 5
"""

import argparse
import re

from guardedkit.bisim import invariant
from guardedkit.cover import CoverParams, build_cover, check_cover, format_term, project
from guardedkit.samples import structure_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--structure", default="c3", choices=sorted(structure_corpus()))
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--J", type=int, default=5)
    args = ap.parse_args()
    inv = invariant(structure_corpus()[args.structure])
    big = build_cover(inv, CoverParams(args.N, args.m, J=args.J, edge_mode="reduced", max_elements=10 ** 6))
    small = build_cover(inv, CoverParams(args.N - 1, args.m, J=args.J, edge_mode="reduced", max_elements=10 ** 6))
    _, pi = project(big, args.N - 1, small)
    rep = check_cover(pi, big.structure, small.structure)
    print(f"level {args.N}: {len(big)} elements; level {args.N - 1}: {len(small)} elements")
    if rep:
        print("the truncation map is a cover")
        return
    print(f"not a cover: {len(rep.problems)} problems; first: {rep.problems[0]}")
    nums = list(map(int, re.findall(r"\d+", rep.problems[0])))
    if len(nums) == 4:
        a, b, x, y = nums
        print("  big tuple:  ", format_term(big.terms[a]), "|", format_term(big.terms[b]))
        print("  image:      ", format_term(small.terms[pi[a]]), "|", format_term(small.terms[pi[b]]))
        print("  small move: ", format_term(small.terms[x]), "|", format_term(small.terms[y]))


if __name__ == "__main__":
    main()
