"""Check that canonical forms coincide exactly on guarded-bisimilar pairs of random structures.

    python3 scripts/canon_check.py --pairs 300 --seed 1
"""

import argparse
import random

import _paths  # noqa: F401
from guardedkit.core import Signature, format_structure
from guardedkit.samples import random_structure
from guardedkit.solver import canonise
from oracles import disjoint_union, guarded_bisimilar, shuffled


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    sig = Signature({"P": 1, "E": 2})
    bisimilar = mismatches = 0
    for k in range(args.pairs):
        a = random_structure(rng, sig, rng.randint(1, 3), 0.3)
        b = [shuffled(a, rng), disjoint_union(a, shuffled(a, rng)),
             random_structure(rng, sig, rng.randint(1, 3), 0.3)][k % 3]
        same = format_structure(canonise(a)) == format_structure(canonise(b))
        truth = guarded_bisimilar(a, b)
        bisimilar += truth
        if same != truth:
            mismatches += 1
            print("mismatch:\n" + format_structure(a) + "\n--\n" + format_structure(b))
    print(f"{args.pairs} pairs, {bisimilar} bisimilar by the oracle, {mismatches} mismatches")


if __name__ == "__main__":
    main()
