"""Compare gf_sat with exhaustive finite-model search on random guarded sentences.

    python3 scripts/sat_vs_search.py --count 200 --size 3 --seed 0
"""

import argparse
import random
import time

import _paths  # noqa: F401
from guardedkit.core import Signature
from guardedkit.logic import model_check, print_formula
from guardedkit.samples import random_gf_sentence
from guardedkit.solver import gf_sat, small_model
from oracles import find_model


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--size", type=int, default=3, help="largest domain tried by the search")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    sig = Signature({"P": 1, "E": 2})
    sat = conclusive = disagree = bad_models = 0
    start = time.time()
    for _ in range(args.count):
        f = random_gf_sentence(rng, sig, rng.randint(1, 3), rng.randint(1, 3))
        r = gf_sat(f)
        found = find_model(f, sig, args.size)
        sat += r.sat
        if found is not None:
            conclusive += 1
            if not r.sat:
                disagree += 1
                print("disagreement:", print_formula(f))
        if r.sat and not model_check(small_model(r), f):
            bad_models += 1
            print("small model fails:", print_formula(f))
    print(f"{args.count} sentences, {sat} SAT, {conclusive} with a model of size <= {args.size}, "
          f"{disagree} disagreements, {bad_models} bad small models, {time.time() - start:.1f}s")


if __name__ == "__main__":
    main()
