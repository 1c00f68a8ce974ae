"""Treeify directed E-cycles of several lengths and list the acyclic disjuncts.

    python3 scripts/treeify_cycles.py --lengths 3 4 5 --with-ternary
"""

import argparse
import time

from guardedkit.core import Signature
from guardedkit.queries import parse_query, treeify


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--lengths", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--with-ternary", action="store_true", help="add a ternary relation T to the signature")
    ap.add_argument("--minimize", action="store_true")
    args = ap.parse_args()
    sig = Signature({"E": 2, "T": 3} if args.with_ternary else {"E": 2})
    for n in args.lengths:
        q = parse_query(" & ".join(f"E(v{i},v{(i + 1) % n})" for i in range(n)))
        start = time.time()
        chi = treeify(q, sig, minimize=args.minimize)
        print(f"C{n}: {len(chi.disjuncts)} disjuncts in {time.time() - start:.2f}s")
        for d in sorted(chi.disjuncts, key=len)[:10]:
            print("   ", d)


if __name__ == "__main__":
    main()
