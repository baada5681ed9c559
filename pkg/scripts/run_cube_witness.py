#!/usr/bin/env python3
"""Search small boxes for 2-list assignments with no proper list coloring.

The 2x2x2 box admits one (up to color permutation); the 2x2 square
provably does not, and this script will exhaust the square's assignment
space to say so.  Threads split the enumeration of the first cell's
partner lists.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from gridcolor import listcolor


def main() -> int:
    p = argparse.ArgumentParser(
        description="exhaustive hunt for unsolvable 2-list assignments")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--universe", type=int, default=4,
                   help="colors are drawn from {0..universe-1}")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", metavar="FILE",
                   help="write the witness report as JSON")
    args = p.parse_args()

    t0 = time.perf_counter()
    witness = listcolor.search_unlistable(args.n, args.d, args.universe,
                                          threads=args.threads)
    dt = time.perf_counter() - t0
    if witness is None:
        print(f"no witness on [{args.n}]^{args.d} over {args.universe} "
              f"colors ({dt:.2f}s exhaustive)")
        return 1

    print(f"witness found in {dt:.2f}s:")
    for v in sorted(witness.lists):
        print(f"  {v}: {sorted(witness.lists[v])}")
    if (args.n, args.d) == (2, 3):
        report = listcolor.cube_witness_report(witness)
        print(f"combinations checked: {report['combinations_checked']}")
        print(f"satisfiable: {report['satisfiable']}")
        enlarged = report["satisfiable_after_one_enlargement"]
        print(f"every single-cell enlargement satisfiable: "
              f"{all(enlarged.values())}")
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                json.dump(report, fh, indent=2, sort_keys=True)
            print(f"wrote {args.json}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
