#!/usr/bin/env python3
"""Survey single-move state graphs over random fixed boundaries.

For each seed, colors the ring around [n]^d properly at random, builds
the move graph of all compatible interior colorings, and tabulates
connectivity.  Useful for spotting palettes where a move family
fragments the state space (try --q 3 --kind pivot against --kind kempe).
"""

from __future__ import annotations

import argparse
import random
import sys
from collections import Counter

from gridcolor import mixing, search
from gridcolor.lattice import BoxRegion, PartialColoring, external_boundary


def main() -> int:
    p = argparse.ArgumentParser(
        description="move-graph connectivity census over random boundaries")
    p.add_argument("--box", type=int, default=3, metavar="N")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--q", type=int, default=6)
    p.add_argument("--kind", default="pivot",
                   help="pivot | npivot:N | kempe")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--free", action="store_true",
                   help="one free-boundary run instead of random rings")
    p.add_argument("--max-states", type=int, default=1_000_000)
    args = p.parse_args()

    box = BoxRegion.box(args.box, args.d)
    runs = []
    if args.free:
        runs.append(("free", mixing.move_graph(
            box, None, args.q, kind=args.kind, max_states=args.max_states)))
    else:
        ring = sorted(external_boundary(box.cells()))
        for seed in range(args.seeds):
            sol = search.find_coloring(ring, args.q, rng=random.Random(seed))
            boundary = PartialColoring(box.expand(1), args.q, sol)
            runs.append((f"seed {seed}", mixing.move_graph(
                box, boundary, args.q, kind=args.kind,
                max_states=args.max_states)))

    print(f"{'run':>8} {'states':>9} {'components':>11} {'largest':>9} "
          f"{'diam<=':>7}")
    for label, rep in runs:
        diam = "-" if rep.diameter_bound is None else rep.diameter_bound
        print(f"{label:>8} {rep.state_count:>9} {rep.component_count:>11} "
              f"{rep.largest_component:>9} {diam:>7}")
    histogram = Counter(rep.component_count for _, rep in runs)
    disconnected = sum(n for c, n in histogram.items() if c > 1)
    print(f"\n{len(runs)} runs, {disconnected} with a fragmented state space")
    return 0 if disconnected == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
