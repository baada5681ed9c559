#!/usr/bin/env python3
"""Stress the boundary-filling pipeline on random proper boundaries.

Draws random proper (partial) colorings of the boundary of [n]^d and
fills the interior, reporting throughput and any failures.  At q >= d+2
every trial must succeed; at q <= d+1 the script will happily show you
the failures instead (try --q 3 --keep 1.0).
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from gridcolor import fill, search
from gridcolor.lattice import (BoxRegion, PartialColoring, external_boundary,
                               is_proper)


def main() -> int:
    p = argparse.ArgumentParser(
        description="batch-fill random boundaries of [n]^d")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--q", type=int, default=4)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--keep", type=float, default=0.8,
                   help="probability a boundary cell stays colored")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    box = BoxRegion.box(args.n, args.d)
    ring = sorted(external_boundary(box.cells()))
    ok = failed = 0
    t0 = time.perf_counter()
    for trial in range(args.trials):
        rng = random.Random((args.seed, trial).__hash__())
        sol = search.find_coloring(ring, args.q, rng=rng)
        keep = {v: sol[v] for v in ring if rng.random() < args.keep}
        boundary = PartialColoring(box.expand(1), args.q, keep)
        got = fill.fill_box(fill.FillProblem(box, boundary, args.q))
        if got is None:
            failed += 1
            continue
        assert is_proper(got)
        assert all(got.color(v) == c for v, c in keep.items())
        ok += 1
    dt = time.perf_counter() - t0

    print(f"[{args.n}]^{args.d}, q={args.q}, keep={args.keep}: "
          f"{ok} filled, {failed} unfillable "
          f"({args.trials / dt:.0f} trials/s)")
    if failed and args.q >= args.d + 2:
        print("unexpected failures above the fillability threshold!",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
