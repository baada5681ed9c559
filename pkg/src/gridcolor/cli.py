"""Command-line front end: one `gridcolor` binary, one subcommand per task.

Every JSON output is a single object {"manifest": ..., "result": ...};
the manifest echoes the subcommand, its parameters, and the package
version so a run can be reproduced from its own output.  Output is
deterministic byte-for-byte given identical argv and seed (keys sorted,
no timestamps).

Exit codes: 0 on success, 1 when the mathematically negative verdict is
the answer (UNSAT fill, unsolvable lists, forcing refuted, ...), 2 for
usage and domain errors.  Scripts can branch on 1 without parsing JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field

from . import __version__, census, fill, frozen, listcolor, mixing
from .lattice import (BoxRegion, PartialColoring, ProperColoring,
                      coloring_from_json, coloring_to_json, external_boundary,
                      render_ascii, render_pgm)

FORMATS = ("json", "csv", "ascii", "pgm")


@dataclass
class Output:
    result: dict
    code: int = 0
    coloring: object = None          # renderable for ascii/pgm formats
    csv_rows: list[list] | None = None
    csv_header: list[str] | None = None


def parse_coords(text: str) -> list[tuple[int, ...]]:
    """Parse '1,1;1,2;2,1' into coordinate tuples."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(tuple(int(x) for x in part.split(",")))
        except ValueError:
            raise ValueError(f"bad coordinate {part!r} "
                             "(expected comma-separated integers)") from None
    if not out:
        raise ValueError("no coordinates given")
    dims = {len(v) for v in out}
    if len(dims) != 1:
        raise ValueError("coordinates of mixed dimension")
    return out


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_coloring(path: str):
    return coloring_from_json(_load_json(path))


def _load_lists(path: str) -> dict[tuple[int, ...], frozenset[int]]:
    """Lists file: JSON object mapping 'i,j,...' to arrays of colors."""
    raw = _load_json(path)
    if not isinstance(raw, dict):
        raise ValueError("lists file must be a JSON object")
    out = {}
    for key, colors in raw.items():
        v = tuple(int(x) for x in key.split(","))
        out[v] = frozenset(int(c) for c in colors)
    return out


def _partial_result(pc: PartialColoring) -> dict:
    return coloring_to_json(pc)


# --- subcommand handlers ----------------------------------------------------

def cmd_frozen_gen(args) -> Output:
    rule = (frozen.single_site_frozen(args.d) if args.single_site
            else frozen.canonical_frozen(args.d))
    result = {
        "kind": "linear",
        "d": rule.d,
        "q": rule.q,
        "weights": list(rule.weights),
        "offset": rule.offset,
    }
    window = BoxRegion.box(8, args.d)
    coloring = frozen.coloring_from_rule(rule, window)
    result["window"] = coloring_to_json(coloring)
    return Output(result, coloring=coloring)


def cmd_frozen_check(args) -> Output:
    coloring = _load_coloring(args.coloring)
    F = parse_coords(args.F)
    verdict = frozen.is_frozen_on(coloring, F, q=args.q)
    result = {"frozen": verdict, "F": [list(v) for v in F], "q": args.q}
    return Output(result, code=0 if verdict else 1)


def cmd_frozen_obstruct(args) -> Output:
    F = parse_coords(args.F)
    if any(len(v) != args.d for v in F):
        raise ValueError("coordinates do not match --d")
    verdict = frozen.frozen_obstruction(F, args.q, args.d)
    from .lattice import edge_counts
    internal, crossing = edge_counts(F)
    result = {
        "obstruction": verdict,
        "q": args.q,
        "cells": len(F),
        "lhs": (args.q - 1) * len(F),
        "rhs": internal + crossing,
        "internal_edges": internal,
        "crossing_edges": crossing,
    }
    return Output(result, code=0 if verdict else 1)


def cmd_listcolor_solve(args) -> Output:
    region = BoxRegion.box(args.n, args.d)
    cells = list(region.cells())
    if args.lists is not None:
        lists = _load_lists(args.lists)
        missing = [v for v in cells if v not in lists]
        if missing:
            raise ValueError(f"lists file misses cell {missing[0]}")
        assignment = listcolor.ListAssignment(
            {v: lists[v] for v in cells})
        source = {"lists": args.lists}
    else:
        seed = args.random if args.random is not None else 0
        rng = random.Random(seed)
        assignment = listcolor.random_list_assignment(
            args.n, args.d, args.universe, rng)
        source = {"random_seed": seed, "universe": args.universe}
    sol = listcolor.list_color(cells, assignment)
    if sol is None:
        return Output({"solved": False, "source": source}, code=1)
    pc = PartialColoring(region, max(max(s) for s in
                                     assignment.lists.values()) + 1, sol)
    return Output({"solved": True, "source": source,
                   "coloring": _partial_result(pc)}, coloring=pc)


def cmd_listcolor_orient(args) -> Output:
    region = BoxRegion.box(args.n, args.d)
    cells = list(region.cells())
    got = listcolor.hall_orientation(
        cells, lambda v: listcolor.list_bound(args.n, args.d, v))
    if isinstance(got, listcolor.HallViolation):
        result = {
            "success": False,
            "violation": {
                "vertices": sorted([list(v) for v in got.vertices]),
                "edge_count": got.edge_count,
                "capacity": got.capacity,
            },
        }
        return Output(result, code=1)
    degs = got.out_degrees()
    result = {
        "success": True,
        "max_out_degree": max(degs.values()),
        "arcs": sorted([[list(a), list(b)] for (a, b) in got.arcs]),
    }
    return Output(result)


def cmd_listcolor_witness_cube(args) -> Output:
    witness = listcolor.search_unlistable(threads=args.threads)
    if witness is None:
        return Output({"found": False}, code=1)
    report = listcolor.cube_witness_report(witness)
    report["found"] = True
    return Output(report)


def cmd_fill_box(args) -> Output:
    region = BoxRegion.box(args.n, args.d)
    boundary = _load_coloring(args.boundary)
    if not isinstance(boundary, PartialColoring):
        boundary = PartialColoring(boundary.region, boundary.q,
                                   boundary.as_dict())
    support = {v for v in boundary.assignment
               if v in external_boundary(region.cells())}
    boundary = PartialColoring(region.expand(1), args.q,
                               {v: boundary.assignment[v] for v in support})
    problem = fill.FillProblem(region, boundary, args.q)
    got = fill.fill_box(problem)
    if got is None:
        return Output({"satisfiable": False,
                       "boundary_cells": len(support)}, code=1)
    return Output({"satisfiable": True,
                   "coloring": _partial_result(got)}, coloring=got)


def cmd_fill_witness(args) -> Output:
    problem = fill.non_extendable_boundary(args.d, args.q, args.n)
    cells = list(problem.target.cells())
    verified = None
    if args.q ** len(cells) <= 10 ** 9:
        from . import search
        verified = search.count_colorings(
            cells, args.q, fixed=dict(problem.boundary.assignment),
            limit=1) == 0
    result = {
        "boundary": _partial_result(problem.boundary),
        "n": args.n, "d": args.d, "q": args.q,
        "verified_unsat": verified,
    }
    return Output(result, coloring=problem.boundary)


def cmd_fill_fep(args) -> Output:
    u = _load_coloring(args.u)
    ubar = _load_coloring(args.ubar)
    if not isinstance(u, PartialColoring) or not isinstance(
            ubar, PartialColoring):
        raise ValueError("--u and --ubar must be partial colorings")
    window = BoxRegion.centered(args.window, u.region.d)
    got = fill.fep_extend(u, ubar, args.q, args.n, window)
    if got is None:
        return Output({"extended": False}, code=1)
    pc = PartialColoring(window, args.q,
                         {v: c for v, c in got.items() if v in window})
    return Output({"extended": True, "coloring": _partial_result(pc)},
                  coloring=pc)


def cmd_mixing_tssm(args) -> Output:
    witness = mixing.tssm_witness(args.d, args.q,
                                  check_range=not args.any_q)
    forced, unforced = mixing.forcing_report(witness, args.radius)
    result = {
        "forced": forced,
        "first_unforced": list(unforced) if unforced else None,
        "radius": args.radius, "d": args.d, "q": args.q,
        "agreement_cells_in_window": len(
            witness.agreement_set(BoxRegion.centered(args.radius, args.d))),
    }
    return Output(result, code=0 if forced else 1)


def cmd_mixing_si(args) -> Output:
    witness = mixing.si_violation_witness(args.d, args.q, args.n)
    count = mixing.count_boundary_fillings(witness, limit=2)
    origin = (0,) * args.d
    result = {
        "unique_filling": count == 1,
        "fillings_found": count,
        "boundary_cells": len(witness.U),
        "x_at_origin": witness.x_rule.color(origin),
        "y_at_origin": witness.y_rule.color(origin),
        "n": args.n, "d": args.d, "q": args.q,
    }
    return Output(result, code=0 if count == 1 else 1)


def cmd_mixing_moves(args) -> Output:
    region = BoxRegion.box(args.box, args.d)
    boundary = None
    if args.boundary is not None:
        loaded = _load_coloring(args.boundary)
        if not isinstance(loaded, PartialColoring):
            raise ValueError("--boundary must be a partial coloring")
        boundary = loaded
    report = mixing.move_graph(region, boundary, args.q, kind=args.kind,
                               max_states=args.max_states)
    result = {
        "move_kind": report.move_kind,
        "state_count": report.state_count,
        "component_count": report.component_count,
        "largest_component": report.largest_component,
        "diameter_bound": report.diameter_bound,
        "connected": report.component_count <= 1,
    }
    return Output(result)


def cmd_census_count(args) -> Output:
    region = BoxRegion.box(args.n, args.d)
    boundary = None
    if args.boundary is not None:
        loaded = _load_coloring(args.boundary)
        if not isinstance(loaded, PartialColoring):
            raise ValueError("--boundary must be a partial coloring")
        boundary = loaded
    rep = census.count_exact(region, args.q, boundary, method=args.method)
    result = {
        "count": rep.count,
        "log_count_per_site": rep.log_count_per_site,
        "method": rep.method,
        "boundary": rep.boundary_kind,
        "n": args.n, "d": args.d, "q": args.q,
    }
    return Output(result)


def cmd_census_entropy(args) -> Output:
    rule = None
    if args.frozen:
        if not 2 <= args.q <= args.d + 1:
            raise ValueError(
                f"--frozen needs 2 <= q <= d+1 (got q={args.q}, d={args.d})")
        rule = frozen.lift_frozen(frozen.canonical_frozen(args.q - 1),
                                  args.d)
    reports = census.entropy_series(args.d, args.q,
                                    range(1, args.n_max + 1), rule=rule)
    series = [{"n": rep.region.shape[0], "count": rep.count,
               "log_count_per_site": rep.log_count_per_site}
              for rep in reports]
    rows = [[p["n"], p["count"], p["log_count_per_site"]] for p in series]
    return Output({"series": series, "boundary":
                   "frozen" if args.frozen else "free"},
                  csv_rows=rows,
                  csv_header=["n", "count", "log_count_per_site"])


def cmd_census_sample(args) -> Output:
    region = BoxRegion.box(args.n, args.d)
    cfg = census.SamplerConfig(region, args.q, steps=args.steps,
                               seed=args.seed)
    state = census.glauber_sample(cfg)
    return Output({"coloring": coloring_to_json(state),
                   "steps": args.steps, "seed": args.seed,
                   "sweep_order": "sequential-lexicographic",
                   "rng": "numpy PCG64"},
                  coloring=state)


# --- plumbing ----------------------------------------------------------------

def _default_threads() -> int:
    env = os.environ.get("GRIDCOLOR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json",
                        help="output format (default json)")
    common.add_argument("--out", metavar="FILE",
                        help="write output to FILE instead of stdout")
    common.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker processes for parallel searches")

    p = argparse.ArgumentParser(
        prog="gridcolor",
        description="proper colorings of Z^d windows: construct, verify, "
                    "extend, count, sample")
    p.add_argument("--version", action="version", version=__version__)
    top = p.add_subparsers(dest="group", required=True)

    g = top.add_parser("frozen", help="frozen colorings and obstructions")
    sub = g.add_subparsers(dest="command", required=True)
    s = sub.add_parser("gen", parents=[common],
                       help="generate a frozen coloring rule")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--single-site", action="store_true",
                   help="q=2d+1 single-site rule instead of q=d+1")
    s.set_defaults(func=cmd_frozen_gen)
    s = sub.add_parser("check", parents=[common],
                       help="is a saved coloring frozen on the cells F?")
    s.add_argument("--coloring", required=True, metavar="FILE")
    s.add_argument("--F", required=True,
                   help="cells as 'x1,y1;x2,y2;...'")
    s.add_argument("--q", type=int, required=True)
    s.set_defaults(func=cmd_frozen_check)
    s = sub.add_parser("obstruct", parents=[common],
                       help="edge-count certificate that no coloring "
                            "is frozen on F")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--F", required=True)
    s.add_argument("--q", type=int, required=True)
    s.set_defaults(func=cmd_frozen_obstruct)

    g = top.add_parser("listcolor", help="list coloring of boxes")
    sub = g.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", parents=[common],
                       help="color [n]^d from per-cell lists")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    src = s.add_mutually_exclusive_group()
    src.add_argument("--lists", metavar="FILE",
                     help="JSON mapping 'i,j,...' to color arrays")
    src.add_argument("--random", type=int, metavar="SEED",
                     help="random lists of exactly the guaranteed sizes")
    s.add_argument("--universe", type=int, default=6,
                   help="palette size for --random (default 6)")
    s.set_defaults(func=cmd_listcolor_solve)
    s = sub.add_parser("orient", parents=[common],
                       help="orientation with out-degrees below the "
                            "guaranteed list sizes")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_listcolor_orient)
    s = sub.add_parser("witness-cube", parents=[common],
                       help="search the 2x2x2 box for an unsolvable "
                            "2-list assignment")
    s.set_defaults(func=cmd_listcolor_witness_cube)

    g = top.add_parser("fill", help="extending boundary colorings inward")
    sub = g.add_subparsers(dest="command", required=True)
    s = sub.add_parser("box", parents=[common],
                       help="fill [n]^d against a boundary coloring")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--boundary", required=True, metavar="FILE")
    s.set_defaults(func=cmd_fill_box)
    s = sub.add_parser("witness", parents=[common],
                       help="a proper boundary with no proper filling")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_fill_witness)
    s = sub.add_parser("fep", parents=[common],
                       help="extend a partial coloring to a window via "
                            "the box tiling")
    s.add_argument("--u", required=True, metavar="FILE")
    s.add_argument("--ubar", required=True, metavar="FILE")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--window", type=int, required=True,
                   help="radius W of the target window {-W..W}^d")
    s.set_defaults(func=cmd_fill_fep)

    g = top.add_parser("mixing", help="mixing failures and move graphs")
    sub = g.add_subparsers(dest="command", required=True)
    s = sub.add_parser("tssm", parents=[common],
                       help="tube witness + forced-axis verification")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--any-q", action="store_true",
                   help="build the configuration outside d+2 <= q <= 2d")
    s.set_defaults(func=cmd_mixing_tssm)
    s = sub.add_parser("si", parents=[common],
                       help="frozen-boundary witness with a unique filling")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_mixing_si)
    s = sub.add_parser("moves", parents=[common],
                       help="connectivity of a single-move state graph")
    s.add_argument("--box", type=int, required=True, metavar="N",
                   help="side of the box [N]^d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--kind", default="pivot",
                   help="pivot | npivot:N | kempe (default pivot)")
    s.add_argument("--boundary", metavar="FILE")
    s.add_argument("--max-states", type=int, default=1_000_000)
    s.set_defaults(func=cmd_mixing_moves)

    g = top.add_parser("census", help="exact counts, entropy, sampling")
    sub = g.add_subparsers(dest="command", required=True)
    s = sub.add_parser("count", parents=[common],
                       help="exact number of proper colorings")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--boundary", metavar="FILE")
    s.add_argument("--method", choices=("auto", "transfer", "dfs"),
                   default="auto")
    s.set_defaults(func=cmd_census_count)
    s = sub.add_parser("entropy", parents=[common],
                       help="per-site log-count series over n")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--frozen", action="store_true",
                   help="fix each boundary to the canonical frozen rule")
    s.set_defaults(func=cmd_census_entropy)
    s = sub.add_parser("sample", parents=[common],
                       help="heat-bath Glauber sample after S sweeps")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_census_sample)

    return p


def _manifest(args) -> dict:
    skip = {"func", "group", "command", "out", "format"}
    params = {k.replace("_", "-"): v for k, v in vars(args).items()
              if k not in skip and v is not None}
    return {
        "command": f"{args.group} {args.command}",
        "params": params,
        "version": __version__,
    }


def _emit(args, out: Output) -> str:
    manifest = _manifest(args)
    if args.format == "json":
        return json.dumps({"manifest": manifest, "result": out.result},
                          indent=2, sort_keys=True) + "\n"
    note = "# manifest: " + json.dumps(manifest, sort_keys=True)
    if args.format == "csv":
        if out.csv_rows is None:
            raise ValueError("this command has no CSV form; use --format json")
        lines = [note, ",".join(out.csv_header)]
        lines += [",".join("" if x is None else str(x) for x in row)
                  for row in out.csv_rows]
        return "\n".join(lines) + "\n"
    if out.coloring is None:
        raise ValueError(f"this command has no {args.format} form; "
                         "use --format json")
    if args.format == "ascii":
        return note + "\n" + render_ascii(out.coloring) + "\n"
    body = render_pgm(out.coloring)
    magic, rest = body.split("\n", 1)
    return f"{magic}\n{note}\n{rest}"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
        text = _emit(args, out)
    except census.UnsatisfiableError as exc:
        manifest = _manifest(args)
        text = json.dumps({"manifest": manifest,
                           "result": {"satisfiable": False,
                                      "error": str(exc)}},
                          indent=2, sort_keys=True) + "\n"
        out = Output({}, code=1)
        if args.format != "json":
            print(f"error: {exc}", file=sys.stderr)
            return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return out.code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
