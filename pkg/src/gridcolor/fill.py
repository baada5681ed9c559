"""Extending boundary colorings into boxes, unions of boxes, and windows.

A box is n-fillable when every proper coloring of (part of) its external
boundary extends inside.  The boundary eats at most one color per
outside neighbor, so the surviving palette at each cell is at least the
box list profile; with q >= d+2 colors and side length >= d+2 the kernel
method of `listcolor` therefore cannot fail.  Below those thresholds the
solver falls back to exhaustive search and UNSAT is a real outcome --
and with q <= d+1 a frozen rule pins the interior from two faces of the
boundary, so planting a clashing color next to the pinned region gives
an explicitly non-extendable boundary.

Unions of translated boxes fill box by box: color the first box, treat
everything it decided that the rest can see as new boundary, recurse.
A whole window extends a distant partial coloring u the same way, after
covering u with disjoint translates of B_n on the (2n+1)Z^d grid and
taking the caller's extension of u on the covered part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .frozen import canonical_frozen, lift_frozen
from .lattice import (BoxRegion, Coordinate, PartialColoring,
                      external_boundary, is_proper, zd_neighbors)
from .listcolor import ListAssignment, list_color


@dataclass(frozen=True)
class FillProblem:
    """A box to color, a proper partial coloring of its external boundary, q."""

    target: BoxRegion
    boundary: PartialColoring
    q: int

    def __post_init__(self):
        if self.q != self.boundary.q:
            raise ValueError(
                f"palette mismatch: q={self.q}, boundary q={self.boundary.q}")
        allowed = external_boundary(self.target.cells())
        stray = self.boundary.support - allowed
        if stray:
            raise ValueError(
                f"boundary cell {min(stray)} is not on the external boundary "
                f"of {self.target}")
        if not is_proper(self.boundary):
            raise ValueError("boundary coloring is not proper")


def box_list_bound(region: BoxRegion, v: Coordinate) -> int:
    """2 + #{k : v_k strictly between the faces of the box}."""
    if v not in region:
        raise ValueError(f"{v} not in {region}")
    return 2 + sum(a < x < b for x, a, b in zip(v, region.low, region.high))


def boundary_lists(problem: FillProblem) -> ListAssignment | None:
    """Surviving palette per target cell: q colors minus colored neighbors.

    Returns None (an UNSAT marker, not an error) when some cell has no
    color left, which requires q <= 2d.
    """
    q = problem.q
    lists = {}
    for v in problem.target.cells():
        s = set(range(q))
        for w in zd_neighbors(v):
            c = problem.boundary.color(w)
            if c is not None:
                s.discard(c)
        # each coordinate puts at most one neighbor outside when sides are
        # >= 2, which is what keeps the surviving lists at the box profile
        if q >= problem.target.d + 2 and min(problem.target.shape) >= 2:
            assert len(s) >= box_list_bound(problem.target, v)
        if not s:
            return None
        lists[v] = frozenset(s)
    return ListAssignment(lists)


def fill_box(problem: FillProblem) -> PartialColoring | None:
    """Extend the boundary coloring to the whole box, or None if impossible.

    Success is guaranteed for q >= d+2 and side length >= d+2; outside
    that regime the answer may honestly be None.  The result assigns both
    the box and the boundary support, and is deterministic.
    """
    q = problem.q
    cells = list(problem.target.cells())
    assignment = boundary_lists(problem)
    if assignment is None:
        return None
    sol = list_color(cells, assignment)
    if sol is None:
        return None
    support = problem.boundary.support
    window = _bounding_box(set(cells) | support)
    merged = dict(problem.boundary.assignment)
    merged.update(sol)
    out = PartialColoring(window, q, merged)
    assert is_proper(out)
    return out


def _bounding_box(cells: Iterable[Coordinate]) -> BoxRegion:
    cells = list(cells)
    d = len(cells[0])
    low = tuple(min(v[k] for v in cells) for k in range(d))
    high = tuple(max(v[k] for v in cells) for k in range(d))
    return BoxRegion(low, high)


def non_extendable_boundary(d: int, q: int, n: int) -> FillProblem:
    """A proper partial boundary coloring of [n]^d with no proper extension.

    Needs 3 <= q <= d+1 so a frozen rule exists: its restriction to the
    boundary cells with a zero coordinate already pins the whole box, and
    the cell (n+1, 1, ..., 1) is planted with the color the pinned cell
    (n, 1, ..., 1) is forced to take.
    """
    if not 3 <= q <= d + 1:
        raise ValueError(f"need 3 <= q <= d+1 (got q={q}, d={d})")
    if n < 2:
        raise ValueError("need n >= 2")
    box = BoxRegion.box(n, d)
    rule = lift_frozen(canonical_frozen(q - 1), d)
    clash = (n + 1,) + (1,) * (d - 1)
    pinned = (n,) + (1,) * (d - 1)
    assignment = {}
    for v in external_boundary(box.cells()):
        if any(x == 0 for x in v):
            assignment[v] = rule.color(v)
    assignment[clash] = rule.color(pinned)
    boundary = PartialColoring(box.expand(1), q, assignment)
    assert is_proper(boundary)
    return FillProblem(box, boundary, q)


def _minimal_anchors(anchors: list[Coordinate], n: int) -> list[Coordinate]:
    """Drop anchors whose box is covered by the union of the others."""
    kept = list(anchors)
    changed = True
    while changed:
        changed = False
        for a in list(kept):
            others = set()
            for b in kept:
                if b != a:
                    others.update(BoxRegion.box(n, len(b)).translate(b).cells())
            mine = set(BoxRegion.box(n, len(a)).translate(a).cells())
            if mine <= others:
                kept.remove(a)
                changed = True
                break
    return kept


def fill_union(anchors: Iterable[Coordinate], n: int,
               boundary: PartialColoring, q: int) -> PartialColoring | None:
    """Fill the union of boxes {a + [n]^d : a in anchors} box by box.

    Each box is filled against the colors currently visible on its
    boundary (given ones, plus cells of earlier boxes); cells not claimed
    by any later box are final.  Guaranteed for q >= d+2 and n >= d+2,
    like fill_box; may return None below that.
    """
    anchors = sorted(set(map(tuple, anchors)))
    if not anchors:
        raise ValueError("need at least one anchor")
    d = len(anchors[0])
    if any(len(a) != d for a in anchors):
        raise ValueError("anchors of mixed dimension")
    anchors = _minimal_anchors(anchors, n)
    boxes = {a: BoxRegion.box(n, d).translate(a) for a in anchors}
    union: set[Coordinate] = set()
    for b in boxes.values():
        union.update(b.cells())
    stray = boundary.support - external_boundary(union)
    if stray:
        raise ValueError(
            f"boundary cell {min(stray)} is not on the union's boundary")
    if boundary.q != q:
        raise ValueError("palette mismatch")

    visible = dict(boundary.assignment)  # colors the remaining region can see
    final: dict[Coordinate, int] = {}
    for step, a in enumerate(anchors):
        box = boxes[a]
        box_cells = set(box.cells())
        sub_boundary = {w: visible[w]
                        for w in external_boundary(box_cells) if w in visible}
        problem = FillProblem(
            box, PartialColoring(box.expand(1), q, sub_boundary), q)
        got = fill_box(problem)
        if got is None:
            return None
        rest: set[Coordinate] = set()
        for b in anchors[step + 1:]:
            rest.update(boxes[b].cells())
        for v in box_cells:
            if v not in rest:
                final[v] = got.color(v)
        rest_boundary = external_boundary(rest) if rest else frozenset()
        visible = {w: (got.color(w) if w in box_cells else visible[w])
                   for w in rest_boundary
                   if w in box_cells or w in visible}
    final.update(boundary.assignment)
    out = PartialColoring(_bounding_box(final), q, final)
    assert is_proper(out)
    assert set(final) == union | boundary.support
    return out


def fep_cover_indices(cells: Iterable[Coordinate], n: int,
                      d: int | None = None) -> frozenset[Coordinate]:
    """Centers (2n+1)k of the B_n-translate partition whose box meets the set.

    The translates {(2n+1)k + B_n} tile Z^d; the selected boxes cover the
    set and stay within its B_2n-neighborhood.
    """
    cells = set(map(tuple, cells))
    if not cells and d is None:
        raise ValueError("need d for an empty set")
    period = 2 * n + 1
    out = set()
    for v in cells:
        out.add(tuple(period * ((x + n) // period) for x in v))
    return frozenset(out)


def fep_extend(u: PartialColoring, ubar: PartialColoring, q: int, n: int,
               window: BoxRegion) -> dict[Coordinate, int] | None:
    """Color the whole window so that the result agrees with u on its support.

    The caller supplies ubar, a proper extension of u to the B_2n
    neighborhood of its support.  The B_n-translate boxes meeting the
    support take their colors from ubar; all other boxes of the tiling
    that meet the window are filled one at a time against everything
    already colored.  Returns a dict covering the window (plus any
    overhang of the selected boxes), or None if some fill is UNSAT
    outside the guaranteed regime q >= d+2, 2n+1 >= d+2.
    """
    d = window.d
    if u.q != q or ubar.q != q:
        raise ValueError("palette mismatch")
    for v in u.support:
        if ubar.color(v) != u.color(v):
            raise ValueError(f"ubar disagrees with u at {v}")
    period = 2 * n + 1
    centers_s = fep_cover_indices(u.support, n, d)
    colored: dict[Coordinate, int] = {}
    for c in centers_s:
        box = BoxRegion(tuple(x - n for x in c), tuple(x + n for x in c))
        for v in box.cells():
            col = ubar.color(v)
            if col is None:
                raise ValueError(
                    f"ubar must cover {v} (box at {c} meets the support)")
            colored[v] = col
    lo = tuple(period * ((x + n) // period) for x in window.low)
    hi = tuple(period * ((x + n) // period) for x in window.high)
    all_centers = BoxRegion(lo, hi)
    todo = sorted(set(c for c in _center_grid(all_centers, period))
                  - centers_s)
    for c in todo:
        box = BoxRegion(tuple(x - n for x in c), tuple(x + n for x in c))
        box_cells = set(box.cells())
        sub_boundary = {w: colored[w]
                        for w in external_boundary(box_cells) if w in colored}
        problem = FillProblem(
            box, PartialColoring(box.expand(1), q, sub_boundary), q)
        got = fill_box(problem)
        if got is None:
            return None
        for v in box_cells:
            colored[v] = got.color(v)
    out = {v: colored[v] for v in window.cells()}
    return out


def _center_grid(center_box: BoxRegion, period: int):
    ranges = []
    for a, b in zip(center_box.low, center_box.high):
        ranges.append(range(a, b + 1, period))
    from itertools import product
    return [tuple(c) for c in product(*ranges)]
