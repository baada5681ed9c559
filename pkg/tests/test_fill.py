import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridcolor import search
from gridcolor.fill import (FillProblem, boundary_lists, box_list_bound,
                            fep_cover_indices, fep_extend, fill_box,
                            fill_union, non_extendable_boundary)
from gridcolor.lattice import (BoxRegion, PartialColoring, external_boundary,
                               is_proper, zd_neighbors)


def ring_coloring(region, q, rng):
    """A random proper coloring of the region's external boundary."""
    ring = sorted(external_boundary(region.cells()))
    sol = search.find_coloring(ring, q, rng=rng)
    return PartialColoring(region.expand(1), q, sol)


def test_fill_problem_validation():
    box = BoxRegion.box(3, 2)
    ring = sorted(external_boundary(box.cells()))
    ok = PartialColoring(box.expand(1), 4, {ring[0]: 0})
    FillProblem(box, ok, 4)
    with pytest.raises(ValueError, match="palette"):
        FillProblem(box, ok, 5)
    inside = PartialColoring(box.expand(1), 4, {(2, 2): 0})
    with pytest.raises(ValueError, match="external boundary"):
        FillProblem(box, inside, 4)
    clash = PartialColoring(box.expand(1), 4, {(0, 1): 2, (0, 2): 2})
    with pytest.raises(ValueError, match="not proper"):
        FillProblem(box, clash, 4)


def test_box_list_bound_profile():
    box = BoxRegion.box(4, 2)
    assert box_list_bound(box, (1, 1)) == 2
    assert box_list_bound(box, (1, 2)) == 3
    assert box_list_bound(box, (2, 3)) == 4
    with pytest.raises(ValueError):
        box_list_bound(box, (0, 0))


def test_boundary_lists_sizes_and_unsat_marker():
    box = BoxRegion.box(4, 2)
    rng = random.Random(0)
    problem = FillProblem(box, ring_coloring(box, 4, rng), 4)
    lists = boundary_lists(problem)
    assert lists is not None
    for v in box.cells():
        assert len(lists.lists[v]) >= box_list_bound(box, v)
    # a cell can run dry only when q <= 2d: surround one cell at q=2
    tiny = BoxRegion.box(1, 1)
    dead = PartialColoring(tiny.expand(1), 2, {(0,): 0, (2,): 1})
    assert boundary_lists(FillProblem(tiny, dead, 2)) is None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_random_boundaries_fill_at_q4_d2(seed):
    box = BoxRegion.box(6, 2)
    rng = random.Random(seed)
    boundary = ring_coloring(box, 4, rng)
    got = fill_box(FillProblem(box, boundary, 4))
    assert got is not None
    assert is_proper(got)
    for v in boundary.support:
        assert got.color(v) == boundary.color(v)
    assert got.support == set(box.cells()) | boundary.support


def test_partial_boundaries_also_fill():
    box = BoxRegion.box(6, 2)
    rng = random.Random(5)
    full = ring_coloring(box, 4, rng)
    some = dict(list(sorted(full.assignment.items()))[::2])
    partial = PartialColoring(box.expand(1), 4, some)
    got = fill_box(FillProblem(box, partial, 4))
    assert got is not None and is_proper(got)


def test_non_extendable_witness_d2_q3():
    problem = non_extendable_boundary(2, 3, 3)
    assert is_proper(problem.boundary)
    assert fill_box(problem) is None
    # exhaustively: zero proper extensions
    n_ext = search.count_colorings(problem.target.cells(), 3,
                                   fixed=dict(problem.boundary.assignment))
    assert n_ext == 0
    # and without the planted clash the frozen filling is unique
    zero_side = {v: c for v, c in problem.boundary.assignment.items()
                 if any(x == 0 for x in v)}
    assert search.count_colorings(problem.target.cells(), 3,
                                  fixed=zero_side) == 1


def test_non_extendable_witness_d3_q4():
    problem = non_extendable_boundary(3, 4, 2)
    assert fill_box(problem) is None
    assert search.count_colorings(problem.target.cells(), 4,
                                  fixed=dict(problem.boundary.assignment)) == 0


def test_witness_rejects_out_of_range():
    with pytest.raises(ValueError):
        non_extendable_boundary(2, 4, 3)   # q > d+1
    with pytest.raises(ValueError):
        non_extendable_boundary(2, 2, 3)   # q < 3
    with pytest.raises(ValueError):
        non_extendable_boundary(2, 3, 1)   # box too small


def test_single_site_extension_thresholds():
    # all 5^4 neighborhoods extend at q=5; some 4^4 fail at q=4
    from itertools import product
    box = BoxRegion.box(1, 2)
    center = (1, 1)
    ring = sorted(external_boundary({center}))
    for q, expect_failures in ((5, False), (4, True)):
        failures = 0
        for combo in product(range(q), repeat=4):
            boundary = PartialColoring(box.expand(1), q,
                                       dict(zip(ring, combo)))
            problem = FillProblem(box, boundary, q)
            if fill_box(problem) is None:
                failures += 1
        assert (failures > 0) == expect_failures


def test_fill_union_l_shape():
    anchors = [(0, 0), (4, 0), (0, 4)]
    n, q = 4, 4
    boxes = [BoxRegion.box(n, 2).translate(a) for a in anchors]
    union = set()
    for b in boxes:
        union.update(b.cells())
    rng = random.Random(11)
    ring = sorted(external_boundary(union))
    picked = rng.sample(ring, k=len(ring) // 2)
    sol = search.find_coloring(picked, q, rng=rng)
    boundary = PartialColoring(BoxRegion((-1, -1), (9, 9)), q, sol)
    got = fill_union(anchors, n, boundary, q)
    assert got is not None and is_proper(got)
    assert got.support == union | boundary.support
    for v in boundary.support:
        assert got.color(v) == boundary.color(v)


def test_fill_union_single_box_matches_fill_box():
    box = BoxRegion.box(4, 2)
    rng = random.Random(2)
    boundary = ring_coloring(box, 4, rng)
    via_union = fill_union([(0, 0)], 4, boundary, 4)
    direct = fill_box(FillProblem(box, boundary, 4))
    assert via_union.assignment == direct.assignment


def test_fill_union_overlapping_boxes():
    anchors = [(0, 0), (2, 2), (0, 0)]   # duplicate collapses
    got = fill_union(anchors, 4, PartialColoring(
        BoxRegion((-1, -1), (7, 7)), 4, {}), 4)
    assert got is not None and is_proper(got)
    union = set(BoxRegion.box(4, 2).cells()) | set(
        BoxRegion.box(4, 2).translate((2, 2)).cells())
    assert got.support == union


def test_fill_union_drops_dominated_anchor():
    # (1,1)'s box lies inside the union of the other two; same answer
    base = [(0, 0), (2, 0)]
    extra = base + [(1, 0)]
    empty = PartialColoring(BoxRegion((-1, -1), (7, 6)), 4, {})
    a = fill_union(base, 4, empty, 4)
    b = fill_union(extra, 4, empty, 4)
    assert a.assignment == b.assignment


def test_fep_cover_indices_tile_and_cover():
    cells = {(0, 0), (3, 1), (-2, 4)}
    centers = fep_cover_indices(cells, 1)
    assert all(all(x % 3 == 0 for x in c) for c in centers)
    covered = set()
    for c in centers:
        covered.update(BoxRegion(tuple(x - 1 for x in c),
                                 tuple(x + 1 for x in c)).cells())
    assert cells <= covered


@settings(max_examples=40)
@given(st.sets(st.tuples(st.integers(-6, 6), st.integers(-6, 6)),
               min_size=1, max_size=6),
       st.integers(1, 3))
def test_fep_cover_boxes_are_disjoint_and_near(cells, n):
    period = 2 * n + 1
    centers = fep_cover_indices(cells, n)
    assert all(all(x % period == 0 for x in c) for c in centers)
    seen = set()
    for c in centers:
        box = set(BoxRegion(tuple(x - n for x in c),
                            tuple(x + n for x in c)).cells())
        assert seen.isdisjoint(box)
        seen |= box
    assert cells <= seen


def _proper_dict(d):
    return all(d.get(w) != c for v, c in d.items() for w in zd_neighbors(v))


def test_fep_extend_covers_window():
    q, n = 4, 1
    u = PartialColoring(BoxRegion.centered(1, 2), q, {(0, 0): 1, (1, 0): 2})
    centers = fep_cover_indices(u.support, n, 2)
    cells = set()
    for c in centers:
        cells |= set(BoxRegion(tuple(x - n for x in c),
                               tuple(x + n for x in c)).cells())
    sol = search.find_coloring(sorted(cells - u.support), q,
                               fixed=dict(u.assignment))
    full = dict(u.assignment)
    full.update(sol)
    lo = tuple(min(v[i] for v in cells) for i in range(2))
    hi = tuple(max(v[i] for v in cells) for i in range(2))
    ubar = PartialColoring(BoxRegion(lo, hi), q, full)

    window = BoxRegion.centered(5, 2)
    got = fep_extend(u, ubar, q, n, window)
    assert got is not None
    assert set(got) == set(window.cells())
    assert _proper_dict(got)
    for v in u.support:
        assert got[v] == u.color(v)


def test_fep_extend_validates_cover_and_palette():
    q, n = 4, 1
    u = PartialColoring(BoxRegion.centered(1, 2), q, {(0, 0): 1})
    thin = PartialColoring(BoxRegion.centered(1, 2), q, {(0, 0): 1})
    with pytest.raises(ValueError, match="must cover"):
        fep_extend(u, thin, q, n, BoxRegion.centered(3, 2))
    with pytest.raises(ValueError, match="palette"):
        fep_extend(u, thin, 5, n, BoxRegion.centered(3, 2))


def test_fep_extend_empty_support():
    q, n = 4, 1
    u = PartialColoring(BoxRegion.centered(1, 2), q, {})
    ubar = PartialColoring(BoxRegion.centered(1, 2), q, {})
    window = BoxRegion.centered(4, 2)
    got = fep_extend(u, ubar, q, n, window)
    assert got is not None and set(got) == set(window.cells())
    assert _proper_dict(got)
