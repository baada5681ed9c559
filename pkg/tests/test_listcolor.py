import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridcolor import search
from gridcolor.lattice import BoxRegion, is_proper, ProperColoring, zd_neighbors
from gridcolor.listcolor import (HallViolation, ListAssignment, Orientation,
                                 boundary_cycle_orientation,
                                 assignment_satisfiable,
                                 check_subgraph_inequality,
                                 cube_witness_report, find_kernel,
                                 hall_orientation, has_odd_directed_cycle,
                                 induced_edges, level_sets, list_bound,
                                 list_color, random_list_assignment,
                                 search_unlistable, shell_color)


def test_list_bound_profile():
    assert list_bound(3, 2, (1, 1)) == 2       # corner
    assert list_bound(3, 2, (1, 2)) == 3       # edge
    assert list_bound(3, 2, (2, 2)) == 4       # interior
    assert list_bound(2, 3, (1, 2, 2)) == 2    # no strict interior on [2]^d
    assert list_bound(4, 3, (2, 3, 1)) == 4


def test_level_sets_partition_the_box():
    box = BoxRegion.box(4, 2)
    levels = level_sets(4, 2)   # keyed by t = L(i) - 2
    union = set()
    for t, cells in levels.items():
        assert all(list_bound(4, 2, v) == t + 2 for v in cells)
        union |= cells
    assert union == set(box.cells())
    assert set(levels) == {0, 1, 2}


def test_list_assignment_validation():
    with pytest.raises(ValueError):
        ListAssignment({(1, 1): frozenset()})
    a = ListAssignment({(1, 1): {0, 1}, (1, 2): {1, 2, 3}})
    assert a.size((1, 1)) == 2
    assert a.vertices == {(1, 1), (1, 2)}


def test_induced_edges_sorted_pairs():
    es = induced_edges([(1, 1), (1, 2), (2, 1)])
    assert es == [((1, 1), (1, 2)), ((1, 1), (2, 1))]


def test_subgraph_inequality_known_cases():
    cube = list(BoxRegion.box(2, 3).cells())
    square = list(BoxRegion.box(2, 2).cells())
    assert check_subgraph_inequality(square, lambda v: 2)
    assert not check_subgraph_inequality(cube, lambda v: 2)


def test_hall_orientation_on_square():
    cells = list(BoxRegion.box(2, 2).cells())
    o = hall_orientation(cells, lambda v: 2)
    assert isinstance(o, Orientation)
    assert max(o.out_degrees().values()) == 1


def test_hall_violation_on_cube():
    cells = list(BoxRegion.box(2, 3).cells())
    got = hall_orientation(cells, lambda v: 2)
    assert isinstance(got, HallViolation)
    assert got.vertices == frozenset(cells)
    assert (got.edge_count, got.capacity) == (12, 8)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)),
               min_size=1, max_size=9),
       st.randoms(use_true_random=False))
def test_hall_orientation_iff_every_subset_fits(cells, rng):
    sizes = {v: rng.randint(1, 3) for v in cells}
    got = hall_orientation(cells, sizes)
    exhaustive = all(
        check_subgraph_inequality(sub, sizes)
        for r in range(1, len(cells) + 1)
        for sub in itertools.combinations(cells, r))
    if isinstance(got, Orientation):
        assert exhaustive
        degs = got.out_degrees()
        assert all(degs[v] <= sizes[v] - 1 for v in cells)
        assert len(got.arcs) == len(induced_edges(cells))
    else:
        assert not exhaustive
        assert got.capacity < got.edge_count
        assert not check_subgraph_inequality(got.vertices, sizes)


def test_orientation_validation():
    with pytest.raises(ValueError):
        Orientation({(0, 0)}, {((0, 0), (0, 0))})
    with pytest.raises(ValueError):
        Orientation({(0, 0), (0, 1)}, {((0, 0), (0, 1)), ((0, 1), (0, 0))})


def _orient(pairs):
    vs = {v for p in pairs for v in p}
    return Orientation(vs, set(pairs))


def test_odd_directed_cycle_detection():
    tri = _orient([("a", "b"), ("b", "c"), ("c", "a")])
    four = _orient([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    dag = _orient([("a", "b"), ("b", "c"), ("a", "c")])
    assert has_odd_directed_cycle(tri)
    assert not has_odd_directed_cycle(four)
    assert not has_odd_directed_cycle(dag)


def test_kernel_of_even_cycle_and_edge():
    four = _orient([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    K = find_kernel(four)
    assert K in ({"a", "c"}, {"b", "d"})
    one = _orient([("u", "v")])
    assert find_kernel(one) == {"v"}
    tri = _orient([("a", "b"), ("b", "c"), ("c", "a")])
    with pytest.raises(ValueError):
        find_kernel(tri)


def _brute_kernels(vertices, arcs):
    out = []
    succ = {v: {b for (a, b) in arcs if a == v} for v in vertices}
    for r in range(len(vertices) + 1):
        for sub in itertools.combinations(sorted(vertices), r):
            K = set(sub)
            independent = all(succ[v].isdisjoint(K) for v in K)
            absorbing = all(succ[v] & K for v in vertices - K)
            if independent and absorbing:
                out.append(frozenset(K))
    return out


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 7), st.randoms(use_true_random=False))
def test_kernel_on_random_dags_matches_brute_force(n, rng):
    vertices = list(range(n))
    arcs = {(i, j) for i in range(n) for j in range(i + 1, n)
            if rng.random() < 0.4}
    o = Orientation(frozenset(vertices), arcs)
    K = find_kernel(o)
    kernels = _brute_kernels(set(vertices), arcs)
    assert kernels == [K]   # a DAG has exactly one kernel


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 8), st.randoms(use_true_random=False))
def test_kernel_on_bipartite_digraphs(n, rng):
    # random orientation of a bipartite graph: no odd cycle of any kind
    left = [("L", i) for i in range(n // 2)]
    right = [("R", i) for i in range(n - n // 2)]
    arcs = set()
    for u in left:
        for v in right:
            if rng.random() < 0.5:
                arcs.add((u, v) if rng.random() < 0.5 else (v, u))
    o = Orientation(frozenset(left + right), arcs)
    assert not has_odd_directed_cycle(o)
    K = find_kernel(o)
    assert frozenset(K) in _brute_kernels(set(left + right), arcs)


def test_list_color_exact_bounds_always_solves():
    rng = random.Random(7)
    for n, d in ((4, 2), (5, 2), (3, 3)):
        cells = list(BoxRegion.box(n, d).cells())
        for _ in range(5):
            a = random_list_assignment(n, d, 6, rng)
            sol = list_color(cells, a)
            assert sol is not None
            assert all(sol[v] in a.lists[v] for v in cells)
            assert all(sol[u] != sol[v] for u, v in induced_edges(cells))


def test_list_color_with_empty_list_is_unsat():
    assert list_color([(1, 1)], {(1, 1): frozenset()}) is None


def test_list_color_falls_back_to_search_on_hall_failure():
    # 2-lists on the cube have no orientation, but these happen to work
    cells = list(BoxRegion.box(2, 3).cells())
    lists = {v: frozenset({0, 1}) if sum(v) % 2 == 0 else frozenset({2, 3})
             for v in cells}
    sol = list_color(cells, lists)
    assert sol is not None
    assert all(sol[u] != sol[v] for u, v in induced_edges(cells))


def test_list_color_rejects_bad_orientations():
    cells = list(BoxRegion.box(2, 2).cells())
    lists = {v: frozenset({0, 1, 2}) for v in cells}
    wrong_vertices = Orientation(frozenset({(9, 9)}), set())
    with pytest.raises(ValueError):
        list_color(cells, lists, orientation=wrong_vertices)
    ring = [(1, 1), (1, 2), (2, 2), (2, 1)]
    odd_free = Orientation(
        frozenset(cells),
        {(ring[i], ring[(i + 1) % 4]) for i in range(4)})
    thin = {v: frozenset({0}) for v in cells}
    with pytest.raises(ValueError):
        list_color(cells, thin, orientation=odd_free)


def test_boundary_cycle_orientation_three_lists_suffice():
    rng = random.Random(3)
    for n in (3, 4, 5):
        o = boundary_cycle_orientation(n)
        degs = o.out_degrees()
        cells = list(BoxRegion.box(n, 2).cells())
        assert all(degs[v] <= min(list_bound(n, 2, v), 3) - 1 for v in cells)
        lists = {v: frozenset(rng.sample(range(6), 3)) for v in cells}
        sol = list_color(cells, lists, orientation=o)
        assert sol is not None
        assert all(sol[v] in lists[v] for v in cells)
        assert all(sol[u] != sol[v] for u, v in induced_edges(cells))


def test_shell_color_extends_a_box_coloring():
    # color [4]^2 with q=4, then wrap the shell to get a proper [5]^2
    q = 4
    inner = BoxRegion.box(4, 2)
    sol = search.find_coloring(inner.cells(), q)
    got = shell_color(4, 2, fixed=sol, q=q)
    assert got is not None
    full = dict(sol)
    full.update(got)
    outer = BoxRegion.box(5, 2)
    assert set(full) == set(outer.cells())
    c = ProperColoring(outer, q, tuple(full[v] for v in outer.cells()))
    assert is_proper(c)


def test_shell_color_d3():
    q = 5
    inner = BoxRegion.box(3, 3)
    sol = search.find_coloring(inner.cells(), q)
    got = shell_color(3, 3, fixed=sol, q=q)
    assert got is not None
    full = dict(sol); full.update(got)
    outer = BoxRegion.box(4, 3)
    assert set(full) == set(outer.cells())
    assert all(full[u] != full[v] for u, v in induced_edges(outer.cells()))


def test_cube_witness_exists_and_square_safe():
    witness = search_unlistable(2, 3, 4)
    assert witness is not None
    sat, combos = assignment_satisfiable(witness)
    assert not sat and combos == 2 ** 8
    assert search_unlistable(2, 2, 4) is None


def test_cube_witness_stable_across_workers():
    a = search_unlistable(2, 3, 4, threads=1)
    b = search_unlistable(2, 3, 4, threads=3)
    assert a == b


def test_cube_witness_report_shape():
    witness = search_unlistable(2, 3, 4)
    report = cube_witness_report(witness)
    assert report["satisfiable"] is False
    assert report["combinations_checked"] == 256
    assert len(report["lists"]) == 8
    assert all(len(v) == 2 for v in report["lists"].values())
    enlarged = report["satisfiable_after_one_enlargement"]
    assert len(enlarged) == 8 and all(enlarged.values())
    assert set(report["layer_colorings"]) == {"1", "2"}
