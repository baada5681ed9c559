"""The exhaustive solver is the oracle everything else leans on, so it
gets its own checks against closed forms and a naive reimplementation."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridcolor import search
from gridcolor.lattice import BoxRegion, zd_neighbors


def naive_count(cells, q, fixed=None, lists=None):
    cells = sorted(cells)
    fixed = fixed or {}
    if any(fixed.get(w) == c for v, c in fixed.items()
           for w in zd_neighbors(v)):
        return 0
    domains = [sorted(lists[v]) if lists else range(q) for v in cells]
    total = 0
    for combo in itertools.product(*domains):
        a = dict(zip(cells, combo))
        a.update(fixed)
        if all(a.get(w) != c for v, c in a.items() for w in zd_neighbors(v)):
            total += 1
    return total


def test_path_graph_closed_form():
    for n in range(1, 8):
        cells = [(i,) for i in range(n)]
        assert search.count_colorings(cells, 3) == 3 * 2 ** (n - 1)


def test_cycle_chromatic_polynomial():
    # [2]^2 is the 4-cycle: (q-1)^4 + (q-1)
    cells = list(BoxRegion.box(2, 2).cells())
    for q in range(1, 7):
        assert search.count_colorings(cells, q) == (q - 1) ** 4 + (q - 1)


def test_limit_short_circuits():
    cells = list(BoxRegion.box(3, 2).cells())
    assert search.count_colorings(cells, 3, limit=5) == 5
    assert search.count_colorings(cells, 3, limit=1) == 1


def test_fixed_conflicts_and_overlap():
    assert search.count_colorings([(5, 5)], 3,
                                  fixed={(0, 0): 1, (0, 1): 1}) == 0
    assert search.find_coloring([(5, 5)], 3,
                                fixed={(0, 0): 1, (0, 1): 1}) is None
    with pytest.raises(ValueError):
        search.count_colorings([(0, 0)], 3, fixed={(0, 0): 1})


def test_find_coloring_lex_least():
    cells = [(0,), (1,), (2,)]
    sol = search.find_coloring(cells, 3)
    assert [sol[c] for c in cells] == [0, 1, 0]


def test_find_coloring_respects_lists_and_fixed():
    cells = [(0, 0), (0, 1)]
    lists = {(0, 0): {2}, (0, 1): {2, 3}}
    sol = search.find_coloring(cells, lists=lists)
    assert sol == {(0, 0): 2, (0, 1): 3}
    sol = search.find_coloring(cells, 4, fixed={(0, 2): 0, (1, 0): 0})
    assert sol[(0, 1)] != 0 and sol[(0, 0)] != 0


def test_rng_solutions_are_valid_and_seed_stable():
    cells = list(BoxRegion.box(3, 2).cells())
    a = search.find_coloring(cells, 4, rng=random.Random(9))
    b = search.find_coloring(cells, 4, rng=random.Random(9))
    assert a == b
    assert all(a[v] != a[w] for v in a for w in zd_neighbors(v) if w in a)


def test_iter_matches_count():
    cells = list(BoxRegion.box(2, 2).cells())
    tuples = list(search.iter_color_tuples(cells, 3))
    assert len(tuples) == search.count_colorings(cells, 3) == 18
    assert len(set(tuples)) == 18


def test_empty_cellset():
    assert search.count_colorings([], 3) == 1
    assert search.find_coloring([], 3) == {}
    assert list(search.iter_color_tuples([], 3)) == [()]


small_cells = st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                      min_size=1, max_size=5)


@settings(max_examples=60, deadline=None)
@given(small_cells, st.integers(2, 4), st.randoms(use_true_random=False))
def test_count_agrees_with_naive_product_scan(cells, q, rng):
    ring = sorted(external_boundary_sample(cells, rng, q))
    fixed = {v: c for v, c in ring}
    assert search.count_colorings(cells, q, fixed=fixed) == \
        naive_count(cells, q, fixed=fixed)


def external_boundary_sample(cells, rng, q):
    from gridcolor.lattice import external_boundary
    ring = sorted(external_boundary(cells))
    take = rng.sample(ring, k=min(3, len(ring)))
    return [(v, rng.randrange(q)) for v in take]


@settings(max_examples=40, deadline=None)
@given(small_cells, st.integers(2, 4), st.randoms(use_true_random=False))
def test_count_agrees_with_naive_on_lists(cells, q, rng):
    lists = {v: frozenset(rng.sample(range(q + 1), k=rng.randint(1, q)))
             for v in cells}
    assert search.count_colorings(cells, lists=lists) == \
        naive_count(cells, 0, lists=lists)
