import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridcolor.lattice import (BoxRegion, PartialColoring, ProperColoring,
                               coloring_from_json, coloring_to_json,
                               edge_counts, external_boundary, is_proper,
                               load_coloring, neighbors, render_ascii,
                               render_pgm, save_coloring, zd_neighbors)


def test_zd_neighbors_order_and_count():
    assert zd_neighbors((0,)) == [(1,), (-1,)]
    got = zd_neighbors((2, 5))
    assert got == [(3, 5), (2, 6), (1, 5), (2, 4)]
    assert len(zd_neighbors((0, 0, 0, 0))) == 8


def test_box_constructors():
    b = BoxRegion.box(3, 2)
    assert (b.low, b.high) == ((1, 1), (3, 3))
    c = BoxRegion.centered(2, 3)
    assert (c.low, c.high) == ((-2, -2, -2), (2, 2, 2))
    assert b.size == 9 and c.size == 125
    assert b.shape == (3, 3)
    with pytest.raises(ValueError):
        BoxRegion((0, 0), (1,))
    with pytest.raises(ValueError):
        BoxRegion((2,), (1,))


def test_cells_row_major_last_coordinate_fastest():
    b = BoxRegion((0, 0), (1, 1))
    assert list(b.cells()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    for i, v in enumerate(b.cells()):
        assert b.index(v) == i


def test_membership_and_neighbors():
    b = BoxRegion.box(3, 2)
    assert (1, 1) in b and (0, 1) not in b
    assert set(neighbors(b, (1, 1))) == {(2, 1), (1, 2)}
    assert set(neighbors(b, (2, 2))) == {(1, 2), (3, 2), (2, 1), (2, 3)}
    with pytest.raises(ValueError):
        neighbors(b, (0, 0))


def test_boundary_and_edge_counts_small_boxes():
    cells2 = set(BoxRegion.box(2, 2).cells())
    ring = external_boundary(cells2)
    assert len(ring) == 8
    assert ring.isdisjoint(cells2)
    assert edge_counts(cells2) == (4, 8)
    cells3 = set(BoxRegion.box(3, 2).cells())
    assert edge_counts(cells3) == (12, 12)


coords = st.integers(-3, 3)
cell_sets = st.sets(
    st.tuples(coords, coords), min_size=1, max_size=12)


@given(cell_sets)
def test_external_boundary_is_adjacent_and_disjoint(cells):
    ring = external_boundary(cells)
    assert ring.isdisjoint(cells)
    for w in ring:
        assert any(nb in cells for nb in zd_neighbors(w))
    # and nothing adjacent is missing
    for v in cells:
        for nb in zd_neighbors(v):
            assert nb in cells or nb in ring


@given(cell_sets)
def test_edge_counts_degree_sum_identity(cells):
    internal, crossing = edge_counts(cells)
    d = len(next(iter(cells)))
    assert 2 * internal + crossing == 2 * d * len(cells)


@given(cell_sets)
def test_edge_counts_within_window(cells):
    window = BoxRegion((-3, -3), (3, 3))
    internal, crossing = edge_counts(cells, within=window)
    naive_crossing = sum(1 for v in cells for w in zd_neighbors(v)
                         if w not in cells and w in window)
    assert crossing == naive_crossing


def test_proper_coloring_validation():
    b = BoxRegion.box(2, 2)
    c = ProperColoring(b, 3, (0, 1, 1, 0))
    assert is_proper(c)
    bad = ProperColoring(b, 3, (0, 0, 1, 2))
    assert not is_proper(bad)
    with pytest.raises(ValueError):
        ProperColoring(b, 3, (0, 1, 2))      # wrong length
    with pytest.raises(ValueError):
        ProperColoring(b, 3, (0, 1, 3, 0))   # color out of range


def test_proper_coloring_accessors():
    b = BoxRegion.box(2, 2)
    c = ProperColoring(b, 4, (0, 1, 2, 3))
    assert c.color((1, 2)) == 1
    assert c.as_dict()[(2, 1)] == 2
    r = c.restrict([(1, 1), (2, 2)])
    assert r.assignment == {(1, 1): 0, (2, 2): 3}
    c2 = c.with_color((1, 1), 3)
    assert c2.color((1, 1)) == 3 and c.color((1, 1)) == 0
    again = ProperColoring.from_dict(b, 4, c.as_dict())
    assert again == c


def test_partial_coloring_validation_and_merge():
    b = BoxRegion.box(3, 2)
    p = PartialColoring(b, 3, {(1, 1): 0, (3, 3): 2})
    assert p.support == {(1, 1), (3, 3)}
    assert p.color((2, 2)) is None
    q = p.merged({(2, 2): 1})
    assert q.color((2, 2)) == 1 and p.color((2, 2)) is None
    with pytest.raises(ValueError):
        PartialColoring(b, 3, {(0, 0): 1})   # outside region
    with pytest.raises(ValueError):
        PartialColoring(b, 3, {(1, 1): 3})   # color too big
    improper = PartialColoring(b, 3, {(1, 1): 0, (1, 2): 0})
    assert not is_proper(improper)


def test_json_round_trip(tmp_path):
    b = BoxRegion.box(2, 3)
    c = ProperColoring(b, 4, tuple(sum(v) % 4 for v in b.cells()))
    assert coloring_from_json(coloring_to_json(c)) == c
    p = PartialColoring(b, 4, {(1, 1, 2): 3})
    assert coloring_from_json(coloring_to_json(p)) == p
    path = tmp_path / "c.json"
    save_coloring(c, path)
    assert load_coloring(path) == c
    # the file really is plain JSON
    json.loads(path.read_text())


def test_render_ascii():
    b = BoxRegion.box(2, 2)
    c = ProperColoring(b, 3, (0, 1, 2, 0))
    assert render_ascii(c) == "01\n20"
    p = PartialColoring(b, 3, {(1, 2): 1})
    assert render_ascii(p) == ".1\n.."
    with pytest.raises(ValueError):
        render_ascii(ProperColoring(BoxRegion.box(2, 3), 2,
                                    tuple(sum(v) % 2 for v in
                                          BoxRegion.box(2, 3).cells())))


def test_render_pgm():
    b = BoxRegion.box(2, 2)
    c = ProperColoring(b, 3, (0, 1, 2, 0))
    lines = render_pgm(c).splitlines()
    assert lines[0] == "P2"
    assert lines[1] == "2 2"
    assert lines[2] == "255"
    assert lines[3].split() == ["0", "127"]
    assert lines[4].split() == ["255", "0"]


@settings(max_examples=50)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(2, 5),
       st.randoms(use_true_random=False))
def test_random_dense_colorings_survive_round_trips(n, d, q, rng):
    b = BoxRegion.box(n, d)
    colors = tuple(rng.randrange(q) for _ in range(b.size))
    c = ProperColoring(b, q, colors)
    assert coloring_from_json(coloring_to_json(c)) == c
    assert list(c.as_dict().values()) == list(colors)
