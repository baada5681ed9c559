"""Exhaustive backtracking over colorings of finite cell sets.

The workhorse behind the brute-force oracles and solver fallbacks: plain
depth-first search over cells in a fixed order, with color sets kept as
bitmasks.  No cleverness beyond forward pruning -- the point is that this
code is simple enough to trust.

Cells are Z^d coordinates (tuples); adjacency is lattice adjacency.
Constraints come from `fixed` (colors of cells outside the search set,
typically a boundary) and optionally per-cell `lists` of allowed colors.
Colors must be < 63 so they fit the masks.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .lattice import Coordinate, zd_neighbors


def _prepare(cells, q=None, fixed=None, lists=None):
    order = sorted(set(map(tuple, cells)))
    fixed = {tuple(v): c for v, c in (fixed or {}).items()}
    overlap = [v for v in order if v in fixed]
    if overlap:
        raise ValueError(f"cell {overlap[0]} is both free and fixed")
    # an improper fixed assignment has no proper completions at all
    feasible = all(fixed.get(w) != c
                   for v, c in fixed.items() for w in zd_neighbors(v))
    index = {v: i for i, v in enumerate(order)}
    base = []
    for v in order:
        if lists is not None:
            mask = 0
            for c in lists[v]:
                if c < 0 or c >= 63:
                    raise ValueError(f"color {c} out of mask range")
                mask |= 1 << c
        else:
            if q is None:
                raise ValueError("need q when no lists are given")
            if q >= 63:
                raise ValueError(f"q={q} out of mask range")
            mask = (1 << q) - 1
        base.append(mask)
    prev = [[] for _ in order]
    for i, v in enumerate(order):
        for w in zd_neighbors(v):
            j = index.get(w)
            if j is not None:
                if j < i:
                    prev[i].append(j)
            elif w in fixed:
                base[i] &= ~(1 << fixed[w])
    return order, prev, base, feasible


def _run(order, prev, base, limit=None, collect=None):
    """Count leaves of the DFS; optionally append each solution tuple."""
    n = len(order)
    if n == 0:
        if collect is not None:
            collect.append(())
        return 1
    colors = [0] * n
    avail = [0] * n
    avail[0] = base[0]
    total = 0
    k = 0
    last = n - 1
    while k >= 0:
        m = avail[k]
        if m == 0:
            k -= 1
            continue
        c = (m & -m).bit_length() - 1
        avail[k] = m & (m - 1)
        colors[k] = c
        if k == last:
            total += 1
            if collect is not None:
                collect.append(tuple(colors))
            if limit is not None and total >= limit:
                return total
        else:
            k += 1
            mm = base[k]
            for j in prev[k]:
                mm &= ~(1 << colors[j])
            avail[k] = mm
    return total


def count_colorings(cells: Iterable[Coordinate], q: int | None = None,
                    fixed: Mapping[Coordinate, int] | None = None,
                    lists=None, limit: int | None = None) -> int:
    """Number of proper colorings of `cells` (early exit at `limit`)."""
    order, prev, base, feasible = _prepare(cells, q, fixed, lists)
    if not feasible:
        return 0
    return _run(order, prev, base, limit=limit)


def find_coloring(cells: Iterable[Coordinate], q: int | None = None,
                  fixed: Mapping[Coordinate, int] | None = None,
                  lists=None, rng=None) -> dict[Coordinate, int] | None:
    """One proper coloring as a dict, or None if none exists.

    With an rng, per-cell color order is shuffled, giving a seed-dependent
    (but deterministic) solution; without one, the lexicographically least
    solution is returned.
    """
    order, prev, base, feasible = _prepare(cells, q, fixed, lists)
    if not feasible:
        return None
    n = len(order)
    if n == 0:
        return {}
    if rng is None:
        sols: list = []
        got = _run(order, prev, base, limit=1, collect=sols)
        return dict(zip(order, sols[0])) if got else None
    # shuffled-value DFS
    choice_lists = []
    for mask in base:
        opts = [c for c in range(mask.bit_length()) if (mask >> c) & 1]
        choice_lists.append(opts)
    colors = [0] * n
    iters: list = [None] * n
    k = 0
    opts = list(choice_lists[0])
    rng.shuffle(opts)
    iters[0] = iter(opts)
    while k >= 0:
        banned = 0
        for j in prev[k]:
            banned |= 1 << colors[j]
        step = None
        for c in iters[k]:
            if not (banned >> c) & 1:
                step = c
                break
        if step is None:
            k -= 1
            continue
        colors[k] = step
        if k == n - 1:
            return dict(zip(order, colors))
        k += 1
        opts = list(choice_lists[k])
        rng.shuffle(opts)
        iters[k] = iter(opts)
    return None


def iter_color_tuples(cells: Iterable[Coordinate], q: int | None = None,
                      fixed: Mapping[Coordinate, int] | None = None,
                      lists=None) -> Iterator[tuple[int, ...]]:
    """All proper colorings as tuples aligned with sorted(cells).

    Generator variant of count_colorings, for callers that stream states.
    """
    order, prev, base, feasible = _prepare(cells, q, fixed, lists)
    if not feasible:
        return
    n = len(order)
    if n == 0:
        yield ()
        return
    colors = [0] * n
    avail = [0] * n
    avail[0] = base[0]
    k = 0
    last = n - 1
    while k >= 0:
        m = avail[k]
        if m == 0:
            k -= 1
            continue
        c = (m & -m).bit_length() - 1
        avail[k] = m & (m - 1)
        colors[k] = c
        if k == last:
            yield tuple(colors)
        else:
            k += 1
            mm = base[k]
            for j in prev[k]:
                mm &= ~(1 << colors[j])
            avail[k] = mm
