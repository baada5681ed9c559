"""Frozen colorings: rigid proper colorings of Z^d and certificates.

A proper q-coloring x of Z^d is *frozen on F* when the only proper
assignment to F that agrees with x off F is x itself, and *frozen* when
that holds for every finite F.  With few colors rigidity is easy to
manufacture: the linear rule x_i = sum_k k*i_k mod (d+1) is frozen, and
one extra weight repetition per added dimension (folding the last two
coordinates) carries it to higher d without adding colors.  With
q = 2d+1 colors the same weights make every *single site* frozen while
larger patches stay movable.

In the other direction, an edge-counting certificate shows when no
q-coloring at all can be frozen on a finite set F: every vertex of F
lies in q-1 two-color classes, each class component containing it can
be swapped unless it leaves F, and there are too few edges available
for all those escapes once (q-1)|F| exceeds the number of edges
touching F.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from . import search
from .lattice import (BoxRegion, Coordinate, PartialColoring, ProperColoring,
                      edge_counts, external_boundary, zd_neighbors)


@dataclass(frozen=True)
class LinearColoringRule:
    """x_i = (offset + sum_k weights[k] * i_k) mod q on all of Z^d.

    Any weight vector with all entries nonzero mod q gives a proper
    coloring (adjacent values differ by a nonzero weight).
    """

    d: int
    q: int
    weights: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.d < 1 or self.q < 2:
            raise ValueError("need d >= 1 and q >= 2")
        if len(self.weights) != self.d:
            raise ValueError("need one weight per dimension")
        if any(w % self.q == 0 for w in self.weights):
            raise ValueError("zero weight mod q breaks propriety")

    def color(self, v: Coordinate) -> int:
        return (self.offset + sum(w * x for w, x in zip(self.weights, v))) % self.q


@dataclass(frozen=True)
class LiftedColoringRule:
    """A rule on Z^(r+folds) obtained by repeatedly folding coordinates.

    One fold sends the coloring x of Z^r to y on Z^(r+1) with
    y_(i_1..i_(r+1)) = x_(i_1..i_(r-1), i_r + i_(r+1)); `folds` many
    steps collapse the trailing coordinates to their sum.  Folding
    preserves propriety and frozenness but keeps q fixed.
    """

    base: "LinearColoringRule | LiftedColoringRule"
    folds: int

    def __post_init__(self):
        if self.folds < 1:
            raise ValueError("folds must be >= 1 (use the base rule directly)")

    @property
    def d(self) -> int:
        return self.base.d + self.folds

    @property
    def q(self) -> int:
        return self.base.q

    def color(self, v: Coordinate) -> int:
        r = self.base.d
        return self.base.color(v[:r - 1] + (sum(v[r - 1:]),))


@dataclass(frozen=True)
class ShiftedRule:
    """The translate x' with x'_i = x_(i + shift)."""

    base: object
    shift: Coordinate

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def q(self) -> int:
        return self.base.q

    def color(self, v: Coordinate) -> int:
        return self.base.color(tuple(a + s for a, s in zip(v, self.shift)))


def canonical_frozen(d: int) -> LinearColoringRule:
    """The frozen (d+1)-coloring with weights (1, ..., d)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return LinearColoringRule(d, d + 1, tuple(range(1, d + 1)))


def single_site_frozen(d: int) -> LinearColoringRule:
    """The (2d+1)-coloring with weights (1, ..., d): every singleton is frozen.

    The 2d neighbors of any site realize colors x_i +- k for k = 1..d,
    which exhaust the 2d colors other than x_i.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    return LinearColoringRule(d, 2 * d + 1, tuple(range(1, d + 1)))


def lift_frozen(rule, target_d: int):
    """Lift a rule on Z^r to Z^target_d by coordinate folding.

    target_d == r returns the rule unchanged; target_d < r is an error.
    """
    if target_d < rule.d:
        raise ValueError(f"cannot lift from d={rule.d} down to d={target_d}")
    if target_d == rule.d:
        return rule
    return LiftedColoringRule(rule, target_d - rule.d)


def coloring_from_rule(rule, region: BoxRegion) -> ProperColoring:
    """Evaluate a rule on a box window."""
    if region.d != rule.d:
        raise ValueError(f"rule has d={rule.d}, window has d={region.d}")
    return ProperColoring(region, rule.q,
                          tuple(rule.color(v) for v in region.cells()))


def is_frozen_on(c: ProperColoring, F: Iterable[Coordinate],
                 q: int | None = None) -> bool:
    """Is c frozen on F within its window?

    Decides by exhaustive backtracking whether the only proper assignment
    to F from {0..q-1} that agrees with c off F is c|_F itself.  F and its
    external boundary must lie inside the window so the surrounding colors
    are fully determined.
    """
    F = frozenset(map(tuple, F))
    if not F:
        raise ValueError("F must be nonempty")
    q = c.q if q is None else q
    region = c.region
    for v in F:
        if v not in region:
            raise ValueError(f"cell {v} of F outside the window {region}")
    boundary = external_boundary(F)
    for v in boundary:
        if v not in region:
            raise ValueError(
                f"F touches the window edge: boundary cell {v} outside {region}")
    if any(c.color(v) >= q for v in F):
        raise ValueError(f"window colors on F exceed q={q}")
    fixed = {v: c.color(v) for v in boundary}
    count = search.count_colorings(F, q, fixed=fixed, limit=2)
    assert count >= 1, "c itself must be a solution"
    return count == 1


def frozen_obstruction(F: Iterable[Coordinate], q: int, d: int) -> bool:
    """Edge-count certificate that no q-coloring of Z^d is frozen on F.

    True when (q-1)|F| > |E_F| + |E(F, Z^d \\ F)|: more two-color classes
    meet F than there are edges to carry them, so some class component is
    contained in F and can be swapped.  False is inconclusive.
    """
    F = frozenset(map(tuple, F))
    if not F:
        raise ValueError("F must be nonempty")
    if any(len(v) != d for v in F):
        raise ValueError(f"coordinates of F must have dimension d={d}")
    if q < 2:
        raise ValueError("q must be >= 2")
    internal, crossing = edge_counts(F)
    return (q - 1) * len(F) > internal + crossing


@dataclass(frozen=True)
class KempeComponent:
    """A connected component of the subgraph induced by two color classes."""

    color_pair: tuple[int, int]
    vertices: frozenset[Coordinate]
    edges: frozenset[frozenset]


def kempe_components(c, color_pair, subgraph=None) -> list[KempeComponent]:
    """Components of the two-colored subgraph of c, smallest vertex first.

    By default the graph is the coloring's window with lattice adjacency.
    `subgraph` = (vertices, edges) restricts to an explicit subgraph, e.g.
    the edges within F plus those from F to its boundary when mirroring
    the obstruction argument.
    """
    i, j = color_pair
    if i == j:
        raise ValueError("color pair must be two distinct colors")
    pair = (min(i, j), max(i, j))
    if isinstance(c, ProperColoring):
        colored = c.as_dict()
    elif isinstance(c, PartialColoring):
        colored = dict(c.assignment)
    else:
        raise TypeError(f"expected a coloring, got {type(c).__name__}")
    if subgraph is None:
        verts = {v for v, col in colored.items() if col in pair}
        adj = {v: [w for w in zd_neighbors(v) if w in verts and w in c.region]
               for v in verts}
    else:
        sub_v, sub_e = subgraph
        verts = {v for v in map(tuple, sub_v)
                 if colored.get(v) in pair}
        adj = {v: [] for v in verts}
        for e in sub_e:
            u, w = tuple(e)
            u, w = tuple(u), tuple(w)
            if u in verts and w in verts:
                adj[u].append(w)
                adj[w].append(u)
    out = []
    seen = set()
    for start in sorted(verts):
        if start in seen:
            continue
        comp = {start}
        queue = [start]
        edges = set()
        while queue:
            v = queue.pop()
            for w in adj[v]:
                edges.add(frozenset((v, w)))
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        out.append(KempeComponent(pair, frozenset(comp), frozenset(edges)))
    return out


def kempe_swap(c, component: KempeComponent):
    """Exchange the two colors on a component; involution.

    For components maximal in the window graph the result is again proper.
    """
    i, j = component.color_pair
    if isinstance(c, ProperColoring):
        colors = list(c.colors)
        for v in component.vertices:
            cur = c.color(v)
            if cur not in (i, j):
                raise ValueError(f"cell {v} has color {cur}, not in {i, j}")
            colors[c.region.index(v)] = j if cur == i else i
        return ProperColoring(c.region, c.q, tuple(colors))
    if isinstance(c, PartialColoring):
        assignment = dict(c.assignment)
        for v in component.vertices:
            cur = assignment.get(v)
            if cur not in (i, j):
                raise ValueError(f"cell {v} has color {cur}, not in {i, j}")
            assignment[v] = j if cur == i else i
        return PartialColoring(c.region, c.q, assignment)
    raise TypeError(f"expected a coloring, got {type(c).__name__}")


def find_single_site_rule(d: int, q: int,
                          check_window: int = 2) -> LinearColoringRule | None:
    """Search for a linear rule whose q-coloring has every singleton frozen.

    A singleton {v} is frozen under a linear rule exactly when the residues
    {+-w_1, ..., +-w_d} cover all of {1, ..., q-1} mod q, so a weight
    search settles existence within this family; each hit is re-verified
    on a window with the exhaustive oracle.  Needs 2 <= q <= 2d+1.
    """
    if not 2 <= q <= 2 * d + 1:
        raise ValueError(f"single-site freezing needs 2 <= q <= 2d+1, got q={q}")
    want = set(range(1, q))
    for weights in product(range(1, q), repeat=d):
        covered = {w % q for w in weights} | {(-w) % q for w in weights}
        if covered != want:
            continue
        rule = LinearColoringRule(d, q, weights)
        window = coloring_from_rule(rule, BoxRegion.centered(check_window, d))
        center = (0,) * d
        if is_frozen_on(window, {center}, q):
            return rule
    return None
