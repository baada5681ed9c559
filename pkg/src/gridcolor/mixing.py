"""Mixing-property diagnostics: forcing witnesses and move graphs.

Fillability of every boundary gives strong mixing; this module builds
the explicit configurations showing where mixing *fails* and explores
single-move graphs on enumerable state spaces.

For d+2 <= q <= 2d the tube witness pins an infinite line: color the
neighbors of the e_1-axis with (m + t) mod (q-2) and everything else by
parity with the two remaining colors.  The tube neighbors of an axis
site exhaust colors {0..q-3}, so once one axis site is known the whole
axis alternates deterministically between q-2 and q-1 -- two colorings
agreeing on the tube but differing on the axis can never be bridged, no
matter how far apart the disagreement sites are.

For q <= d+1 frozen rules refuse even single-site mixing: the boundary
of B_n admits exactly one filling, so no filling can match an
alternative color at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import search
from .frozen import ShiftedRule, canonical_frozen, lift_frozen
from .lattice import (BoxRegion, Coordinate, PartialColoring,
                      external_boundary, zd_neighbors)


@dataclass(frozen=True)
class AxisTubeRule:
    """The tube construction: agree on the axis boundary, alternate off it.

    Unit vectors are indexed e_1..e_2d with e_(2d-i+1) = -e_i; tube cells
    m e_1 + e_t (2 <= t <= 2d-1) get (m + t) mod (q-2); everything else
    takes q-2 on odd and q-1 on even coordinate sums -- or swapped, which
    produces the partner coloring.
    """

    d: int
    q: int
    swapped: bool = False

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("the tube construction needs d >= 2")
        if self.q < 4:
            raise ValueError("needs q >= 4 so adjacent tube colors differ")

    def tube_index(self, v: Coordinate) -> int | None:
        """t with v = m e_1 + e_t, or None when v is not a tube cell."""
        tail = v[1:]
        nonzero = [k for k, x in enumerate(tail, start=2) if x != 0]
        if len(nonzero) != 1:
            return None
        k = nonzero[0]
        x = tail[k - 2]
        if x == 1:
            return k
        if x == -1:
            return 2 * self.d - k + 1
        return None

    def color(self, v: Coordinate) -> int:
        t = self.tube_index(v)
        if t is not None:
            return (v[0] + t) % (self.q - 2)
        if sum(v) % 2 == 1:
            return self.q - 2 if not self.swapped else self.q - 1
        return self.q - 1 if not self.swapped else self.q - 2


@dataclass(frozen=True)
class MixingWitness:
    """A pair of colorings with sets certifying a mixing failure.

    kind "tssm": x and y agree on the tube S (any window) and on U = {0}
    but are forced apart along the axis, so V = {n e_1} works for every n.
    kind "si": x is frozen, U = boundary of B_n, V = {0}, and y differs
    from x at the origin.
    """

    kind: str
    d: int
    q: int
    x_rule: object
    y_rule: object
    U: frozenset[Coordinate]
    V: frozenset[Coordinate] | None = None
    n: int | None = None

    def agreement_set(self, region: BoxRegion) -> frozenset[Coordinate]:
        """Cells of the region where agreement is part of the certificate."""
        if self.kind != "tssm":
            return frozenset()
        x = self.x_rule
        return frozenset(v for v in region.cells()
                         if x.tube_index(v) is not None)


def tssm_witness(d: int, q: int, check_range: bool = True) -> MixingWitness:
    """The tube configuration witnessing a strong-mixing failure.

    The intended range is d+2 <= q <= 2d (set check_range=False to build
    the same configuration outside it, e.g. to watch the forcing argument
    break down at q = 2d+1).
    """
    if check_range and not d + 2 <= q <= 2 * d:
        raise ValueError(f"tube witness needs d+2 <= q <= 2d (got d={d}, q={q})")
    x = AxisTubeRule(d, q, swapped=False)
    y = AxisTubeRule(d, q, swapped=True)
    return MixingWitness("tssm", d, q, x, y, U=frozenset({(0,) * d}))


def _propagate_forced(window: BoxRegion, q: int,
                      fixed: dict[Coordinate, int]) -> dict[Coordinate, set]:
    """Unit-propagate: repeatedly strike forced neighbor colors.

    Domains start at the full palette (or the fixed singleton); any cell
    whose domain is a singleton deletes that color from its neighbors.
    The fixpoint under-approximates forcing, which is all the certificate
    needs.
    """
    domains = {v: {fixed[v]} if v in fixed else set(range(q))
               for v in window.cells()}
    queue = [v for v in domains if len(domains[v]) == 1]
    while queue:
        v = queue.pop()
        c = next(iter(domains[v]))
        for w in zd_neighbors(v):
            dom = domains.get(w)
            if dom is not None and c in dom:
                dom.discard(c)
                if len(dom) == 1:
                    queue.append(w)
                if not dom:
                    raise ValueError(f"contradiction at {w}")
    return domains


def verify_forcing(witness: MixingWitness, window_radius: int) -> bool:
    """Does fixing x on tube+origin force x along the whole axis?

    Runs unit propagation on the window B_R and checks every axis cell
    with |m| <= R-1 ends forced to its x color.  True confirms the
    mixing failure at every gap up to the window; False (e.g. when q
    exceeds 2d and the tube no longer exhausts q-2 colors) reports the
    first unforced cell via the companion forcing_report.
    """
    ok, _ = forcing_report(witness, window_radius)
    return ok


def forcing_report(witness: MixingWitness,
                   window_radius: int) -> tuple[bool, Coordinate | None]:
    if witness.kind != "tssm":
        raise ValueError("forcing check applies to tube witnesses")
    if window_radius < 2:
        raise ValueError("window radius must be >= 2")
    d, q, x = witness.d, witness.q, witness.x_rule
    window = BoxRegion.centered(window_radius, d)
    fixed = {v: x.color(v) for v in witness.agreement_set(window)}
    for v in witness.U:
        fixed[v] = x.color(v)
    domains = _propagate_forced(window, q, fixed)
    for m in range(-(window_radius - 1), window_radius):
        v = (m,) + (0,) * (d - 1)
        if domains[v] != {x.color(v)}:
            return False, v
    return True, None


def axis_forcing_oracle(d: int, q: int, radius: int = 3) -> bool:
    """Brute-force cross-check of the forcing claim on a small window.

    Enumerates every assignment to the free axis cells of B_radius and
    asks the exhaustive solver whether it extends to a proper coloring
    of the window consistent with x on tube+origin.  Exactly the x-axis
    pattern should survive; True means every consistent coloring of the
    window matches x along the axis.
    """
    from itertools import product
    x = AxisTubeRule(d, q)
    window = BoxRegion.centered(radius, d)
    tube = {v: x.color(v) for v in window.cells() if x.tube_index(v) is not None}
    origin = (0,) * d
    tube[origin] = x.color(origin)
    axis = [(m,) + (0,) * (d - 1) for m in range(-radius, radius + 1) if m != 0]
    rest = [v for v in window.cells() if v not in tube and v not in set(axis)]
    expected = tuple(x.color(v) for v in axis)
    survivors = []
    for pattern in product(range(q), repeat=len(axis)):
        fixed = dict(tube)
        fixed.update(zip(axis, pattern))
        if search.find_coloring(rest, q, fixed=fixed) is not None:
            survivors.append(pattern)
            if len(survivors) > 1:
                return False
    return survivors == [expected]


def si_violation_witness(d: int, q: int, n: int) -> MixingWitness:
    """Frozen-rule witness that single-site mixing fails for q <= d+1.

    x is the frozen rule lifted to Z^d, y its e_1 translate (so y differs
    from x at the origin -- no proper coloring differs from a frozen one
    on a finite patch, so a translate is the honest choice).  U is the
    boundary of B_n and V = {0}: the unique filling of U forces x at 0.
    """
    if not 2 <= q <= d + 1:
        raise ValueError(f"frozen rules need 2 <= q <= d+1 (got d={d}, q={q})")
    if n < 1:
        raise ValueError("n must be >= 1")
    x = lift_frozen(canonical_frozen(q - 1), d)
    y = ShiftedRule(x, (1,) + (0,) * (d - 1))
    origin = (0,) * d
    assert y.color(origin) != x.color(origin)
    U = external_boundary(BoxRegion.centered(n, d).cells())
    return MixingWitness("si", d, q, x, y, U=frozenset(U),
                         V=frozenset({origin}), n=n)


def count_boundary_fillings(witness: MixingWitness,
                            limit: int | None = None) -> int:
    """Number of proper fillings of B_n consistent with x on U = its boundary."""
    if witness.kind != "si":
        raise ValueError("filling count applies to the frozen witness")
    box = BoxRegion.centered(witness.n, witness.d)
    fixed = {v: witness.x_rule.color(v) for v in witness.U}
    return search.count_colorings(box.cells(), witness.q, fixed=fixed,
                                  limit=limit)


# --- move graphs ------------------------------------------------------------

@dataclass(frozen=True)
class MoveGraphReport:
    move_kind: str
    state_count: int
    component_count: int
    largest_component: int
    diameter_bound: int | None = None


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a):
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def _parse_kind(kind: str) -> tuple[str, int | None]:
    if kind == "pivot":
        return "pivot", 1
    if kind == "kempe":
        return "kempe", None
    if kind.startswith("npivot:"):
        try:
            N = int(kind.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad move kind {kind!r}") from None
        if N < 1:
            raise ValueError("npivot window must be >= 1")
        return "npivot", N
    raise ValueError(f"unknown move kind {kind!r}; "
                     "use pivot, npivot:N or kempe")


def move_graph(box: BoxRegion, boundary: PartialColoring | None, q: int,
               kind: str = "pivot", max_states: int = 1_000_000,
               diameter_cap: int = 20_000) -> MoveGraphReport:
    """Connectivity of proper colorings of a box under a move family.

    States are all proper colorings of the box consistent with the fixed
    boundary (or free).  pivot recolors one cell; npivot:N recolors any
    subset of a translate of [N]^d lying in the box; kempe swaps a
    two-color component that stays compatible with the boundary.  States
    differing on a common erased window are mutually reachable in one
    move, so pivot/npivot components come from grouping by erased keys;
    kempe components by explicit swaps.

    A 2x(BFS eccentricity) diameter bound is included when the largest
    component is at most diameter_cap states (pivot/npivot only).
    """
    family, N = _parse_kind(kind)
    cells = sorted(box.cells())
    d = box.d
    if family == "npivot" and any(N > s for s in box.shape):
        raise ValueError(f"npivot window {N} exceeds the box {box}")
    fixed = dict(boundary.assignment) if boundary is not None else None
    if fixed:
        stray = set(fixed) & set(cells)
        if stray:
            raise ValueError(f"boundary assigns interior cell {min(stray)}")

    bits = max((q - 1).bit_length(), 1)
    states: list[tuple[int, ...]] = []
    state_keys: list[int] = []
    index: dict[int, int] = {}
    for tup in search.iter_color_tuples(cells, q, fixed=fixed):
        if len(states) >= max_states:
            raise ValueError(
                f"state space exceeds the cap of {max_states} states")
        key = 0
        for c in tup:
            key = (key << bits) | c
        index[key] = len(states)
        state_keys.append(key)
        states.append(tup)
    m = len(states)
    if m == 0:
        return MoveGraphReport(kind, 0, 0, 0, 0)

    dsu = _DSU(m)
    cell_index = {v: i for i, v in enumerate(cells)}

    def keys_of(tup):
        key = 0
        for c in tup:
            key = (key << bits) | c
        return key

    if family in ("pivot", "npivot"):
        windows: list[list[int]] = []
        if family == "pivot":
            windows = [[i] for i in range(len(cells))]
        else:
            lows = [range(a, b - N + 2)
                    for a, b in zip(box.low, box.high)]
            from itertools import product as iproduct
            for corner in iproduct(*lows):
                win = BoxRegion(corner, tuple(x + N - 1 for x in corner))
                windows.append([cell_index[v] for v in win.cells()])
        ncells = len(cells)
        for win in windows:
            erase = 0
            for i in win:
                shift = (ncells - 1 - i) * bits
                erase |= ((1 << bits) - 1) << shift
            keep = ~erase
            groups: dict[int, int] = {}
            setdefault = groups.setdefault
            union = dsu.union
            for si, key in enumerate(state_keys):
                first = setdefault(key & keep, si)
                if first != si:
                    union(first, si)
    else:  # kempe
        adj = [[cell_index[w] for w in zd_neighbors(v) if w in cell_index]
               for v in cells]
        fixed_neighbors = [[(fixed or {}).get(w) for w in zd_neighbors(v)
                            if w not in cell_index and (fixed or {}).get(w) is not None]
                           for v in cells]
        for si, tup in enumerate(states):
            for nb in _kempe_neighbors(tup, q, adj, fixed_neighbors):
                sj = index.get(keys_of(nb))
                if sj is not None:
                    dsu.union(si, sj)

    roots: dict[int, int] = {}
    for si in range(m):
        r = dsu.find(si)
        roots[r] = roots.get(r, 0) + 1
    largest = max(roots.values())
    diameter_bound = None
    if family in ("pivot", "npivot") and largest <= diameter_cap:
        diameter_bound = _diameter_bound(states, index, cells, box, q, bits,
                                         N, dsu, roots)
    return MoveGraphReport(kind, m, len(roots), largest, diameter_bound)


def _kempe_neighbors(tup, q, adj, fixed_neighbors):
    """States reachable by one boundary-compatible two-color swap."""
    n = len(tup)
    for a, b in combinations(range(q), 2):
        cells_ab = [i for i in range(n) if tup[i] in (a, b)]
        if not cells_ab:
            continue
        seen = set()
        members = set(cells_ab)
        for start in cells_ab:
            if start in seen:
                continue
            comp = {start}
            queue = [start]
            while queue:
                i = queue.pop()
                for j in adj[i]:
                    if j in members and j not in comp:
                        comp.add(j)
                        queue.append(j)
            seen |= comp
            swapped = list(tup)
            ok = True
            for i in comp:
                c = a if tup[i] == b else b
                if c in fixed_neighbors[i]:
                    ok = False
                    break
                swapped[i] = c
            if ok and tuple(swapped) != tup:
                yield tuple(swapped)


def _diameter_bound(states, index, cells, box, q, bits, N, dsu, roots):
    """2 * max BFS eccentricity over one BFS per component."""
    from collections import deque
    ncells = len(cells)
    cell_index = {v: i for i, v in enumerate(cells)}
    windows = []
    if N == 1:
        windows = [[i] for i in range(ncells)]
    else:
        from itertools import product as iproduct
        lows = [range(a, b - N + 2) for a, b in zip(box.low, box.high)]
        for corner in iproduct(*lows):
            win = BoxRegion(corner, tuple(x + N - 1 for x in corner))
            windows.append([cell_index[v] for v in win.cells()])

    def moves(si):
        tup = states[si]
        for win in windows:
            others = {i for i in range(ncells) if i not in win}
            fixed_local = {cells[i]: tup[i] for i in others}
            for alt in search.iter_color_tuples([cells[i] for i in win], q,
                                                fixed=fixed_local):
                new = list(tup)
                for slot, i in enumerate(sorted(win, key=lambda i: cells[i])):
                    new[i] = alt[slot]
                if tuple(new) != tup:
                    yield tuple(new)

    # NOTE: window-local fills must also respect the global boundary; the
    # states list was enumerated under it, so any candidate not present in
    # `index` is discarded, which filters boundary violations too.
    best = 0
    done_roots = set()
    for si in range(len(states)):
        r = dsu.find(si)
        if r in done_roots:
            continue
        done_roots.add(r)
        depth = {si: 0}
        queue = deque([si])
        far = 0
        while queue:
            cur = queue.popleft()
            tup = states[cur]
            key = 0
            for c in tup:
                key = (key << bits) | c
            for nb in moves(cur):
                k = 0
                for c in nb:
                    k = (k << bits) | c
                sj = index.get(k)
                if sj is not None and sj not in depth:
                    depth[sj] = depth[cur] + 1
                    far = max(far, depth[sj])
                    queue.append(sj)
        best = max(best, 2 * far)
    return best
