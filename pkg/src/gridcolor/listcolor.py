"""List coloring of box windows via orientations and kernels.

The size profile that matters for boxes is

    L(i) = 2 + #{k : i_k strictly between the box faces},

between 2 at corners and d+2 in the interior.  When the side length is
at least d+2 these sizes admit an orientation with out-degrees below the
list sizes: a bipartite matching between edges and "slots" (each vertex
v offers L(v)-1 slots) assigns every edge a tail.  Grid graphs are
bipartite, so the orientation has no odd directed cycles, every induced
subdigraph has a kernel, and the standard kernel argument colors from
any lists of these sizes: repeatedly pick a color, take a kernel of the
subdigraph where it is still allowed, color the kernel, drop the color
elsewhere.

When the matching does not exist, alternating paths expose a vertex set
H with fewer slots than induced edges -- a witness that *no* suitable
orientation exists.  Small boxes genuinely fail: an exhaustive search
over 2-element lists on [2]^3 finds unsatisfiable assignments, while
the same search proves [2]^2 safe.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Mapping

from . import search
from .lattice import BoxRegion, Coordinate, zd_neighbors


def list_bound(n: int, d: int, i: Coordinate) -> int:
    """2 + #{k : 1 < i_k < n} for i in [n]^d."""
    i = tuple(i)
    if len(i) != d:
        raise ValueError(f"coordinate {i} does not have dimension {d}")
    if any(not 1 <= x <= n for x in i):
        raise ValueError(f"coordinate {i} outside [{n}]^{d}")
    return 2 + sum(1 < x < n for x in i)


def level_sets(n: int, d: int) -> dict[int, frozenset[Coordinate]]:
    """Cells of [n]^d grouped by level t = L(i) - 2 (diagnostic helper)."""
    out: dict[int, set] = {t: set() for t in range(d + 1)}
    for v in BoxRegion.box(n, d).cells():
        out[list_bound(n, d, v) - 2].add(v)
    return {t: frozenset(s) for t, s in out.items()}


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex allowed color sets; every list must be nonempty."""

    lists: Mapping[Coordinate, frozenset[int]]

    def __post_init__(self):
        norm = {tuple(v): frozenset(s) for v, s in self.lists.items()}
        object.__setattr__(self, "lists", norm)
        for v, s in norm.items():
            if not s:
                raise ValueError(f"empty list at {v}")

    @property
    def vertices(self) -> frozenset[Coordinate]:
        return frozenset(self.lists)

    def size(self, v: Coordinate) -> int:
        return len(self.lists[tuple(v)])

    def __eq__(self, other):
        if not isinstance(other, ListAssignment):
            return NotImplemented
        return self.lists == other.lists


def random_list_assignment(n: int, d: int, universe: int, rng,
                           sizes: Callable[[Coordinate], int] | None = None
                           ) -> ListAssignment:
    """Random lists on [n]^d with |S(i)| = L(i) drawn from {0..universe-1}."""
    box = BoxRegion.box(n, d)
    lists = {}
    for v in box.cells():
        k = sizes(v) if sizes else list_bound(n, d, v)
        if k > universe:
            raise ValueError(f"cannot draw {k} colors from universe {universe}")
        picks = rng.sample(range(universe), k)
        lists[v] = frozenset(int(c) for c in picks)
    return ListAssignment(lists)


def induced_edges(vertices: Iterable[Coordinate]) -> list[tuple[Coordinate, Coordinate]]:
    """Lattice edges with both endpoints in the set, each once, sorted."""
    vs = frozenset(map(tuple, vertices))
    out = []
    for v in vs:
        for k in range(len(v)):
            w = v[:k] + (v[k] + 1,) + v[k + 1:]
            if w in vs:
                out.append((v, w))
    return sorted(out)


def check_subgraph_inequality(H: Iterable[Coordinate], L) -> bool:
    """sum_{v in H} (L(v) - 1) >= |E_H| for the induced subgraph on H."""
    H = frozenset(map(tuple, H))
    size = _size_fn(L)
    capacity = sum(size(v) - 1 for v in H)
    return capacity >= len(induced_edges(H))


def _size_fn(L) -> Callable[[Coordinate], int]:
    if isinstance(L, ListAssignment):
        return L.size
    if isinstance(L, Mapping):
        return lambda v: L[tuple(v)]
    return L


@dataclass(frozen=True)
class Orientation:
    """An orientation of a simple graph: each edge appears as one arc."""

    vertices: frozenset
    arcs: frozenset[tuple]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "arcs", frozenset(map(tuple, self.arcs)))
        for (u, v) in self.arcs:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"arc ({u}, {v}) leaves the vertex set")
            if (v, u) in self.arcs:
                raise ValueError(f"edge {{{u}, {v}}} oriented both ways")

    def out_degree(self, v) -> int:
        return sum(1 for (u, _) in self.arcs if u == v)

    def out_degrees(self) -> dict:
        deg = {v: 0 for v in self.vertices}
        for (u, _) in self.arcs:
            deg[u] += 1
        return deg

    @property
    def edges(self) -> frozenset[frozenset]:
        return frozenset(frozenset(a) for a in self.arcs)

    def induced(self, vertices) -> "Orientation":
        vs = frozenset(vertices)
        return Orientation(vs, {a for a in self.arcs
                                if a[0] in vs and a[1] in vs})


@dataclass(frozen=True)
class HallViolation:
    """A vertex set with fewer orientation slots than induced edges."""

    vertices: frozenset[Coordinate]
    edge_count: int
    capacity: int  # sum of L(v) - 1 over the set


def hall_orientation(vertices: Iterable[Coordinate], L):
    """Orient the induced grid graph with out-degrees below the list sizes.

    Builds the bipartite graph between edges and vertex slots ((v, i) for
    1 <= i <= L(v)-1), finds a matching saturating the edges by augmenting
    paths, and orients every edge away from its matched vertex.  If no
    such matching exists the alternating-path reachability set yields a
    HallViolation whose vertex set H has capacity < |E_H|.
    """
    vs = sorted(set(map(tuple, vertices)))
    size = _size_fn(L)
    for v in vs:
        if size(v) < 1:
            raise ValueError(f"list size at {v} must be >= 1")
    edges = induced_edges(vs)
    slots = {v: size(v) - 1 for v in vs}

    match: dict = {}          # slot -> edge index
    owner = [None] * len(edges)  # edge index -> slot

    def slots_of(e):
        u, v = e
        return [(u, i) for i in range(slots[u])] + \
               [(v, i) for i in range(slots[v])]

    def augment(ei, seen):
        for s in slots_of(edges[ei]):
            if s in seen:
                continue
            seen.add(s)
            if s not in match or augment(match[s], seen):
                match[s] = ei
                owner[ei] = s
                return True
        return False

    unmatched = [ei for ei in range(len(edges)) if not augment(ei, set())]
    if unmatched:
        # deficiency certificate from the final maximum matching: every
        # slot alternating-reachable from an unmatched edge is matched,
        # and every slot of a reachable edge is itself reachable, so the
        # reachable edges outnumber the slots of their endpoints by
        # |unmatched|
        reach_e = set(unmatched)
        reach_s: set = set()
        frontier = list(unmatched)
        while frontier:
            i = frontier.pop()
            for s in slots_of(edges[i]):
                if s not in reach_s:
                    reach_s.add(s)
                    j = match.get(s)
                    if j is not None and j not in reach_e:
                        reach_e.add(j)
                        frontier.append(j)
        H = set()
        for i in reach_e:
            H.update(edges[i])
        violation = HallViolation(
            vertices=frozenset(H),
            edge_count=len(induced_edges(H)),
            capacity=sum(size(v) - 1 for v in H))
        assert violation.capacity < violation.edge_count
        return violation

    arcs = set()
    for ei, (u, v) in enumerate(edges):
        tail = owner[ei][0]
        arcs.add((tail, v if tail == u else u))
    o = Orientation(frozenset(vs), arcs)
    assert all(o.out_degrees()[v] <= slots[v] for v in vs)
    return o


def _strongly_connected(vertices, succ):
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = [0]
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def has_odd_directed_cycle(o: Orientation) -> bool:
    """Does the digraph contain a directed cycle of odd length?

    Within a strongly connected component all closed walks are even iff a
    parity potential exists (p(head) = p(tail) + 1 along every arc); any
    odd closed walk decomposes into cycles, one of which must be odd.
    Arcs between components lie on no cycle at all.
    """
    succ_map: dict = {v: [] for v in o.vertices}
    for (u, v) in o.arcs:
        succ_map[u].append(v)
    for comp in _strongly_connected(sorted(o.vertices), lambda v: succ_map[v]):
        if len(comp) == 1:
            continue  # no self-loops by construction
        cons: dict = {v: [] for v in comp}
        for u in comp:
            for v in succ_map[u]:
                if v in comp:
                    cons[u].append(v)
                    cons[v].append(u)
        parity = {}
        root = next(iter(comp))
        parity[root] = 0
        queue = [root]
        while queue:
            u = queue.pop()
            for v in cons[u]:
                if v not in parity:
                    parity[v] = parity[u] ^ 1
                    queue.append(v)
                elif parity[v] == parity[u]:
                    return True
    return False


def find_kernel(o: Orientation) -> frozenset:
    """An independent, absorbing vertex set of an odd-dicycle-free digraph.

    Peels sink components of the condensation: a strongly connected
    digraph without odd cycles carries a parity potential, either parity
    class is a kernel of the component, and vertices with an arc into the
    growing kernel are dominated and removed.
    """
    if has_odd_directed_cycle(o):
        raise ValueError("kernel method needs a digraph with no odd directed cycle")
    succ_map: dict = {v: set() for v in o.vertices}
    pred_map: dict = {v: set() for v in o.vertices}
    for (u, v) in o.arcs:
        succ_map[u].add(v)
        pred_map[v].add(u)
    remaining = set(o.vertices)
    kernel = set()
    while remaining:
        comps = _strongly_connected(
            sorted(remaining), lambda v: (w for w in succ_map[v] if w in remaining))
        comp_of = {}
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = ci
        sinks = []
        for ci, comp in enumerate(comps):
            if all(comp_of[w] == ci
                   for v in comp for w in succ_map[v] if w in remaining):
                sinks.append(comp)
        comp = min(sinks, key=min)
        if len(comp) == 1:
            part = set(comp)
        else:
            root = min(comp)
            parity = {root: 0}
            queue = [root]
            while queue:
                u = queue.pop()
                for v in succ_map[u] | pred_map[u]:
                    if v in comp and v not in parity:
                        parity[v] = parity[u] ^ 1
                        queue.append(v)
            part = {v for v in comp if parity[v] == 0}
        kernel |= part
        dominated = {v for v in remaining if succ_map[v] & part}
        remaining -= comp | dominated
    assert _is_kernel(o, kernel)
    return frozenset(kernel)


def _is_kernel(o: Orientation, K) -> bool:
    K = set(K)
    for (u, v) in o.arcs:
        if u in K and v in K:
            return False
    for v in o.vertices - K:
        if not any((v, w) in o.arcs for w in K):
            return False
    return True


def list_color(vertices: Iterable[Coordinate], lists,
               orientation: Orientation | None = None
               ) -> dict[Coordinate, int] | None:
    """Proper coloring within per-vertex lists, or None if unsatisfiable.

    With an orientation whose out-degrees stay below the list sizes, the
    kernel method colors greedily and cannot fail.  Without one, a Hall
    orientation is attempted first; if none exists the solver falls back
    to exhaustive backtracking, where None is a genuine possibility.
    """
    if isinstance(lists, ListAssignment):
        table = dict(lists.lists)
    else:
        table = {tuple(v): frozenset(s) for v, s in lists.items()}
    vs = frozenset(map(tuple, vertices))
    missing = vs - set(table)
    if missing:
        raise ValueError(f"no list for vertex {min(missing)}")
    if any(not table[v] for v in vs):
        return None

    if orientation is None:
        got = hall_orientation(vs, lambda v: len(table[v]))
        if isinstance(got, HallViolation):
            return search.find_coloring(vs, lists=table)
        orientation = got
    else:
        if orientation.vertices != vs:
            raise ValueError("orientation is over a different vertex set")
        degs = orientation.out_degrees()
        for v in vs:
            if len(table[v]) < degs[v] + 1:
                raise ValueError(
                    f"list at {v} has {len(table[v])} colors but out-degree {degs[v]}")
        if has_odd_directed_cycle(orientation):
            raise ValueError("orientation has an odd directed cycle")

    remaining = {v: set(table[v]) for v in vs}
    arcs = set(orientation.arcs)
    result: dict[Coordinate, int] = {}
    while remaining:
        by_color: dict[int, list] = {}
        for v, s in remaining.items():
            for c in s:
                by_color.setdefault(c, []).append(v)
        # most constrained color first: fewest holders
        color = min(by_color, key=lambda c: (len(by_color[c]), c))
        holders = frozenset(by_color[color])
        sub = Orientation(holders, {a for a in arcs
                                    if a[0] in holders and a[1] in holders})
        K = find_kernel(sub)
        for v in K:
            result[v] = color
            del remaining[v]
        arcs = {a for a in arcs if a[0] not in K and a[1] not in K}
        for v in holders - K:
            remaining[v].discard(color)
            # the kernel absorbed an out-neighbor, so sizes stay ahead of
            # out-degrees and the set cannot empty out
            assert remaining[v], "kernel invariant broken"
    return result


def boundary_cycle_orientation(n: int) -> Orientation:
    """[n]^2 with the outer face as a cycle and inner edges pointing up/right.

    Out-degrees stay within min{L(i), 3} - 1, so 3-element lists always
    suffice on this orientation regardless of n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    box = BoxRegion.box(n, 2)
    arcs = set()
    ring = [(i, 1) for i in range(1, n)] + [(n, j) for j in range(1, n)] + \
           [(i, n) for i in range(n, 1, -1)] + [(1, j) for j in range(n, 1, -1)]
    for a, b in zip(ring, ring[1:] + ring[:1]):
        arcs.add((a, b))
    ring_edges = {frozenset(a) for a in arcs}
    for (u, v) in induced_edges(box.cells()):
        if frozenset((u, v)) not in ring_edges:
            arcs.add((min(u, v), max(u, v)))  # +e_1 / +e_2 direction
    return Orientation(frozenset(box.cells()), arcs)


def shell_color(n: int, d: int, lists=None, fixed=None, q: int | None = None
                ) -> dict[Coordinate, int] | None:
    """Color the shell [n+1]^d \\ [n]^d piecewise.

    Cells with a fixed set T of coordinates equal to n+1 form a copy of
    [n]^(d - |T|); coloring pieces in order of decreasing |T| means each
    piece only sees constraints from already-colored pieces (and `fixed`),
    and the surviving lists stay as large as the box profile of the piece
    demands.  Default lists are the full palette {0..q-1} with q = d+2.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if q is None:
        q = d + 2
    shell = [v for v in BoxRegion.box(n + 1, d).cells() if max(v) == n + 1]
    if lists is None:
        table = {v: frozenset(range(q)) for v in shell}
    elif isinstance(lists, ListAssignment):
        table = dict(lists.lists)
    else:
        table = {tuple(v): frozenset(s) for v, s in lists.items()}
    assigned = {tuple(v): c for v, c in (fixed or {}).items()}

    pieces: dict[frozenset, list] = {}
    for v in shell:
        T = frozenset(k for k in range(d) if v[k] == n + 1)
        pieces.setdefault(T, []).append(v)
    order = sorted(pieces, key=lambda T: (-len(T), sorted(T)))

    out: dict[Coordinate, int] = {}
    for T in order:
        cells = pieces[T]
        effective = {}
        for v in cells:
            s = set(table[v])
            for w in zd_neighbors(v):
                if w in assigned:
                    s.discard(assigned[w])
            if not s:
                return None
            effective[v] = frozenset(s)
        sol = list_color(cells, effective)
        if sol is None:
            return None
        out.update(sol)
        assigned.update(sol)
    return out


# --- exhaustive search for unlistable 2-lists on small boxes ---------------

def _sat_tables(n: int, d: int):
    box = BoxRegion.box(n, d)
    cells = sorted(box.cells())
    index = {v: i for i, v in enumerate(cells)}
    prev = []
    for v in cells:
        prev.append([index[w] for w in zd_neighbors(v)
                     if w in index and index[w] < index[v]])
    return cells, prev


def _satisfiable(masks, prev) -> bool:
    """Is there a proper coloring with per-cell allowed bitmasks?"""
    n = len(masks)
    colors = [0] * n
    avail = [0] * n
    avail[0] = masks[0]
    k = 0
    while k >= 0:
        m = avail[k]
        if m == 0:
            k -= 1
            continue
        c = (m & -m).bit_length() - 1
        avail[k] = m & (m - 1)
        colors[k] = c
        if k == n - 1:
            return True
        k += 1
        mm = masks[k]
        for j in prev[k]:
            mm &= ~(1 << colors[j])
        avail[k] = mm
    return False


def _scan_chunk(args):
    n, d, universe, first_pair_index = args
    cells, prev = _sat_tables(n, d)
    pairs = list(combinations(range(universe), 2))
    pair_masks = [(1 << a) | (1 << b) for (a, b) in pairs]
    masks = [0] * len(cells)
    masks[0] = pair_masks[0]  # {0, 1} on the first cell
    masks[1] = pair_masks[first_pair_index]
    m = len(cells) - 2  # free cells beyond the first and second
    for rest in product(range(len(pairs)), repeat=m):
        for t, pi in enumerate(rest):
            masks[t + 2] = pair_masks[pi]
        if not _satisfiable(masks, prev):
            choice = (0, first_pair_index) + rest
            return [pairs[i] for i in choice]
    return None


def search_unlistable(n: int = 2, d: int = 3, universe: int = 4,
                      threads: int = 1) -> ListAssignment | None:
    """Hunt for 2-element lists on [n]^d with no proper list coloring.

    Enumerates all assignments of 2-subsets of {0..universe-1} to the
    cells, the first cell pinned to {0, 1} (color permutations make this
    lossless), deciding each by exhaustive backtracking.  Returns the
    first witness in enumeration order, or None when every assignment is
    satisfiable -- an exhaustive proof that no witness exists.
    """
    cells, prev = _sat_tables(n, d)
    if len(cells) < 2:
        raise ValueError("box too small to search")
    npairs = len(list(combinations(range(universe), 2)))
    tasks = [(n, d, universe, i) for i in range(npairs)]
    if threads > 1:
        with multiprocessing.Pool(min(threads, npairs)) as pool:
            results = pool.map(_scan_chunk, tasks)
    else:
        results = map(_scan_chunk, tasks)
    for res in results:
        if res is not None:
            return ListAssignment(dict(zip(cells, map(frozenset, res))))
    return None


def assignment_satisfiable(assignment: ListAssignment) -> tuple[bool, int]:
    """Decide satisfiability by checking every combination, no pruning.

    Independent double-check for witnesses: returns (satisfiable, number
    of combinations examined).
    """
    cells = sorted(assignment.vertices)
    options = [sorted(assignment.lists[v]) for v in cells]
    edges = [(cells.index(u), cells.index(v)) for u, v in induced_edges(cells)]
    checked = 0
    ok = False
    for combo in product(*options):
        checked += 1
        if all(combo[a] != combo[b] for a, b in edges):
            ok = True
    return ok, checked


def cube_witness_report(witness: ListAssignment) -> dict:
    """Diagnostics for a [2]^3 witness: layer colorings and enlargements."""
    cells = sorted(witness.vertices)
    d = len(cells[0])
    sat, checked = assignment_satisfiable(witness)
    report: dict = {
        "satisfiable": sat,
        "combinations_checked": checked,
        "lists": {",".join(map(str, v)): sorted(witness.lists[v])
                  for v in cells},
    }
    if d == 3:
        layers = {}
        for z in (1, 2):
            layer = [v for v in cells if v[2] == z]
            sols = []
            for combo in product(*[sorted(witness.lists[v]) for v in layer]):
                colors = dict(zip(layer, combo))
                if all(colors[u] != colors[v]
                       for u, v in induced_edges(layer)):
                    sols.append(list(combo))
            layers[str(z)] = sols
        report["layer_colorings"] = layers
    enlarged = {}
    full = set(range(max(max(s) for s in witness.lists.values()) + 1))
    for v in cells:
        extra = sorted(full - witness.lists[v])
        if not extra:
            continue
        bigger = dict(witness.lists)
        bigger[v] = witness.lists[v] | {extra[0]}
        sat_v, _ = assignment_satisfiable(ListAssignment(bigger))
        enlarged[",".join(map(str, v))] = sat_v
    report["satisfiable_after_one_enlargement"] = enlarged
    return report
