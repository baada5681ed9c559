"""Exact coloring counts, entropy series, and Glauber sampling.

Two independent exact-count routes are kept on purpose: a transfer
matrix sweeping d=2 regions column by column, and a depth-first search
over cells (JIT-compiled when the count is guaranteed to fit a machine
word, arbitrary precision otherwise).  They cross-check each other and
back the per-site entropy series h = log(count)/|region|.

The sampler is single-site heat bath with *sequential lexicographic*
sweeps (a systematic scan, not uniform-random site choice -- the two
have different mixing behavior and reports should say which one ran).
Randomness comes from numpy's PCG64 so runs are bit-reproducible from
the 64-bit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import search
from .lattice import (BoxRegion, Coordinate, PartialColoring, ProperColoring,
                      external_boundary, is_proper, zd_neighbors)

TRANSFER_WIDTH_CAP = 12
DFS_CELL_CAP = 27


class UnsatisfiableError(Exception):
    """No proper coloring is compatible with the given boundary."""


@dataclass(frozen=True)
class CountReport:
    region: BoxRegion
    q: int
    boundary: PartialColoring | None
    count: int
    log_count_per_site: float | None
    method: str

    @property
    def boundary_kind(self) -> str:
        return "free" if self.boundary is None else "fixed"


@dataclass(frozen=True)
class SamplerConfig:
    region: BoxRegion
    q: int
    boundary: PartialColoring | None = None
    steps: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.boundary is not None and self.boundary.q != self.q:
            raise ValueError("boundary uses a different palette")


def _allowed_masks(region: BoxRegion, q: int,
                   boundary: PartialColoring | None) -> dict[Coordinate, int]:
    full = (1 << q) - 1
    fixed = dict(boundary.assignment) if boundary is not None else {}
    masks = {}
    for v in region.cells():
        m = full
        for w in zd_neighbors(v):
            c = fixed.get(w)
            if c is not None and c < q:
                m &= ~(1 << c)
        masks[v] = m
    return masks


def _check_boundary(region: BoxRegion, q: int,
                    boundary: PartialColoring | None) -> None:
    if boundary is None:
        return
    if boundary.q != q:
        raise ValueError("boundary palette differs from q")
    inside = [v for v in boundary.assignment if v in region]
    if inside:
        raise ValueError(f"boundary assigns cell {min(inside)} inside "
                         "the region")
    if not is_proper(boundary):
        raise ValueError("boundary coloring is not proper")


# --- transfer matrix --------------------------------------------------------

def _column_states(masks: list[int], prev: tuple[int, ...] | None
                   ) -> Iterator[tuple[int, ...]]:
    """Proper colorings of one column, cellwise avoiding `prev`."""
    w = len(masks)
    state = [0] * w
    avail = [0] * w

    def start_mask(r):
        m = masks[r]
        if r > 0:
            m &= ~(1 << state[r - 1])
        if prev is not None:
            m &= ~(1 << prev[r])
        return m

    r = 0
    avail[0] = start_mask(0)
    while r >= 0:
        m = avail[r]
        if m == 0:
            r -= 1
            continue
        c = (m & -m).bit_length() - 1
        avail[r] = m & (m - 1)
        state[r] = c
        if r == w - 1:
            yield tuple(state)
        else:
            r += 1
            avail[r] = start_mask(r)


def _transfer_count(region: BoxRegion, q: int,
                    boundary: PartialColoring | None) -> int:
    if region.d != 2:
        raise ValueError("the transfer matrix route is for d=2 regions")
    s0, s1 = region.shape
    width, sweep_axis = (s1, 0) if s1 <= s0 else (s0, 1)
    if width > TRANSFER_WIDTH_CAP:
        raise ValueError(
            f"column width {width} exceeds the cap of {TRANSFER_WIDTH_CAP}")
    masks = _allowed_masks(region, q, boundary)
    lo, hi = region.low, region.high
    columns: list[list[int]] = []
    other = 1 - sweep_axis
    for j in range(lo[sweep_axis], hi[sweep_axis] + 1):
        col = []
        for r in range(lo[other], hi[other] + 1):
            v = (j, r) if sweep_axis == 0 else (r, j)
            col.append(masks[v])
        columns.append(col)

    weights: dict[tuple[int, ...], int] = {}
    for state in _column_states(columns[0], None):
        weights[state] = 1
    for col in columns[1:]:
        nxt: dict[tuple[int, ...], int] = {}
        for state, wgt in weights.items():
            for t in _column_states(col, state):
                nxt[t] = nxt.get(t, 0) + wgt
        weights = nxt
        if not weights:
            return 0
    return sum(weights.values())


# --- depth-first search -----------------------------------------------------

_kernel = None


def _get_kernel():
    """Compile the machine-word DFS counter on first use."""
    global _kernel
    if _kernel is not None:
        return _kernel
    import numba

    @numba.njit(cache=True)
    def kernel(base, prev_flat, prev_off):  # pragma: no cover - jitted
        n = base.shape[0]
        if n == 0:
            return 1
        total = 0
        colors = np.zeros(n, np.int64)
        avail = np.zeros(n, np.int64)
        avail[0] = base[0]
        k = 0
        last = n - 1
        while k >= 0:
            m = avail[k]
            if m == 0:
                k -= 1
                continue
            if k == last:
                cnt = 0
                while m:
                    m &= m - 1
                    cnt += 1
                total += cnt
                avail[k] = 0
                k -= 1
                continue
            c = 0
            mm = m & (-m)
            while mm > 1:
                mm >>= 1
                c += 1
            avail[k] = m & (m - 1)
            colors[k] = c
            k += 1
            mask = base[k]
            for idx in range(prev_off[k], prev_off[k + 1]):
                mask &= ~(np.int64(1) << colors[prev_flat[idx]])
            avail[k] = mask
        return total

    _kernel = kernel
    return kernel


def _dfs_count(region: BoxRegion, q: int,
               boundary: PartialColoring | None) -> int:
    cells = list(region.cells())
    if len(cells) > DFS_CELL_CAP:
        raise ValueError(
            f"{len(cells)} cells exceed the DFS cap of {DFS_CELL_CAP}")
    fixed = dict(boundary.assignment) if boundary is not None else None
    if q ** len(cells) < 2 ** 62:
        try:
            kernel = _get_kernel()
        except ImportError:
            kernel = None
        if kernel is not None:
            order, prev, base, feasible = search._prepare(cells, q, fixed)
            if not feasible:
                return 0
            n = len(order)
            prev_off = np.zeros(n + 1, np.int64)
            for i, ps in enumerate(prev):
                prev_off[i + 1] = prev_off[i] + len(ps)
            prev_flat = np.array([j for ps in prev for j in ps] or [0],
                                 np.int64)
            return int(kernel(np.array(base, np.int64), prev_flat, prev_off))
    return search.count_colorings(cells, q, fixed=fixed)


def count_exact(region: BoxRegion, q: int,
                boundary: PartialColoring | None = None,
                method: str = "auto") -> CountReport:
    """Exact number of proper q-colorings of the region given the boundary.

    method "transfer" runs the d=2 column sweep, "dfs" the cell-by-cell
    search, "auto" picks whichever cap fits.  The two agree wherever both
    run, which the test suite exploits as an oracle.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if q >= 63:
        raise ValueError("q must fit the bitmask representation (< 63)")
    _check_boundary(region, q, boundary)
    if method == "auto":
        if region.d == 2 and min(region.shape) <= TRANSFER_WIDTH_CAP:
            method = "transfer"
        else:
            method = "dfs"
    if method == "transfer":
        count = _transfer_count(region, q, boundary)
    elif method == "dfs":
        count = _dfs_count(region, q, boundary)
    else:
        raise ValueError(f"unknown method {method!r}")
    per_site = math.log(count) / region.size if count > 0 else None
    return CountReport(region, q, boundary, count, per_site, method)


def entropy_series(d: int, q: int, n_list: Iterable[int],
                   rule=None) -> list[CountReport]:
    """Per-site log-counts of [n]^d for each n, free or rule-fixed boundary.

    With a rule, the boundary of each box is fixed to the rule's colors;
    for a frozen rule the counts are identically 1 and the series is the
    zero series.
    """
    out = []
    for n in n_list:
        if n < 1:
            raise ValueError("box sides must be >= 1")
        region = BoxRegion.box(n, d)
        boundary = None
        if rule is not None:
            ring = external_boundary(region.cells())
            boundary = PartialColoring(region.expand(1), q,
                                       {v: rule.color(v) for v in ring})
        out.append(count_exact(region, q, boundary))
    return out


# --- Glauber dynamics -------------------------------------------------------

def random_proper_coloring(region: BoxRegion, q: int,
                           boundary: PartialColoring | None = None,
                           rng=None) -> ProperColoring:
    """A proper coloring found by randomized backtracking.

    Beware: this is *some* seed-dependent coloring, not a uniform sample
    -- it seeds chains and tests, nothing more.
    """
    _check_boundary(region, q, boundary)
    fixed = dict(boundary.assignment) if boundary is not None else None
    sol = search.find_coloring(region.cells(), q, fixed=fixed, rng=rng)
    if sol is None:
        raise UnsatisfiableError(
            f"no proper {q}-coloring of {region} fits the boundary")
    return ProperColoring(region, q,
                          tuple(sol[v] for v in region.cells()))


def glauber_chain(region: BoxRegion, q: int,
                  boundary: PartialColoring | None = None, seed: int = 0,
                  initial: ProperColoring | None = None
                  ) -> Iterator[ProperColoring]:
    """Heat-bath chain; yields the state after each full sweep, forever.

    One sweep updates every cell once in lexicographic order, resampling
    it uniformly among the colors absent from its neighborhood (the
    current color is always among them, so the chain never stalls).
    PCG64(seed) drives both the backtracking initial state and the
    updates, so the whole trajectory is reproducible.
    """
    _check_boundary(region, q, boundary)
    rng = np.random.Generator(np.random.PCG64(seed))
    cells = list(region.cells())
    n = len(cells)
    index = {v: i for i, v in enumerate(cells)}
    fixed = dict(boundary.assignment) if boundary is not None else {}
    neighbor_idx: list[list[int]] = []
    fixed_mask = [0] * n
    for i, v in enumerate(cells):
        idxs = []
        for w in zd_neighbors(v):
            j = index.get(w)
            if j is not None:
                idxs.append(j)
            elif w in fixed and fixed[w] < q:
                fixed_mask[i] |= 1 << fixed[w]
        neighbor_idx.append(idxs)

    if initial is None:
        # shuffled backtracking keeps everything on the one seed
        pyrng = _NumpyShuffleAdapter(rng)
        state = list(random_proper_coloring(region, q, boundary,
                                            rng=pyrng).colors)
    else:
        if initial.region != region or initial.q != q:
            raise ValueError("initial state is for a different problem")
        if not is_proper(initial):
            raise ValueError("initial state is not proper")
        state = list(initial.colors)

    full = (1 << q) - 1
    while True:
        u = rng.random(n)
        for i in range(n):
            used = fixed_mask[i]
            for j in neighbor_idx[i]:
                used |= 1 << state[j]
            legal = full & ~used
            k = legal.bit_count()
            pick = int(u[i] * k)
            if pick == k:  # u == 1.0 cannot happen, but float paranoia
                pick = k - 1
            m = legal
            for _ in range(pick):
                m &= m - 1
            state[i] = (m & -m).bit_length() - 1
        yield ProperColoring(region, q, tuple(state))


class _NumpyShuffleAdapter:
    """Just enough of random.Random for search.find_coloring's shuffles."""

    def __init__(self, gen):
        self._gen = gen

    def shuffle(self, xs):
        self._gen.shuffle(xs)


def glauber_sample(cfg: SamplerConfig) -> ProperColoring:
    """State of the heat-bath chain after cfg.steps sweeps.

    steps=0 returns the (randomized backtracking) initial state.  Raises
    UnsatisfiableError when the boundary admits no filling at all.
    """
    if cfg.steps == 0:
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        return random_proper_coloring(cfg.region, cfg.q, cfg.boundary,
                                      rng=_NumpyShuffleAdapter(rng))
    chain = glauber_chain(cfg.region, cfg.q, cfg.boundary, cfg.seed)
    state = None
    for _, state in zip(range(cfg.steps), chain):
        pass
    return state


def tv_distance_to_uniform(counts: Mapping | Iterable[int],
                           total_states: int,
                           samples: int | None = None) -> float:
    """Total-variation distance of an empirical distribution from uniform.

    `counts` holds per-state sample counts for the states actually seen;
    unseen states contribute their full uniform mass 1/M each.
    """
    if isinstance(counts, Mapping):
        vals = [int(c) for c in counts.values()]
    else:
        vals = [int(c) for c in counts]
    if total_states < len(vals):
        raise ValueError("more seen states than total states")
    n = sum(vals) if samples is None else samples
    if n <= 0:
        raise ValueError("need at least one sample")
    u = 1.0 / total_states
    seen = sum(abs(c / n - u) for c in vals)
    unseen = (total_states - len(vals)) * u
    return 0.5 * (seen + unseen)
