"""Boxes, adjacency and colorings on finite windows of the Z^d lattice.

Coordinates are plain tuples of ints.  A box region is an axis-aligned
product of integer intervals; cells enumerate in row-major order (last
coordinate varies fastest).  Two cells are adjacent when they differ by
exactly one in exactly one coordinate (the usual Z^d edges).

Colors are always 0-based: a q-coloring takes values in {0, ..., q-1}.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

Coordinate = tuple[int, ...]

_GLYPHS = "0123456789abcdefghijklmnopqrstuvwxyz"


def zd_neighbors(v: Coordinate) -> list[Coordinate]:
    """All 2d lattice neighbors of v, ordered +e_1..+e_d then -e_1..-e_d."""
    d = len(v)
    out = []
    for k in range(d):
        out.append(v[:k] + (v[k] + 1,) + v[k + 1:])
    for k in range(d):
        out.append(v[:k] + (v[k] - 1,) + v[k + 1:])
    return out


@dataclass(frozen=True)
class BoxRegion:
    """The box {low_1..high_1} x ... x {low_d..high_d} in Z^d."""

    low: Coordinate
    high: Coordinate

    def __post_init__(self):
        low, high = tuple(self.low), tuple(self.high)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)
        if len(low) != len(high):
            raise ValueError("low and high must have the same dimension")
        if not low:
            raise ValueError("dimension must be at least 1")
        if any(a > b for a, b in zip(low, high)):
            raise ValueError(f"empty box: low={low} high={high}")

    @classmethod
    def box(cls, n: int, d: int) -> "BoxRegion":
        """[n]^d = {1,...,n}^d."""
        if n < 1 or d < 1:
            raise ValueError("box needs n >= 1 and d >= 1")
        return cls((1,) * d, (n,) * d)

    @classmethod
    def centered(cls, n: int, d: int) -> "BoxRegion":
        """B_n^d = {-n,...,n}^d."""
        if n < 0 or d < 1:
            raise ValueError("centered box needs n >= 0 and d >= 1")
        return cls((-n,) * d, (n,) * d)

    @property
    def d(self) -> int:
        return len(self.low)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.low, self.high))

    @property
    def size(self) -> int:
        out = 1
        for s in self.shape:
            out *= s
        return out

    def __contains__(self, v) -> bool:
        return len(v) == self.d and all(
            a <= x <= b for x, a, b in zip(v, self.low, self.high))

    def cells(self) -> Iterator[Coordinate]:
        """Row-major enumeration (last coordinate varies fastest)."""
        ranges = [range(a, b + 1) for a, b in zip(self.low, self.high)]
        return itertools.product(*ranges)

    def index(self, v: Coordinate) -> int:
        """Row-major index of a cell."""
        if v not in self:
            raise ValueError(f"{v} not in {self}")
        idx = 0
        for x, a, s in zip(v, self.low, self.shape):
            idx = idx * s + (x - a)
        return idx

    def expand(self, margin: int) -> "BoxRegion":
        return BoxRegion(tuple(a - margin for a in self.low),
                         tuple(b + margin for b in self.high))

    def translate(self, vec: Coordinate) -> "BoxRegion":
        if len(vec) != self.d:
            raise ValueError("translation vector has wrong dimension")
        return BoxRegion(tuple(a + t for a, t in zip(self.low, vec)),
                         tuple(b + t for b, t in zip(self.high, vec)))

    def __str__(self):
        return "x".join(f"{{{a}..{b}}}" for a, b in zip(self.low, self.high))


def neighbors(region: BoxRegion, v: Coordinate) -> list[Coordinate]:
    """Neighbors of v that stay inside region, in +e_1..+e_d, -e_1..-e_d order.

    v itself must lie in the region.
    """
    if v not in region:
        raise ValueError(f"{v} lies outside {region}")
    return [w for w in zd_neighbors(v) if w in region]


def external_boundary(cells: Iterable[Coordinate]) -> frozenset[Coordinate]:
    """All vertices of Z^d \\ U adjacent to U (U = the given cell set)."""
    cellset = frozenset(cells)
    if not cellset:
        return frozenset()
    out = set()
    for v in cellset:
        for w in zd_neighbors(v):
            if w not in cellset:
                out.add(w)
    return frozenset(out)


def edge_counts(cells: Iterable[Coordinate],
                within: BoxRegion | None = None) -> tuple[int, int]:
    """(internal, crossing) edge counts for a finite vertex set F.

    internal counts edges with both endpoints in F; crossing counts edges
    from F to its complement.  The ambient graph is all of Z^d unless
    `within` is given, in which case only edges of the induced box graph
    are counted.
    """
    cellset = frozenset(cells)
    internal = 0
    crossing = 0
    for v in cellset:
        for w in zd_neighbors(v):
            if w in cellset:
                internal += 1  # counted from both sides, halved below
            elif within is None or w in within:
                crossing += 1
    assert internal % 2 == 0
    return internal // 2, crossing


@dataclass(frozen=True)
class PartialColoring:
    """A partial assignment of colors on some window of Z^d.

    `assignment` maps coordinates to colors in {0..q-1}; unassigned cells
    of the window carry no constraint.  The support may sit anywhere in
    the window, e.g. on the external boundary of a box to be filled.
    Construction checks support and color range but not propriety --
    use is_proper for that.
    """

    region: BoxRegion
    q: int
    assignment: Mapping[Coordinate, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignment",
                           {tuple(v): c for v, c in self.assignment.items()})
        if self.q < 1:
            raise ValueError("q must be >= 1")
        for v, c in self.assignment.items():
            if v not in self.region:
                raise ValueError(f"assigned cell {v} outside window {self.region}")
            if not 0 <= c < self.q:
                raise ValueError(f"color {c} out of range for q={self.q}")

    @property
    def support(self) -> frozenset[Coordinate]:
        return frozenset(self.assignment)

    def color(self, v: Coordinate) -> int | None:
        return self.assignment.get(tuple(v))

    def merged(self, extra: Mapping[Coordinate, int]) -> "PartialColoring":
        """A new partial coloring with extra assignments added (no overwrite)."""
        combined = dict(self.assignment)
        for v, c in extra.items():
            v = tuple(v)
            if combined.get(v, c) != c:
                raise ValueError(f"conflicting colors at {v}")
            combined[v] = c
        return PartialColoring(self.region, self.q, combined)

    def __eq__(self, other):
        if not isinstance(other, PartialColoring):
            return NotImplemented
        return (self.region, self.q, self.assignment) == \
            (other.region, other.q, other.assignment)


@dataclass(frozen=True)
class ProperColoring:
    """A total coloring of a box window, stored row-major.

    The name records intent: library operations only ever build and return
    edge-proper instances.  Construction checks shape and color range;
    propriety itself is checked by is_proper (so that defective inputs can
    be represented and rejected explicitly).
    """

    region: BoxRegion
    q: int
    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if len(self.colors) != self.region.size:
            raise ValueError(
                f"expected {self.region.size} colors, got {len(self.colors)}")
        if any(not 0 <= c < self.q for c in self.colors):
            raise ValueError(f"colors out of range for q={self.q}")

    def color(self, v: Coordinate) -> int:
        return self.colors[self.region.index(v)]

    def as_dict(self) -> dict[Coordinate, int]:
        return dict(zip(self.region.cells(), self.colors))

    def restrict(self, cells: Iterable[Coordinate],
                 window: BoxRegion | None = None) -> PartialColoring:
        """Restriction to a cell subset, as a partial coloring."""
        window = window or self.region
        return PartialColoring(
            window, self.q, {v: self.color(v) for v in cells})

    def with_color(self, v: Coordinate, c: int) -> "ProperColoring":
        i = self.region.index(v)
        colors = self.colors[:i] + (c,) + self.colors[i + 1:]
        return ProperColoring(self.region, self.q, colors)

    @classmethod
    def from_dict(cls, region: BoxRegion, q: int,
                  assignment: Mapping[Coordinate, int]) -> "ProperColoring":
        return cls(region, q, tuple(assignment[v] for v in region.cells()))


def is_proper(c: ProperColoring | PartialColoring) -> bool:
    """True iff no two assigned adjacent cells of the window share a color.

    Only edges inside the coloring's own window are examined.
    """
    if isinstance(c, ProperColoring):
        region, colors = c.region, c.colors
        # scan +e_k edges only; each edge is seen once
        d = region.d
        shape = region.shape
        strides = [0] * d
        s = 1
        for k in range(d - 1, -1, -1):
            strides[k] = s
            s *= shape[k]
        for idx, v in enumerate(region.cells()):
            for k in range(d):
                if v[k] < region.high[k]:
                    if colors[idx] == colors[idx + strides[k]]:
                        return False
        return True
    if isinstance(c, PartialColoring):
        a = c.assignment
        for v, col in a.items():
            for k in range(len(v)):
                w = v[:k] + (v[k] + 1,) + v[k + 1:]
                if a.get(w) == col:
                    return False
        return True
    raise TypeError(f"expected a coloring, got {type(c).__name__}")


# --- serialization ---------------------------------------------------------

def coloring_to_json(c: ProperColoring | PartialColoring) -> dict:
    """JSON-ready dict: {d, q, low, high, colors | partial}."""
    obj = {
        "d": c.region.d,
        "q": c.q,
        "low": list(c.region.low),
        "high": list(c.region.high),
    }
    if isinstance(c, ProperColoring):
        obj["colors"] = list(c.colors)
    elif isinstance(c, PartialColoring):
        obj["partial"] = sorted(
            [[list(v), col] for v, col in c.assignment.items()])
    else:
        raise TypeError(f"expected a coloring, got {type(c).__name__}")
    return obj


def coloring_from_json(obj: dict) -> ProperColoring | PartialColoring:
    """Inverse of coloring_to_json.

    An object with a "colors" array decodes to a ProperColoring (row-major);
    one with a "partial" list of [coord, color] pairs decodes to a
    PartialColoring.
    """
    try:
        region = BoxRegion(tuple(obj["low"]), tuple(obj["high"]))
        q = int(obj["q"])
    except KeyError as e:
        raise ValueError(f"coloring object missing key {e}") from None
    if int(obj["d"]) != region.d:
        raise ValueError("d field inconsistent with low/high")
    if "colors" in obj:
        return ProperColoring(region, q, tuple(int(c) for c in obj["colors"]))
    if "partial" in obj:
        assignment = {tuple(v): int(c) for v, c in obj["partial"]}
        return PartialColoring(region, q, assignment)
    raise ValueError("coloring object needs a 'colors' or 'partial' field")


def save_coloring(c, path) -> None:
    with open(path, "w") as fh:
        json.dump(coloring_to_json(c), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_coloring(path) -> ProperColoring | PartialColoring:
    with open(path) as fh:
        return coloring_from_json(json.load(fh))


def render_ascii(c: ProperColoring | PartialColoring) -> str:
    """Two-dimensional windows only: one glyph per cell, '.' if unassigned.

    Rows run along the first coordinate (top row = low), columns along the
    second.
    """
    region = c.region
    if region.d != 2:
        raise ValueError("ascii rendering is defined for d=2 only")
    if c.q > len(_GLYPHS):
        raise ValueError(f"cannot render q={c.q} > {len(_GLYPHS)} colors")
    lookup = c.color if isinstance(c, PartialColoring) else c.as_dict().get
    rows = []
    for i in range(region.low[0], region.high[0] + 1):
        row = []
        for j in range(region.low[1], region.high[1] + 1):
            col = lookup((i, j))
            row.append("." if col is None else _GLYPHS[col])
        rows.append("".join(row))
    return "\n".join(rows)


def render_pgm(c: ProperColoring, maxval: int = 255) -> str:
    """Plain (P2) PGM image of a d=2 total coloring.

    Gray level of color c is floor(maxval * c / (q-1)).
    """
    region = c.region
    if region.d != 2:
        raise ValueError("pgm rendering is defined for d=2 only")
    if not isinstance(c, ProperColoring):
        raise ValueError("pgm rendering needs a total coloring")
    h, w = region.shape
    lines = [f"P2", f"{w} {h}", f"{maxval}"]
    grid = c.as_dict()
    denom = max(c.q - 1, 1)
    for i in range(region.low[0], region.high[0] + 1):
        lines.append(" ".join(
            str(maxval * grid[(i, j)] // denom)
            for j in range(region.low[1], region.high[1] + 1)))
    return "\n".join(lines) + "\n"
