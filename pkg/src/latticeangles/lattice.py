"""Integer point configurations: grids, centered sub-blocks, spheres, and
uniform thickened measures over them.

All coordinates are exact integers; scaling into the unit cube happens only
inside :class:`WeightedPointMeasure` through an exact rational factor that is
applied lazily (angles and separation tests never need it).
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Point = tuple[int, ...]

_LIMIT_64 = 1 << 63


@dataclass(frozen=True)
class LatticePointSet:
    """A finite set of distinct integer points in dimension d."""

    d: int
    points: tuple[Point, ...]
    kind: str = "set"
    param: int = 0  # side for grids/blocks, r2 for spheres; 0 when not applicable

    def __post_init__(self):
        assert self.d >= 2, "dimension must be at least 2"
        assert all(len(p) == self.d for p in self.points), "mixed dimensions"
        assert len(set(self.points)) == len(self.points), "points must be distinct"

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self.points), self.d)


def generate_grid(d: int, side: int) -> LatticePointSet:
    """The cube {1, ..., side}^d.

    side >= 2 and side^d must fit in a signed 64-bit integer.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if side < 2:
        raise ValueError("side must be at least 2")
    if side**d >= _LIMIT_64:
        raise ValueError(f"size error: side^d = {side}^{d} exceeds 64-bit capacity")
    pts = tuple(itertools.product(range(1, side + 1), repeat=d))
    return LatticePointSet(d, pts, kind="grid", param=side)


def _cube_side(grid: LatticePointSet) -> int:
    """Side of a full cube {1..m}^d, or raise if the set is not one."""
    n = len(grid)
    m = round(n ** (1.0 / grid.d))
    # distinct points, all inside [1, m]^d, count m^d => exactly the cube
    while m**grid.d < n:
        m += 1
    arr = grid.as_array()
    if m**grid.d != n or arr.min() < 1 or arr.max() > m:
        raise ValueError("input is not a full cube {1..m}^d")
    return m


def middle_block(grid: LatticePointSet, fraction: Fraction | float) -> LatticePointSet:
    """Centered sub-cube of side floor(fraction * m) of a full cube of side m.

    fraction must lie in (0, 1/2); a block that would be empty is an error.
    """
    rho = Fraction(fraction)
    if not 0 < rho < Fraction(1, 2):
        raise ValueError("fraction must lie in (0, 1/2)")
    m = _cube_side(grid)
    b = int(rho * m)
    if b < 1:
        raise ValueError("degenerate input: block side floor(fraction*m) is 0")
    start = (m - b) // 2 + 1
    rng = range(start, start + b)
    pts = tuple(itertools.product(rng, repeat=grid.d))
    return LatticePointSet(grid.d, pts, kind="block", param=b)


def sphere_lattice(d: int, r2: int) -> LatticePointSet:
    """All integer points with squared norm exactly r2.

    Depth-first enumeration over coordinates with exact residual squared
    norms; empty output is valid (not every r2 is a sum of d squares).
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if r2 < 1:
        raise ValueError("r2 must be positive")
    out: list[Point] = []

    def descend(prefix: tuple[int, ...], residual: int, remaining: int) -> None:
        if remaining == 1:
            r = math.isqrt(residual)
            if r * r == residual:
                if r == 0:
                    out.append(prefix + (0,))
                else:
                    out.append(prefix + (r,))
                    out.append(prefix + (-r,))
            return
        lim = math.isqrt(residual)
        for c in range(-lim, lim + 1):
            descend(prefix + (c,), residual - c * c, remaining - 1)

    descend((), r2, d)
    return LatticePointSet(d, tuple(sorted(out)), kind="sphere", param=r2)


@dataclass(frozen=True)
class NestedGridSchedule:
    """Finite prefix of the doubly-exponential grid ladder n_k = 2^(d*2^k)."""

    d: int
    s: float
    start: int
    levels: tuple[tuple[int, int, int, float], ...]  # (k, side, n_k, radius)

    def __post_init__(self):
        ns = [lvl[2] for lvl in self.levels]
        assert all(a < b for a, b in zip(ns, ns[1:])), "n_k must increase"


def nested_grid_schedule(d: int, s: float, start: int, depth: int) -> NestedGridSchedule:
    """Levels (k, side, n_k, n_k^(-1/s)) for k = start .. start+depth-1.

    Stops at 64-bit capacity: any n_k = 2^(d*2^k) >= 2^63 is a size error.
    """
    if d < 2 or depth < 1 or start < 0:
        raise ValueError("need d >= 2, start >= 0, depth >= 1")
    if s <= 0:
        raise ValueError("s must be positive")
    levels = []
    for k in range(start, start + depth):
        exp = d * (1 << k)
        if exp >= 63:
            raise ValueError(f"size error: 2^{exp} exceeds 64-bit capacity at level k={k}")
        n = 1 << exp
        side = 1 << (1 << k)  # n^(1/d) exactly
        assert side**d == n
        levels.append((k, side, n, float(n) ** (-1.0 / s)))
    return NestedGridSchedule(d, s, start, tuple(levels))


@dataclass(frozen=True)
class WeightedPointMeasure:
    """Uniform atomic measure: mass 1/N per point, thickening radius N^(-1/s).

    ``scale`` maps integer coordinates into the unit cube.  ``separated`` is
    set iff the minimum pairwise scaled distance is at least the radius.
    """

    base: LatticePointSet
    scale: Fraction
    s: float
    radius: float
    mass_per_atom: float
    separated: bool
    min_separation: float


def _min_squared_distance(arr: np.ndarray) -> int:
    n = len(arr)
    best = None
    # row-chunked scan keeps memory at O(n) vectors
    for i in range(n - 1):
        diff = arr[i + 1 :] - arr[i]
        d2 = (diff * diff).sum(axis=1).min()
        if best is None or d2 < best:
            best = int(d2)
    return int(best)


def thicken(points: LatticePointSet, s: float, scale: Fraction | float) -> WeightedPointMeasure:
    """Uniform measure on the scaled points with radius N^(-1/s).

    Requires 0 < s < d and that the scaled set fits in a unit cube, i.e.
    scale * (coordinate span) <= 1 per axis.
    """
    if not 0 < s < points.d:
        raise ValueError(f"s must lie in (0, d) = (0, {points.d})")
    sc = Fraction(scale)
    if sc <= 0:
        raise ValueError("scale must be positive")
    arr = points.as_array()
    span = int((arr.max(axis=0) - arr.min(axis=0)).max())
    if sc * span > 1:
        raise ValueError("scaled point set does not fit in a unit cube")
    n = len(points)
    radius = float(n) ** (-1.0 / s)
    if n < 2:
        return WeightedPointMeasure(points, sc, s, radius, 1.0 / n, True, math.inf)
    min_sep = float(sc) * math.sqrt(_min_squared_distance(arr))
    return WeightedPointMeasure(points, sc, s, radius, 1.0 / n, min_sep >= radius, min_sep)


def save_points_csv(pts: LatticePointSet, path) -> None:
    """CSV layout: header ``dim,side_or_r2,kind``, a metadata row, then one
    row of d integers per point."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dim", "side_or_r2", "kind"])
        writer.writerow([pts.d, pts.param, pts.kind])
        for p in pts.points:
            writer.writerow(list(p))


def load_points_csv(path) -> LatticePointSet:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2 or rows[0] != ["dim", "side_or_r2", "kind"]:
        raise ValueError(f"malformed point CSV {path}")
    d, param, kind = int(rows[1][0]), int(rows[1][1]), rows[1][2]
    pts = tuple(tuple(int(c) for c in row) for row in rows[2:] if row)
    return LatticePointSet(d, pts, kind=kind, param=param)
