"""Exact angle censuses over vertex-marked configurations.

A counted configuration is (vertex q, unordered pair {p, r}) with p != q,
r != q, p != r, so an N-point set has exactly N(N-1)(N-2)/2 of them and every
census must sum to that total.  Two independent engines are provided: a pure
Python O(N^3) brute-force oracle, and a per-vertex vectorized path whose
integer arithmetic is kept exact (float64 products are used only where the
coordinate span provably keeps them below 2^53).

``windowed_mass`` is the one floating-valued operation; its window decision
rule is shared verbatim between oracle and fast path so both produce
bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .exact_angles import AngleKey, RIGHT_ANGLE, format_key, is_right
from .lattice import LatticePointSet, Point, WeightedPointMeasure

BRUTE_CAP = 600
FAST_CAP = 40_000

# window membership: floating cosine with a fixed guard band, except t = 0
# which gets an exact rational test (boundary hits there are common)
_WINDOW_GUARD = 1e-12


@dataclass(frozen=True)
class CensusReport:
    counts: dict
    n: int
    total: int

    def __post_init__(self):
        assert self.total == self.n * (self.n - 1) * (self.n - 2) // 2
        assert sum(self.counts.values()) == self.total


@dataclass(frozen=True)
class SphereDecomposition:
    """Spheres centered at block points: (center, r2) -> members of P on it."""

    entries: dict
    n_p: int
    n_q: int


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise ValueError(f"point count {n} exceeds cap {cap}")


# ---------------------------------------------------------------------------
# brute-force oracle (pure Python, no numpy)


def brute_force_census(points: LatticePointSet, cap: int = BRUTE_CAP) -> CensusReport:
    """Exact per-key counts by direct enumeration of all configurations."""
    pts = points.points
    n = len(pts)
    _check_cap(n, cap)
    counts: dict[AngleKey, int] = {}
    gcd = math.gcd
    for qi in range(n):
        q = pts[qi]
        rest = pts[:qi] + pts[qi + 1 :]
        diffs = [tuple(a - b for a, b in zip(p, q)) for p in rest]
        norms = [sum(c * c for c in u) for u in diffs]
        for i in range(len(rest)):
            u, nu = diffs[i], norms[i]
            for j in range(i + 1, len(rest)):
                v = diffs[j]
                dp = sum(x * y for x, y in zip(u, v))
                num = dp * dp
                den = nu * norms[j]
                g = gcd(num, den)
                key = AngleKey((dp > 0) - (dp < 0), num // g, den // g)
                counts[key] = counts.get(key, 0) + 1
    return CensusReport(counts, n, n * (n - 1) * (n - 2) // 2)


def brute_force_distinct(points: LatticePointSet, cap: int = BRUTE_CAP):
    """(distinct keys, distinct configuration dot products) by enumeration."""
    pts = points.points
    n = len(pts)
    _check_cap(n, cap)
    keys = set()
    dots = set()
    for qi in range(n):
        q = pts[qi]
        rest = pts[:qi] + pts[qi + 1 :]
        diffs = [tuple(a - b for a, b in zip(p, q)) for p in rest]
        norms = [sum(c * c for c in u) for u in diffs]
        for i in range(len(rest)):
            u, nu = diffs[i], norms[i]
            for j in range(i + 1, len(rest)):
                v = diffs[j]
                dp = sum(x * y for x, y in zip(u, v))
                dots.add(dp)
                num = dp * dp
                den = nu * norms[j]
                g = math.gcd(num, den)
                keys.add(AngleKey((dp > 0) - (dp < 0), num // g, den // g))
    return len(keys), len(dots)


def brute_force_windowed(measure: WeightedPointMeasure, t: float, eps: float,
                         cap: int = BRUTE_CAP) -> float:
    """Windowed triple mass by full ordered (x, y, z) enumeration."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts = measure.base.points
    n = len(pts)
    _check_cap(n, cap)
    lo, hi = _window_bounds(t, eps)
    eps_sq = Fraction(eps) ** 2 if t == 0 else None
    w = 0
    for zi in range(n):
        z = pts[zi]
        rest = pts[:zi] + pts[zi + 1 :]
        diffs = [tuple(a - b for a, b in zip(p, z)) for p in rest]
        norms = [sum(c * c for c in u) for u in diffs]
        for i in range(len(rest)):
            u, nu = diffs[i], norms[i]
            for j in range(len(rest)):
                if i == j:
                    # x = y: cosine exactly 1
                    w += _window_admits_one(t, eps, lo, hi)
                    continue
                v = diffs[j]
                dp = sum(x * y for x, y in zip(u, v))
                if t == 0:
                    inside = dp * dp <= eps_sq * (nu * norms[j])
                else:
                    c = dp / (math.sqrt(nu) * math.sqrt(norms[j]))
                    inside = lo <= c <= hi
                if inside:
                    w += 1
    return measure.mass_per_atom**3 * w


# ---------------------------------------------------------------------------
# shared window decision pieces


def _window_bounds(t: float, eps: float):
    return t - eps - _WINDOW_GUARD, t + eps + _WINDOW_GUARD


def _window_admits_one(t: float, eps: float, lo: float, hi: float) -> int:
    if t == 0:
        return 1 if Fraction(eps) >= 1 else 0
    return 1 if lo <= 1.0 <= hi else 0


# ---------------------------------------------------------------------------
# vectorized per-vertex engine

def _span(arr: np.ndarray) -> int:
    return int(arr.max() - arr.min()) if len(arr) else 0


def _exact_float_ok(d: int, span: int) -> bool:
    # dot products and their squares must stay exact in float64
    dot_bound = d * span * span
    return dot_bound < 2**26 and dot_bound * dot_bound < 2**53


def _pack_limit(d: int, span: int) -> int:
    # keys pack into ((sign+1)*K + num)*K + den with K > any num or den
    return d * d * span**4 + 1


def _vertex_geometry(arr: np.ndarray, qi: int):
    """Float64 diffs, exact dot matrix, squared norms for one vertex."""
    diffs = np.delete(arr, qi, axis=0) - arr[qi]
    f = diffs.astype(np.float64)
    dp = f @ f.T
    n2 = (f * f).sum(axis=1)
    return dp, n2


def _count_right_range(pts, lo, hi) -> int:
    arr = np.asarray(pts, dtype=np.int64)
    total = 0
    for qi in range(lo, hi):
        dp, _ = _vertex_geometry(arr, qi)
        total += int(np.count_nonzero(dp == 0.0)) // 2
    return total


def _right_worker(args) -> int:
    return _count_right_range(*args)


def count_right(points: LatticePointSet, cap: int = FAST_CAP, workers: int = 1) -> int:
    """Number of configurations with an exactly right angle at the vertex."""
    n = len(points)
    _check_cap(n, cap)
    if n < 3:
        return 0
    arr = points.as_array()
    if not _exact_float_ok(points.d, _span(arr)):
        return brute_force_census(points, cap=cap).counts.get(RIGHT_ANGLE, 0)
    if workers <= 1:
        return _count_right_range(points.points, 0, n)
    bounds = _chunk_bounds(n, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_right_worker, [(points.points, a, b) for a, b in bounds]))
    return sum(parts)


def _chunk_bounds(n: int, workers: int):
    per = max(1, -(-n // (4 * workers)))
    return [(a, min(a + per, n)) for a in range(0, n, per)]


def _census_range(pts, d, lo, hi):
    """Packed (key -> count) dict for vertices in [lo, hi)."""
    arr = np.asarray(pts, dtype=np.int64)
    span = _span(arr)
    k_pack = _pack_limit(d, span)
    out: dict[int, int] = {}
    for qi in range(lo, hi):
        dp, n2 = _vertex_geometry(arr, qi)
        iu = np.triu_indices(len(arr) - 1, 1)
        dpi = dp[iu].astype(np.int64)
        num = dpi * dpi
        den = (n2[iu[0]] * n2[iu[1]]).astype(np.int64)
        g = np.gcd(num, den)
        packed = ((np.sign(dpi) + 1) * k_pack + num // g) * k_pack + den // g
        vals, cnts = np.unique(packed, return_counts=True)
        for v, c in zip(vals.tolist(), cnts.tolist()):
            out[v] = out.get(v, 0) + c
    return out


def _census_worker(args):
    return _census_range(*args)


def census(points: LatticePointSet, cap: int = FAST_CAP, workers: int = 1) -> CensusReport:
    """Full per-key census via the vectorized per-vertex path."""
    n = len(points)
    _check_cap(n, cap)
    if n < 3:
        return CensusReport({}, n, 0)
    arr = points.as_array()
    span = _span(arr)
    k_pack = _pack_limit(points.d, span)
    if not _exact_float_ok(points.d, span) or 3 * k_pack * k_pack >= 2**63:
        return brute_force_census(points, cap=cap)
    if workers <= 1:
        packed = _census_range(points.points, points.d, 0, n)
    else:
        bounds = _chunk_bounds(n, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                _census_worker, [(points.points, points.d, a, b) for a, b in bounds]
            )
            packed = {}
            for part in parts:  # chunk order fixed by submission order
                for v, c in part.items():
                    packed[v] = packed.get(v, 0) + c
    counts = {}
    for v, c in packed.items():
        den = v % k_pack
        rest = v // k_pack
        num = rest % k_pack
        sign = rest // k_pack - 1
        counts[AngleKey(int(sign), int(num), int(den))] = c
    return CensusReport(counts, n, n * (n - 1) * (n - 2) // 2)


def count_key(points: LatticePointSet, key: AngleKey, cap: int = FAST_CAP,
              workers: int = 1) -> int:
    """Occurrences of one angle key, by exact per-vertex matching."""
    n = len(points)
    _check_cap(n, cap)
    if n < 3:
        return 0
    arr = points.as_array()
    span = _span(arr)
    # dp^2 * den and num * prod must stay below 2^62 for exact int64 tests
    big = _pack_limit(points.d, span) - 1
    if not _exact_float_ok(points.d, span) or big * big * max(key.den, 1) >= 2**62:
        return brute_force_census(points, cap=cap).counts.get(key, 0)
    total = 0
    for qi in range(n):
        dp, n2 = _vertex_geometry(arr, qi)
        iu = np.triu_indices(len(arr) - 1, 1)
        dpi = dp[iu].astype(np.int64)
        prod = (n2[iu[0]] * n2[iu[1]]).astype(np.int64)
        match = (np.sign(dpi) == key.sign) & (dpi * dpi * key.den == key.num * prod)
        total += int(np.count_nonzero(match))
    return total


def distinct_angles(points: LatticePointSet, cap: int = FAST_CAP):
    """(distinct keys, distinct configuration dot products), exactly.

    The dot products are (p - q).(r - q) over configurations; their distinct
    count is reported separately from the key count because an angle depends
    on the dot product together with both squared lengths.
    """
    n = len(points)
    _check_cap(n, cap)
    if n < 3:
        return 0, 0
    arr = points.as_array()
    span = _span(arr)
    k_pack = _pack_limit(points.d, span)
    if not _exact_float_ok(points.d, span) or 3 * k_pack * k_pack >= 2**63:
        return brute_force_distinct(points, cap=cap)
    keys: set[int] = set()
    dots: set[int] = set()
    for qi in range(n):
        dp, n2 = _vertex_geometry(arr, qi)
        iu = np.triu_indices(len(arr) - 1, 1)
        dpi = dp[iu].astype(np.int64)
        num = dpi * dpi
        den = (n2[iu[0]] * n2[iu[1]]).astype(np.int64)
        g = np.gcd(num, den)
        packed = ((np.sign(dpi) + 1) * k_pack + num // g) * k_pack + den // g
        keys.update(np.unique(packed).tolist())
        dots.update(np.unique(dpi).tolist())
    return len(keys), len(dots)


def pairwise_dot_values(points: LatticePointSet):
    """Sorted distinct values of p.q over unordered pairs of distinct points.

    For points on a common origin-centered sphere of squared radius r2 these
    integers lie in [-r2, r2 - 1] plus possibly -r2..r2 endpoints, so there
    are at most 2*r2 + 1 of them; the census side exposes them for that
    pigeonhole check.
    """
    arr = points.as_array()
    n = len(arr)
    if n < 2:
        return ()
    gram = arr @ arr.T
    iu = np.triu_indices(n, 1)
    return tuple(int(v) for v in np.unique(gram[iu]))


def max_repetition(report: CensusReport):
    """(key, count) of the most repeated angle; ties pick the smallest
    (sign, num, den) lexicographically."""
    if not report.counts:
        raise ValueError("empty census report")
    best = max(report.counts.values())
    key = min(k for k, v in report.counts.items() if v == best)
    return key, best


# ---------------------------------------------------------------------------
# windowed triple mass


def windowed_mass(measure: WeightedPointMeasure, t: float, eps: float,
                  cap: int = FAST_CAP) -> float:
    """Mass of ordered triples (x, y, z), x != z != y, whose cosine at z lies
    in [t - eps, t + eps]; x = y contributes the cosine-1 diagonal.

    Equals mass_per_atom^3 times an integer window count, so results are
    reproducible bit-for-bit.  Cosines are scale-invariant, so the integer
    base coordinates are used directly.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts = measure.base
    n = len(pts)
    _check_cap(n, cap)
    if n < 2:
        return 0.0
    arr = pts.as_array()
    if not _exact_float_ok(pts.d, _span(arr)):
        return brute_force_windowed(measure, t, eps, cap=cap)
    lo, hi = _window_bounds(t, eps)
    diag = _window_admits_one(t, eps, lo, hi)
    w = diag * n * (n - 1)
    if t == 0:
        w += 2 * _right_window_pairs(pts, arr, eps)
    else:
        for qi in range(n):
            dp, n2 = _vertex_geometry(arr, qi)
            iu = np.triu_indices(n - 1, 1)
            root = np.sqrt(n2)
            c = dp[iu] / (root[iu[0]] * root[iu[1]])
            w += 2 * int(np.count_nonzero((lo <= c) & (c <= hi)))
    return measure.mass_per_atom**3 * w


def _right_window_pairs(pts: LatticePointSet, arr: np.ndarray, eps: float) -> int:
    """Exact count of pairs with (u.v)^2 <= eps^2 |u|^2 |v|^2.

    Floats decide pairs far from the boundary; the narrow boundary band is
    settled by exact rational arithmetic, so the decision matches the oracle
    on every pair.
    """
    n = len(arr)
    e2f = eps * eps
    eps_sq = Fraction(eps) ** 2
    total = 0
    tuples = pts.points
    for qi in range(n):
        dp, n2 = _vertex_geometry(arr, qi)
        iu = np.triu_indices(n - 1, 1)
        lhs = dp[iu] ** 2
        rhs = e2f * (n2[iu[0]] * n2[iu[1]])
        diff = lhs - rhs
        tol = 1e-9 * (lhs + rhs)
        total += int(np.count_nonzero(diff < -tol))
        border = np.nonzero(np.abs(diff) <= tol)[0]
        if len(border):
            q = tuples[qi]
            rest = tuples[:qi] + tuples[qi + 1 :]
            for b in border.tolist():
                i, j = int(iu[0][b]), int(iu[1][b])
                u = tuple(a - c for a, c in zip(rest[i], q))
                v = tuple(a - c for a, c in zip(rest[j], q))
                dpi = sum(x * y for x, y in zip(u, v))
                nu = sum(x * x for x in u)
                nv = sum(x * x for x in v)
                if dpi * dpi <= eps_sq * (nu * nv):
                    total += 1
    return total


# ---------------------------------------------------------------------------
# sphere decomposition and the antipodal right-angle lower bound


def build_sphere_decomposition(p_set: LatticePointSet, q_set: LatticePointSet) -> SphereDecomposition:
    """For every center in Q and every squared radius realized by another Q
    point, list all P points on that sphere."""
    if p_set.d != q_set.d:
        raise ValueError("P and Q must share a dimension")
    p_points = set(p_set.points)
    if not set(q_set.points) <= p_points:
        raise ValueError("Q must be a subset of P")
    arr = p_set.as_array()
    entries: dict[tuple[Point, int], tuple[Point, ...]] = {}
    for center in q_set.points:
        c = np.asarray(center, dtype=np.int64)
        diff = arr - c
        d2 = (diff * diff).sum(axis=1)
        radii = sorted(
            {int(sum((a - b) ** 2 for a, b in zip(q, center))) for q in q_set.points if q != center}
        )
        for r2 in radii:
            members = tuple(p_set.points[i] for i in np.nonzero(d2 == r2)[0])
            if members:
                entries[(center, r2)] = members
    return SphereDecomposition(entries, len(p_set), len(q_set))


def antipodal_lower_bound(decomp: SphereDecomposition, p_set: LatticePointSet,
                          debug: bool = False) -> int:
    """Sum over spheres of A * (m - 2): A antipodal pairs verified present,
    m members.  Any third sphere point makes a right angle with an antipodal
    pair (Thales), and a pair is antipodal on exactly one sphere, so every
    configuration is counted at most once and the sum is a valid lower bound
    for count_right(P)."""
    total = 0
    for (center, _r2), members in decomp.entries.items():
        m = len(members)
        if m < 3:
            continue
        member_set = set(members)
        pairs = []
        for p in members:
            anti = tuple(2 * c - x for c, x in zip(center, p))
            if anti > p and anti in member_set:
                pairs.append((p, anti))
        if debug:
            for p, anti in pairs:
                for q in members:
                    if q != p and q != anti:
                        assert is_right(q, p, anti)
        total += len(pairs) * (m - 2)
    return total


# ---------------------------------------------------------------------------
# serialization


def report_csv_text(report: CensusReport) -> str:
    lines = ["angle_key,count"]
    for key in sorted(report.counts):
        lines.append(f"{format_key(key)},{report.counts[key]}")
    return "\n".join(lines) + "\n"


def report_summary(report: CensusReport) -> dict:
    if report.counts:
        key, count = max_repetition(report)
        max_key, max_count = format_key(key), count
    else:
        max_key, max_count = None, 0
    return {
        "n_points": report.n,
        "total": report.total,
        "distinct_keys": len(report.counts),
        "max_key": max_key,
        "max_count": max_count,
    }
