"""Riesz s-energies, separation-based adaptability verdicts, and dyadic shell
statistics on origin-centered sphere lattices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import LatticePointSet

# a set is judged adaptable when it is N^(-1/s)-separated and its normalized
# energy stays below this configurable constant
DEFAULT_ENERGY_BOUND = 10.0


@dataclass(frozen=True)
class EnergyReport:
    s: float
    value: float
    min_separation: float
    adaptable: bool
    n: int


@dataclass(frozen=True)
class ShellCountReport:
    """Per-point dyadic shell counts w_j(k) on one sphere.

    Shells are the half-open bands 2^j <= |k - l| < 2^(j+1); closed bands
    would double-count distances at exact powers of two and break the
    partition identity sum_j w_j(k) = m - 1.  Membership is decided on exact
    integer squared distances: 4^j <= |k-l|^2 < 4^(j+1).
    """

    r2: int
    m: int
    counts: tuple  # (k_index, {j: w_j}) per sphere point, in sphere order
    max_ratio: float  # max over j, k of w_j(k) / 2^(j*(d-2))


def riesz_energy(points: LatticePointSet, s: float, scale: Fraction | float = 1,
                 energy_bound: float = DEFAULT_ENERGY_BOUND) -> EnergyReport:
    """value = N^-2 * sum over ordered pairs of (scale*|p-p'|)^-s.

    Pair terms are accumulated per first index and combined with compensated
    summation in a fixed order, so reruns reproduce the value exactly.
    """
    n = len(points)
    if n < 2:
        raise ValueError("need at least 2 points")
    if not 0 < s < points.d:
        raise ValueError(f"s must lie in (0, d) = (0, {points.d})")
    sc = float(Fraction(scale))
    if sc <= 0:
        raise ValueError("scale must be positive")
    arr = points.as_array()
    row_sums = []
    min_d2 = None
    for i in range(n):
        diff = arr - arr[i]
        d2 = (diff * diff).sum(axis=1).astype(np.float64)
        d2[i] = np.inf
        m = int(d2.min())
        if min_d2 is None or m < min_d2:
            min_d2 = m
        row_sums.append(float(((sc * np.sqrt(d2)) ** (-s)).sum()))
    value = math.fsum(row_sums) / (n * n)
    min_sep = sc * math.sqrt(min_d2)
    separated = min_sep >= float(n) ** (-1.0 / s)
    return EnergyReport(s, value, min_sep, separated and value <= energy_bound, n)


def _dyadic_band(d2: np.ndarray) -> np.ndarray:
    """j with 4^j <= d2 < 4^(j+1), exactly, for positive integer d2 < 2^53."""
    # frexp exponent gives floor(log2) exactly for integers in float64 range
    _, e = np.frexp(d2.astype(np.float64))
    return (e - 1) // 2


def shell_counts(sphere: LatticePointSet, r2: int) -> ShellCountReport:
    """Exact w_j(k) for every point k of an origin-centered sphere set."""
    m = len(sphere)
    if m == 0:
        raise ValueError("empty sphere")
    arr = sphere.as_array()
    d = sphere.d
    counts = []
    max_ratio = 0.0
    for idx in range(m):
        diff = arr - arr[idx]
        d2 = (diff * diff).sum(axis=1)
        d2 = d2[d2 > 0]
        assert len(d2) == m - 1
        js, ws = np.unique(_dyadic_band(d2), return_counts=True)
        per = {int(j): int(w) for j, w in zip(js, ws)}
        counts.append((idx, per))
        for j, w in per.items():
            ratio = w / 2.0 ** (j * (d - 2))
            if ratio > max_ratio:
                max_ratio = ratio
    return ShellCountReport(int(r2), m, tuple(counts), max_ratio)


def cross_term(sphere: LatticePointSet, r2: int, s: float) -> float:
    """m^-2 * r2^(s/2) * sum over ordered pairs k != l of |k - l|^-s."""
    m = len(sphere)
    if m < 2:
        raise ValueError("need at least 2 sphere points")
    if not 0 < s < (sphere.d - 1) / 2:
        raise ValueError(f"s must lie in (0, (d-1)/2) = (0, {(sphere.d - 1) / 2})")
    arr = sphere.as_array()
    rows = []
    for i in range(m):
        diff = arr - arr[i]
        d2 = (diff * diff).sum(axis=1).astype(np.float64)
        d2[i] = np.inf
        rows.append(float((d2 ** (-s / 2.0)).sum()))
    return float(r2) ** (s / 2.0) * math.fsum(rows) / (m * m)


def shell_csv_text(report: ShellCountReport) -> str:
    lines = ["r2,k_index,j,w_j"]
    for k_index, per in report.counts:
        for j in sorted(per):
            lines.append(f"{report.r2},{k_index},{j},{per[j]}")
    return "\n".join(lines) + "\n"


def energy_json_dict(report: EnergyReport) -> dict:
    return {
        "s": report.s,
        "value": report.value,
        "min_separation": report.min_separation,
        "adaptable": report.adaptable,
        "n": report.n,
    }
