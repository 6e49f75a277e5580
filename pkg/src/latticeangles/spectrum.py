"""Angle-distribution functional nu_eps(t), its profile and sup over t, and a
covering-style estimate of the realized angle set."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .census import FAST_CAP, _check_cap, _exact_float_ok, _span, _vertex_geometry, \
    distinct_angles, windowed_mass
from .lattice import LatticePointSet, WeightedPointMeasure


@dataclass(frozen=True)
class AngleHistogram:
    eps: float
    bins: tuple  # (t_center, nu_value) pairs over a uniform grid of [-1, 1]
    n: int
    total_mass_check: float  # total non-degenerate ordered triple mass


@dataclass(frozen=True)
class AngleSetEstimate:
    eps: float
    occupied_bins: int
    measure_estimate: float  # eps * occupied_bins
    distinct_keys: int


def nu_epsilon(measure: WeightedPointMeasure, t: float, eps: float) -> float:
    """Windowed triple mass around cosine t, normalized by the window width.

    Windows with t near the endpoints +-1 are computed like any other, but
    the angle-side and cosine-side readings diverge there (arccos is not
    bi-Lipschitz at the endpoints), so endpoint values deserve caution.
    """
    return windowed_mass(measure, t, eps) / eps


def nu_profile(measure: WeightedPointMeasure, eps: float, n_bins: int) -> AngleHistogram:
    """nu_eps evaluated at the n_bins uniform bin centers of [-1, 1]."""
    if n_bins < 1:
        raise ValueError("need at least one bin")
    n = len(measure.base)
    bins = []
    for i in range(n_bins):
        t = -1.0 + (2 * i + 1) / n_bins
        bins.append((t, nu_epsilon(measure, t, eps)))
    total = measure.mass_per_atom**3 * n * (n - 1) * (n - 1)
    return AngleHistogram(eps, tuple(bins), n, total)


def equitable_sup(measure: WeightedPointMeasure, eps: float):
    """(t_max, nu_max) over the eps/2-spaced grid of t in [-1, 1].

    A finite grid suffices because moving t by eps/2 changes the window by at
    most half its width, so the grid maximum is within a bounded factor of
    the true sup.  Ties keep the smallest t.
    """
    best_t, best_v = -1.0, -1.0
    k = 0
    while True:
        t = -1.0 + k * (eps / 2.0)
        if t > 1.0 + 1e-9:
            break
        v = nu_epsilon(measure, t, eps)
        if v > best_v:
            best_t, best_v = t, v
        k += 1
    return best_t, best_v


def angle_set_estimate(points: LatticePointSet, eps: float,
                       cap: int = FAST_CAP) -> AngleSetEstimate:
    """Number of eps-width cosine bins touched by some configuration.

    Bins partition [-1, 1] as [-1 + k*eps, -1 + (k+1)*eps); the estimate
    eps * occupied_bins is a covering approximation of the measure of the
    realized cosine set.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = len(points)
    _check_cap(n, cap)
    n_bins = max(1, math.ceil(2.0 / eps))
    occupied: set[int] = set()
    if n >= 3:
        arr = points.as_array()
        assert _exact_float_ok(points.d, _span(arr)), "coordinate span too large"
        for qi in range(n):
            dp, n2 = _vertex_geometry(arr, qi)
            iu = np.triu_indices(n - 1, 1)
            root = np.sqrt(n2)
            c = dp[iu] / (root[iu[0]] * root[iu[1]])
            idx = np.floor((c + 1.0) / eps).astype(np.int64)
            np.clip(idx, 0, n_bins - 1, out=idx)
            occupied.update(np.unique(idx).tolist())
    keys, _dots = distinct_angles(points, cap=cap) if n >= 3 else (0, 0)
    return AngleSetEstimate(eps, len(occupied), eps * len(occupied), keys)


def histogram_csv_text(hist: AngleHistogram) -> str:
    lines = ["t,nu"]
    for t, nu in hist.bins:
        lines.append(f"{t!r},{nu!r}")
    return "\n".join(lines) + "\n"


def estimate_json_dict(est: AngleSetEstimate) -> dict:
    return {
        "eps": est.eps,
        "occupied_bins": est.occupied_bins,
        "measure_estimate": est.measure_estimate,
        "distinct_keys": est.distinct_keys,
    }
