"""Quadrature probe of Fourier decay for the cosine-window pair measure.

The measure lives on pairs (u, v) in the punctured unit ball times itself,
restricted to |u.v/(|u||v|) - t| <= eps, discretized on a lattice of spacing
h and normalized to total mass 1.  ``fourier_sample`` evaluates the modulus
of its Fourier transform at a frequency pair and ``decay_fit`` regresses the
sampled magnitudes along a ray to estimate the decay exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

CELL_CAP = 5 * 10**8
_CHUNK = 1 << 20


@dataclass(frozen=True)
class ShellMeasureGrid:
    d: int
    t: float
    eps: float
    h: float
    points: np.ndarray      # integer lattice points i with 1 <= |i| <= 1/h
    pair_i: np.ndarray      # indices into points (first factor)
    pair_j: np.ndarray      # indices into points (second factor)
    weights: np.ndarray | None = None  # None means uniform 1/n_cells

    @property
    def n_cells(self) -> int:
        return len(self.pair_i)


def build_shell_grid(d: int, t: float, eps: float, h: float) -> ShellMeasureGrid:
    """Uniform grid measure on the eps-window pair set.

    Preconditions: d in {2, 3}; 0 < eps <= 0.1; 0 < h <= eps/2; the cell
    budget (1/h)^(2d) must not exceed 5e8.  The |u|, |v| >= h cutoff keeps
    the directions u/|u| defined everywhere on the support.
    """
    if d not in (2, 3):
        raise ValueError("d must be 2 or 3")
    if not 0 < eps <= 0.1:
        raise ValueError("eps must lie in (0, 0.1]")
    if not 0 < h <= eps / 2:
        raise ValueError("h must lie in (0, eps/2]")
    if (1.0 / h) ** (2 * d) > CELL_CAP:
        raise ValueError(f"cell cap exceeded: (1/h)^(2d) > {CELL_CAP:.0e}")
    m = int(math.floor(1.0 / h))
    axis = np.arange(-m, m + 1, dtype=np.int64)
    pts = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    n2 = (pts * pts).sum(axis=1)
    keep = (n2 >= 1) & (n2 <= m * m)
    pts = pts[keep]
    n2 = n2[keep].astype(np.float64)
    npts = len(pts)
    e2 = eps * eps
    ii_parts, jj_parts = [], []
    block = max(1, _CHUNK // max(npts, 1))
    ptsf = pts.astype(np.float64)
    for a in range(0, npts, block):
        dp = ptsf[a : a + block] @ ptsf.T
        if t == 0:
            mask = dp * dp <= e2 * np.outer(n2[a : a + block], n2)
        else:
            c = dp / np.sqrt(np.outer(n2[a : a + block], n2))
            mask = np.abs(c - t) <= eps
        w = np.nonzero(mask)
        ii_parts.append((w[0] + a).astype(np.int32))
        jj_parts.append(w[1].astype(np.int32))
    pair_i = np.concatenate(ii_parts) if ii_parts else np.zeros(0, np.int32)
    pair_j = np.concatenate(jj_parts) if jj_parts else np.zeros(0, np.int32)
    if len(pair_i) == 0:
        raise ValueError("empty support: no lattice pair meets the window")
    return ShellMeasureGrid(d, t, eps, h, pts, pair_i, pair_j)


def _nyquist(h: float) -> float:
    return 1.0 / (2.0 * h)


def _check_frequency(grid: ShellMeasureGrid, xi, eta) -> None:
    fmax = max(float(np.linalg.norm(xi)), float(np.linalg.norm(eta)))
    if fmax > _nyquist(grid.h) + 1e-9:
        raise ValueError(
            f"frequency {fmax:g} beyond the Nyquist guard 1/(2h) = {_nyquist(grid.h):g}"
        )


def fourier_sample(grid: ShellMeasureGrid, xi: Sequence[float], eta: Sequence[float]) -> float:
    """|sum over cells of weight * exp(-2 pi i (u.xi + v.eta))|.

    With uniform weights the zero-frequency value is exactly 1: the complex
    sum counts cells in integer float arithmetic and is divided once.
    """
    _check_frequency(grid, xi, eta)
    ptsf = grid.points.astype(np.float64)
    dot_xi = ptsf @ np.asarray(xi, dtype=np.float64)
    dot_eta = ptsf @ np.asarray(eta, dtype=np.float64)
    total = 0.0 + 0.0j
    n = grid.n_cells
    for a in range(0, n, _CHUNK):  # fixed chunk walk: deterministic reduction
        sl = slice(a, min(a + _CHUNK, n))
        phase = grid.h * (dot_xi[grid.pair_i[sl]] + dot_eta[grid.pair_j[sl]])
        z = np.exp(-2j * np.pi * phase)
        if grid.weights is not None:
            z = z * grid.weights[sl]
        total += z.sum()
    if grid.weights is None:
        return abs(total) / n
    return abs(total)


@dataclass(frozen=True)
class DecayFit:
    ray: tuple  # (xi direction, eta direction)
    lambdas: tuple
    magnitudes: tuple
    gamma_hat: float  # negated log-log slope
    residual: float   # sum of squared log-residuals


def decay_fit(grid: ShellMeasureGrid, ray, lambdas: Sequence[float]) -> DecayFit:
    """Least-squares decay exponent of |mu^(lambda * ray)| in log-log scale."""
    lams = [float(x) for x in lambdas]
    if len(lams) < 4:
        raise ValueError("need at least 4 frequencies")
    if sorted(lams) != lams or min(lams) <= 0:
        raise ValueError("lambdas must be positive and increasing")
    xi_dir = np.asarray(ray[0], dtype=np.float64)
    eta_dir = np.asarray(ray[1], dtype=np.float64)
    for lam in lams:
        _check_frequency(grid, lam * xi_dir, lam * eta_dir)
    mags = [fourier_sample(grid, lam * xi_dir, lam * eta_dir) for lam in lams]
    x = np.log(np.asarray(lams))
    y = np.log(np.asarray(mags))
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, _intercept), rss, _rank, _sv = np.linalg.lstsq(design, y, rcond=None)
    residual = float(rss[0]) if len(rss) else float(((design @ [slope, _intercept] - y) ** 2).sum())
    return DecayFit(
        (tuple(xi_dir.tolist()), tuple(eta_dir.tolist())),
        tuple(lams),
        tuple(mags),
        float(-slope),
        residual,
    )


def decay_json_dict(grid: ShellMeasureGrid, fit: DecayFit) -> dict:
    return {
        "d": grid.d,
        "t": grid.t,
        "eps": grid.eps,
        "h": grid.h,
        "ray": [list(fit.ray[0]), list(fit.ray[1])],
        "lambdas": list(fit.lambdas),
        "magnitudes": list(fit.magnitudes),
        "gamma_hat": fit.gamma_hat,
        "residual": fit.residual,
    }
