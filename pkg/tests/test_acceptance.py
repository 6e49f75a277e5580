"""End-to-end checks of the package's headline claims.

One test per criterion; each line of ``pytest -v`` output over this file is
one verdict.  Slopes are fitted on the exact ladders named in the module
docstrings, with the stated slack; runtime budgets are asserted so the suite
notices when an implementation change makes an experiment blow up.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from latticeangles.census import (
    brute_force_census,
    brute_force_distinct,
    brute_force_windowed,
    census,
    count_key,
    count_right,
    distinct_angles,
    pairwise_dot_values,
    report_csv_text,
    windowed_mass,
)
from latticeangles.energy import cross_term, riesz_energy
from latticeangles.exact_angles import RIGHT_ANGLE, AngleKey
from latticeangles.lattice import LatticePointSet, generate_grid, sphere_lattice, thicken
from latticeangles.oscillatory import build_shell_grid, decay_fit, fourier_sample
from latticeangles.scaling import (
    report_csv_text as scaling_csv,
    run_equitable_violation,
    run_repetition_bound,
    run_right_angle_scaling,
    run_shell_bound,
)

D4_LADDER = (5, 13, 25, 29, 37, 41)


def _random_set(rng, d, n, span=9) -> LatticePointSet:
    pts = set()
    while len(pts) < n:
        pts.add(tuple(rng.randrange(-span, span + 1) for _ in range(d)))
    return LatticePointSet(d, tuple(sorted(pts)))


def test_criterion_01_oracle_equivalence():
    start = time.monotonic()
    rng = random.Random(20240901)
    for trial in range(200):
        d = rng.choice((2, 3, 4))
        n = rng.randrange(4, 41)
        pts = _random_set(rng, d, n)
        oracle = brute_force_census(pts)
        assert count_right(pts) == oracle.counts.get(RIGHT_ANGLE, 0)
        probe = rng.choice(list(oracle.counts))
        assert count_key(pts, probe) == oracle.counts[probe]
        assert count_key(pts, AngleKey(1, 3, 7)) == oracle.counts.get(AngleKey(1, 3, 7), 0)
        assert distinct_angles(pts) == brute_force_distinct(pts)
        m = thicken(pts, 1.0, Fraction(1, 2 * 9 + 1))
        t = rng.choice((0.0, 0.25, -0.6, 1.0))
        eps = rng.choice((0.05, 0.2))
        assert windowed_mass(m, t, eps) == brute_force_windowed(m, t, eps)
    assert time.monotonic() - start < 60.0


def test_criterion_02_census_totals():
    rng = random.Random(77)
    for trial in range(60):
        d = rng.choice((2, 3, 4))
        pts = _random_set(rng, d, rng.randrange(3, 30))
        rep = census(pts)
        n = len(pts)
        assert sum(rep.counts.values()) == rep.total == n * (n - 1) * (n - 2) // 2


def test_criterion_03_thales_lower_bound():
    start = time.monotonic()
    d2 = run_right_angle_scaling(2, [8, 12, 16, 24, 32], slack=0.2)
    assert [v for _, v in d2.rows] == [5520, 34936, 126176, 751152, 2626160]
    assert d2.slope >= 1.8
    assert d2.passed
    for bound, (_, value) in zip(d2.aux["antipodal_bounds"], d2.rows):
        assert 0 < bound <= value
    assert all(r > 0 for r in d2.aux["antipodal_ratios"])

    d3 = run_right_angle_scaling(3, [4, 5, 6, 8], slack=0.3)
    assert d3.slope >= 7 / 3 - 0.3
    assert d3.passed
    for bound, (_, value) in zip(d3.aux["antipodal_bounds"], d3.rows):
        assert 0 < bound <= value
    assert time.monotonic() - start < 180.0


def test_criterion_04_equitable_violation():
    start = time.monotonic()
    report = run_equitable_violation(2, 0.8, [8, 16, 32], slack=0.2)
    values = [v for _, v in report.rows]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert report.aux["strictly_increasing"]
    assert report.slope >= 0.05
    assert report.passed
    assert time.monotonic() - start < 120.0


def test_criterion_05_repetition_bound():
    start = time.monotonic()
    report = run_repetition_bound(2, 1.6, [8, 12, 16, 24])
    assert report.slope <= 3 - 1 / 1.6 + 0.1
    assert report.passed
    assert time.monotonic() - start < 120.0


def test_criterion_06_sphere_dot_pigeonhole():
    start = time.monotonic()
    admissible = [r2 for r2 in D4_LADDER if r2 % 4 != 0 and r2 <= 50][:5]
    assert len(admissible) == 5
    observed = []
    for r2 in admissible:
        sphere = sphere_lattice(4, r2)
        dots = pairwise_dot_values(sphere)
        assert len(dots) <= 2 * r2 + 1
        assert all(-r2 <= v <= r2 for v in dots)
        observed.append(len(dots))
    assert observed == [10, 26, 48, 56, 72]
    assert time.monotonic() - start < 120.0


def test_criterion_07_shell_bound():
    start = time.monotonic()
    report = run_shell_bound(4, list(D4_LADDER))
    assert report.aux["partition_ok"]
    assert report.aux["slope_vs_R"] <= 0.2
    assert report.passed
    assert time.monotonic() - start < 60.0


def test_criterion_08_cross_term_band():
    start = time.monotonic()
    values = [cross_term(sphere_lattice(4, r2), r2, 0.9) for r2 in D4_LADDER]
    assert max(values) / min(values) <= 4.0
    assert time.monotonic() - start < 60.0


def test_criterion_09_energy_exactness():
    two = LatticePointSet(2, ((0, 0), (1, 0)))
    assert abs(riesz_energy(two, 1.0).value - 0.5) <= 1e-12
    rng = random.Random(1601)
    for trial in range(50):
        pts = _random_set(rng, rng.choice((2, 3)), rng.randrange(2, 12))
        s = rng.uniform(0.3, 1.7)
        lam = Fraction(rng.randrange(1, 6), rng.randrange(6, 40))
        base = riesz_energy(pts, s).value
        scaled = riesz_energy(pts, s, lam).value
        assert abs(scaled - float(lam) ** (-s) * base) <= 1e-10 * max(base, scaled)


@pytest.mark.slow
def test_criterion_10_fourier_decay():
    start = time.monotonic()
    grid = build_shell_grid(2, 0.0, 0.05, 1 / 64)
    zero = fourier_sample(grid, (0.0, 0.0), (0.0, 0.0))
    assert abs(zero - 1.0) <= 1e-12
    fit = decay_fit(grid, ((1.0, 0.0), (0.0, 1.0)), [4.0, 8.0, 16.0, 32.0])
    assert fit.gamma_hat >= 0.5
    assert time.monotonic() - start < 300.0


def test_criterion_11_worker_determinism():
    grid = generate_grid(2, 8)
    seq_census = report_csv_text(census(grid, workers=1))
    par_census = report_csv_text(census(grid, workers=8))
    assert seq_census.encode() == par_census.encode()

    seq_rows = scaling_csv(run_right_angle_scaling(2, [4, 6, 8], workers=1))
    par_rows = scaling_csv(run_right_angle_scaling(2, [4, 6, 8], workers=8))
    assert seq_rows.encode() == par_rows.encode()

    seq_rep = scaling_csv(run_repetition_bound(2, 1.6, [4, 6, 8], workers=1))
    par_rep = scaling_csv(run_repetition_bound(2, 1.6, [4, 6, 8], workers=8))
    assert seq_rep.encode() == par_rep.encode()
