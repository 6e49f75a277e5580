import math
from fractions import Fraction

import pytest

from latticeangles.lattice import LatticePointSet, generate_grid, sphere_lattice, thicken
from latticeangles.spectrum import (
    angle_set_estimate,
    equitable_sup,
    estimate_json_dict,
    histogram_csv_text,
    nu_epsilon,
    nu_profile,
)

TRIANGLE = LatticePointSet(2, ((0, 0), (1, 0), (0, 1)))


def triangle_measure():
    return thicken(TRIANGLE, 1.0, Fraction(1))


def cross_measure():
    return thicken(sphere_lattice(2, 1), 1.0, Fraction(1, 2))


def test_nu_right_triangle():
    m = triangle_measure()
    assert abs(nu_epsilon(m, 0.0, 0.1) - 20 / 27) < 1e-12


def test_nu_wide_window_halves_total():
    m = triangle_measure()
    assert abs(nu_epsilon(m, 0.0, 2.0) - (12 / 27) / 2) < 1e-12


def test_nu_single_atom():
    single = thicken(LatticePointSet(2, ((1, 1),)), 1.0, Fraction(1, 2))
    assert nu_epsilon(single, 0.0, 0.5) == 0.0


def test_nu_mass_monotone_in_eps():
    m = triangle_measure()
    masses = [eps * nu_epsilon(m, 0.3, eps) for eps in (0.05, 0.1, 0.2, 0.5, 1.0)]
    assert all(a <= b + 1e-15 for a, b in zip(masses, masses[1:]))


def test_window_consistency():
    m = triangle_measure()
    whole = 0.3 * nu_epsilon(m, 0.0, 0.3)
    parts = sum(0.1 * nu_epsilon(m, t, 0.1) for t in (-0.2, 0.0, 0.2))
    assert abs(whole - parts) < 1e-12


def test_profile_centers_and_total():
    m = triangle_measure()
    hist = nu_profile(m, 0.1, 20)
    centers = [t for t, _ in hist.bins]
    assert centers[0] == -1.0 + 1 / 20
    assert abs(centers[-1] - (1.0 - 1 / 20)) < 1e-15
    assert len(centers) == 20
    assert abs(hist.total_mass_check - 12 / 27) < 1e-15
    # peaks: right angle at t~0 and the 45-degree cosine near 0.707
    by_center = dict(hist.bins)
    assert by_center[centers[10]] > 0  # center 0.05, window catches cos 0
    assert max(v for t, v in hist.bins if 0.6 < t < 0.8) > 0


def test_profile_partition_identity():
    # 15 tiling windows: bin boundaries avoid every realized cosine
    m = triangle_measure()
    hist = nu_profile(m, 1 / 15, 15)
    total = sum(v / 15 for _, v in hist.bins)
    assert abs(total - hist.total_mass_check) < 1e-12


def test_profile_two_atoms_all_zero():
    two = thicken(LatticePointSet(2, ((0, 0), (1, 0))), 1.0, Fraction(1))
    hist = nu_profile(two, 0.04, 20)  # eps < bin half-width keeps cos=1 out
    assert all(v == 0.0 for _, v in hist.bins)


def test_profile_single_bin():
    m = triangle_measure()
    hist = nu_profile(m, 1.0, 1)
    (t, v), = hist.bins
    assert t == 0.0
    assert abs(v * 1.0 - hist.total_mass_check) < 1e-15


def test_profile_validation():
    with pytest.raises(ValueError):
        nu_profile(triangle_measure(), 0.1, 0)


def test_equitable_sup_triangle():
    t_max, v_max = equitable_sup(triangle_measure(), 0.1)
    # the angle-0 diagonal dominates: windows reaching cos=1 hold mass 6/27
    assert abs(t_max - 0.9) < 1e-12
    assert abs(v_max - (6 / 27) / 0.1) < 1e-12


def test_equitable_sup_cross():
    m = cross_measure()
    t_max, v_max = equitable_sup(m, 0.1)
    # sixteen ordered configurations at cos 2^-0.5 beat the eight right ones
    assert abs(t_max - 0.65) < 1e-12
    assert abs(v_max - 2.5) < 1e-12
    assert abs(nu_epsilon(m, 0.0, 0.1) - 1.25) < 1e-12


def test_equitable_sup_single_atom():
    single = thicken(LatticePointSet(2, ((1, 1),)), 1.0, Fraction(1, 2))
    _, v = equitable_sup(single, 0.2)
    assert v == 0.0


def test_angle_set_unit_square():
    sq = LatticePointSet(2, ((0, 0), (0, 1), (1, 0), (1, 1)))
    est = angle_set_estimate(sq, 0.05)
    assert est.occupied_bins == 2  # cos 0 and cos 2^-0.5
    assert abs(est.measure_estimate - 0.1) < 1e-15
    assert est.distinct_keys == 2


def test_angle_set_huge_eps():
    sq = LatticePointSet(2, ((0, 0), (0, 1), (1, 0), (1, 1)))
    est = angle_set_estimate(sq, 2.0)
    assert est.occupied_bins == 1
    assert est.measure_estimate == 2.0


def test_angle_set_bounded_by_cosine_range():
    for pts in (generate_grid(2, 4), sphere_lattice(2, 25)):
        for eps in (0.5, 0.25, 0.125):
            est = angle_set_estimate(pts, eps)
            assert est.measure_estimate <= 2.0 + eps


def test_angle_set_covering_property():
    pts = generate_grid(2, 5)
    for eps in (0.05, 0.1, 0.2):
        fine = angle_set_estimate(pts, eps).occupied_bins
        coarse = angle_set_estimate(pts, 2 * eps).occupied_bins
        assert fine <= 2 * coarse + 2


def test_angle_set_sphere_d4():
    est = angle_set_estimate(sphere_lattice(4, 25), 0.1)
    assert est.distinct_keys == 6067
    assert est.occupied_bins <= 20


def test_angle_set_validation():
    with pytest.raises(ValueError):
        angle_set_estimate(generate_grid(2, 3), 0.0)


def test_histogram_csv_layout():
    hist = nu_profile(triangle_measure(), 0.5, 4)
    lines = histogram_csv_text(hist).splitlines()
    assert lines[0] == "t,nu"
    assert len(lines) == 5
    t0, v0 = lines[1].split(",")
    assert float(t0) == -0.75


def test_estimate_json_fields():
    est = angle_set_estimate(generate_grid(2, 3), 0.25)
    payload = estimate_json_dict(est)
    assert set(payload) == {"eps", "occupied_bins", "measure_estimate", "distinct_keys"}
    assert payload["distinct_keys"] == 12
