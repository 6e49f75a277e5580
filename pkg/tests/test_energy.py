import math
import random
from fractions import Fraction

import pytest

from latticeangles.energy import (
    EnergyReport,
    cross_term,
    energy_json_dict,
    riesz_energy,
    shell_counts,
    shell_csv_text,
)
from latticeangles.lattice import LatticePointSet, generate_grid, sphere_lattice


def test_two_point_energy():
    pts = LatticePointSet(2, ((0, 0), (1, 0)))
    rep = riesz_energy(pts, 1.0, Fraction(1))
    assert abs(rep.value - 0.5) < 1e-12
    assert rep.n == 2 and rep.min_separation == 1.0


def test_three_collinear_energy():
    pts = LatticePointSet(2, ((0, 0), (1, 0), (2, 0)))
    rep = riesz_energy(pts, 1.0, Fraction(1))
    # six ordered pairs: four at distance 1, two at distance 2
    assert abs(rep.value - 5 / 9) < 1e-12


def test_scale_law():
    rng = random.Random(60)
    for _ in range(12):
        pts = set()
        while len(pts) < 9:
            pts.add((rng.randrange(0, 9), rng.randrange(0, 9)))
        ps = LatticePointSet(2, tuple(sorted(pts)))
        s = rng.choice((0.5, 0.9, 1.3))
        lam = Fraction(rng.randrange(1, 5), rng.randrange(5, 9))
        base = riesz_energy(ps, s, Fraction(1)).value
        scaled = riesz_energy(ps, s, lam).value
        assert abs(scaled - float(lam) ** (-s) * base) <= 1e-10 * base


def test_energy_input_validation():
    pts = LatticePointSet(2, ((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        riesz_energy(LatticePointSet(2, ((0, 0),)), 1.0)
    with pytest.raises(ValueError):
        riesz_energy(pts, 0.0)
    with pytest.raises(ValueError):
        riesz_energy(pts, 2.0)  # s >= d
    with pytest.raises(ValueError):
        riesz_energy(pts, 1.0, Fraction(0))


def test_adaptable_verdict():
    # unit-scaled grid is 1-separated, radius 16^-1 = 1/16: separated, small energy
    rep = riesz_energy(generate_grid(2, 4), 1.0, Fraction(1))
    assert rep.adaptable
    # an energy bound below the value flips the verdict
    tight = riesz_energy(generate_grid(2, 4), 1.0, Fraction(1), energy_bound=rep.value / 2)
    assert not tight.adaptable


def test_shells_d2_r25():
    sph = sphere_lattice(2, 25)
    rep = shell_counts(sph, 25)
    assert rep.m == 12
    by_point = {sph.points[idx]: per for idx, per in rep.counts}
    assert by_point[(5, 0)] == {1: 2, 2: 4, 3: 5}


def test_shells_d4_unit():
    sph = sphere_lattice(4, 1)
    rep = shell_counts(sph, 1)
    idx_e1 = sph.points.index((1, 0, 0, 0))
    per = dict(rep.counts)[idx_e1]
    assert per == {0: 6, 1: 1}


def test_shell_partition_identity():
    for d, r2 in [(2, 25), (3, 9), (4, 5), (5, 13)]:
        sph = sphere_lattice(d, r2)
        rep = shell_counts(sph, r2)
        for _, per in rep.counts:
            assert sum(per.values()) == rep.m - 1


def test_shell_bands_are_half_open():
    # distance exactly 2 = 2^1 must land in band j=1, not j=0
    sph = sphere_lattice(4, 1)
    rep = shell_counts(sph, 1)
    per = dict(rep.counts)[sph.points.index((1, 0, 0, 0))]
    assert per[1] == 1  # only the antipode, at distance exactly 2


def test_shells_empty_sphere():
    with pytest.raises(ValueError, match="empty"):
        shell_counts(sphere_lattice(2, 3), 3)


def test_cross_term_d4_unit():
    sph = sphere_lattice(4, 1)
    value = cross_term(sph, 1, 0.5)
    expected = (48 * 2 ** -0.25 + 8 * 2 ** -0.5) / 64
    assert abs(value - expected) < 1e-12
    assert abs(value - 0.7190606590886044) < 1e-12


def test_cross_term_validation():
    sph = sphere_lattice(4, 1)
    with pytest.raises(ValueError):
        cross_term(sph, 1, 1.5)  # s >= (d-1)/2
    with pytest.raises(ValueError):
        cross_term(LatticePointSet(2, ((1, 0),), kind="sphere", param=1), 1, 0.4)


def test_shell_csv_layout():
    rep = shell_counts(sphere_lattice(4, 1), 1)
    text = shell_csv_text(rep)
    lines = text.splitlines()
    assert lines[0] == "r2,k_index,j,w_j"
    assert all(line.split(",")[0] == "1" for line in lines[1:])
    # one row per (k, j) pair
    assert len(lines) - 1 == sum(len(per) for _, per in rep.counts)


def test_energy_json_fields():
    rep = riesz_energy(generate_grid(2, 3), 1.0, Fraction(1, 3))
    payload = energy_json_dict(rep)
    assert set(payload) == {"s", "value", "min_separation", "adaptable", "n"}
    assert payload["n"] == 9
    assert isinstance(payload["adaptable"], bool)


def test_energy_deterministic_rerun():
    pts = generate_grid(3, 3)
    a = riesz_energy(pts, 1.2, Fraction(1, 2)).value
    b = riesz_energy(pts, 1.2, Fraction(1, 2)).value
    assert a == b
