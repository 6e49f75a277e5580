"""Exact angle statistics for integer point configurations.

Counts and classifies the angles determined by triples of lattice points
using exact rational invariants, estimates Riesz energies and smoothed
angle distributions, and checks the growth laws those statistics obey as
configurations scale.
"""

from .census import (
    CensusReport,
    antipodal_lower_bound,
    build_sphere_decomposition,
    census,
    count_key,
    count_right,
    distinct_angles,
    max_repetition,
    windowed_mass,
)
from .energy import cross_term, riesz_energy, shell_counts
from .exact_angles import AngleKey, RIGHT_ANGLE, angle_key, format_key, is_right, parse_key
from .lattice import (
    LatticePointSet,
    generate_grid,
    middle_block,
    nested_grid_schedule,
    sphere_lattice,
    thicken,
)
from .oscillatory import build_shell_grid, decay_fit, fourier_sample
from .spectrum import angle_set_estimate, equitable_sup, nu_epsilon, nu_profile

__version__ = "0.1.0"

__all__ = [
    "AngleKey",
    "CensusReport",
    "LatticePointSet",
    "RIGHT_ANGLE",
    "angle_key",
    "angle_set_estimate",
    "antipodal_lower_bound",
    "build_sphere_decomposition",
    "build_shell_grid",
    "census",
    "count_key",
    "count_right",
    "cross_term",
    "decay_fit",
    "distinct_angles",
    "equitable_sup",
    "format_key",
    "fourier_sample",
    "generate_grid",
    "is_right",
    "max_repetition",
    "middle_block",
    "nested_grid_schedule",
    "nu_epsilon",
    "nu_profile",
    "parse_key",
    "riesz_energy",
    "shell_counts",
    "sphere_lattice",
    "thicken",
    "windowed_mass",
]
