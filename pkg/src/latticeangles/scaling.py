"""Size-ladder experiments with fitted log-log exponents.

Each experiment produces a ScalingReport: measured rows, an ordinary
least-squares slope in log-log scale, the target exponent, and a pass flag
that compares the slope against the target in the stated direction with a
configured slack.  Lower-bound targets default to slack 0.3 (finite-size
effects push both ways around the asymptotic exponent); upper-bound targets
default to slack 0.1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .census import (
    antipodal_lower_bound,
    build_sphere_decomposition,
    census,
    count_key,
    count_right,
    distinct_angles,
    max_repetition,
    pairwise_dot_values,
)
from .energy import shell_counts
from .exact_angles import AngleKey, format_key
from .lattice import LatticePointSet, generate_grid, sphere_lattice, thicken
from .spectrum import nu_epsilon

SLACK_LOWER = 0.3
SLACK_UPPER = 0.1


@dataclass(frozen=True)
class ScalingReport:
    name: str
    rows: tuple  # (size, value)
    slope: float
    intercept: float
    r_squared: float
    target_exponent: float | None
    direction: str | None  # ">=" or "<="
    slack: float
    passed: bool
    aux: dict


def fit_loglog(rows):
    """(slope, intercept, r_squared) of OLS on (log size, log value)."""
    if len(rows) < 3:
        raise ValueError("need at least 3 rows")
    if any(size <= 0 or value <= 0 for size, value in rows):
        raise ValueError("rows must have positive sizes and values")
    xs = [math.log(size) for size, _ in rows]
    ys = [math.log(value) for _, value in rows]
    n = len(rows)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - my) ** 2 for y in ys)
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r_squared


def _passes(slope: float, target: float, direction: str, slack: float) -> bool:
    if direction == ">=":
        return slope >= target - slack
    if direction == "<=":
        return slope <= target + slack
    raise ValueError(f"unknown direction {direction!r}")


def _report(name, rows, target, direction, slack, aux) -> ScalingReport:
    slope, intercept, r2 = fit_loglog(rows)
    passed = True if target is None else _passes(slope, target, direction, slack)
    return ScalingReport(name, tuple(rows), slope, intercept, r2, target,
                         direction, slack, passed, aux)


def _center_block(grid: LatticePointSet, side: int, block_side: int) -> LatticePointSet:
    """Centered sub-cube with an explicit side (kept >= 2 so small grids
    still yield antipodal pairs)."""
    start = (side - block_side) // 2 + 1
    rng = range(start, start + block_side)
    pts = tuple(itertools.product(rng, repeat=grid.d))
    return LatticePointSet(grid.d, pts, kind="block", param=block_side)


def run_right_angle_scaling(d: int, sides, key: AngleKey | None = None,
                            workers: int = 1, slack: float = SLACK_LOWER) -> ScalingReport:
    """Right-angle counts (or counts of one given key) against n = side^d.

    For the right angle each row is cross-checked against the constructive
    sphere/antipodal lower bound, which must never exceed the exact count.
    """
    sides = list(sides)
    if sides != sorted(sides) or len(set(sides)) != len(sides):
        raise ValueError("sides must be strictly increasing")
    rows = []
    aux: dict = {"sides": sides}
    bounds, ratios = [], []
    for side in sides:
        grid = generate_grid(d, side)
        n = side**d
        if key is None:
            value = count_right(grid, workers=workers)
            block = _center_block(grid, side, max(2, side // 5))
            decomp = build_sphere_decomposition(grid, block)
            bound = antipodal_lower_bound(decomp, grid)
            if bound > value:
                raise RuntimeError("antipodal bound exceeded the exact count")
            bounds.append(bound)
            ratios.append(bound / value if value else 0.0)
        else:
            value = count_key(grid, key, workers=workers)
        rows.append((n, value))
    if key is None:
        aux["antipodal_bounds"] = bounds
        aux["antipodal_ratios"] = ratios
        target, direction = 3.0 - 2.0 / d, ">="
    else:
        aux["key"] = format_key(key)
        target, direction = None, None
    return _report("right_angles" if key is None else "key_count",
                   rows, target, direction, slack, aux)


def run_equitable_violation(d: int, s: float, sides,
                            slack: float = SLACK_LOWER) -> ScalingReport:
    """Growth of nu at t = 0 with window eps_n = n^(-1/s); defined only for
    s below d/2, where the growth exponent target is 1/s - 2/d."""
    if not 0 < s < d / 2:
        raise ValueError(f"parameter error: s must lie in (0, d/2) = (0, {d / 2})")
    rows = []
    eps_list = []
    for side in sides:
        grid = generate_grid(d, side)
        n = len(grid)
        eps = float(n) ** (-1.0 / s)
        measure = thicken(grid, s, Fraction(1, side))
        rows.append((n, nu_epsilon(measure, 0.0, eps)))
        eps_list.append(eps)
    values = [v for _, v in rows]
    aux = {
        "s": s,
        "eps": eps_list,
        "strictly_increasing": all(a < b for a, b in zip(values, values[1:])),
    }
    return _report("equitable_violation", rows, 1.0 / s - 2.0 / d, ">=", slack, aux)


def run_repetition_bound(d: int, s: float, sides, workers: int = 1,
                         slack: float = SLACK_UPPER) -> ScalingReport:
    """Most-repeated-angle counts (ordered-triple convention, so twice the
    configuration count) against N; target exponent 3 - 1/s."""
    if not (d + 1) / 2 < s < d:
        raise ValueError(
            f"parameter error: s must lie in ((d+1)/2, d) = ({(d + 1) / 2}, {d})"
        )
    rows = []
    keys = []
    for side in sides:
        grid = generate_grid(d, side)
        report = census(grid, workers=workers)
        key, cnt = max_repetition(report)
        rows.append((len(grid), 2 * cnt))
        keys.append(format_key(key))
    aux = {"s": s, "max_keys": keys}
    return _report("repetition_bound", rows, 3.0 - 1.0 / s, "<=", slack, aux)


def _squarefree(n: int) -> bool:
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def run_sphere_angle_bound(d: int, r2_ladder, slack: float = SLACK_UPPER) -> ScalingReport:
    """Distinct angle keys among configurations of points on origin spheres.

    The companion integer check lives in aux: the pairwise dot products of
    distinct sphere points must number at most 2*r2 + 1 (they are integers
    in [-r2, r2] and r2 itself needs coincident points).  The key count is
    fitted against r2 with target slope 1; the fit is reported honestly even
    where the measured growth is faster.
    """
    if d < 4:
        raise ValueError("d must be at least 4")
    rows = []
    per_r2 = []
    skipped = []
    for r2 in r2_ladder:
        sphere = sphere_lattice(d, r2)
        if len(sphere) == 0:
            skipped.append(r2)
            continue
        keys, config_dots = distinct_angles(sphere)
        pairwise = pairwise_dot_values(sphere)
        entry = {
            "r2": r2,
            "m": len(sphere),
            "admissible": (r2 % 4 != 0) if d == 4 else _squarefree(r2),
            "distinct_keys": keys,
            "config_dots": config_dots,
            "pairwise_dots": len(pairwise),
            "pairwise_bound": 2 * r2 + 1,
            "pairwise_ok": len(pairwise) <= 2 * r2 + 1,
        }
        if d >= 5:
            entry["count_ratio"] = len(sphere) / float(r2) ** ((d - 2) / 2.0)
        per_r2.append(entry)
        rows.append((r2, keys))
    aux = {
        "per_r2": per_r2,
        "skipped": skipped,
        "max_keys_over_r2": max(e["distinct_keys"] / e["r2"] for e in per_r2) if per_r2 else None,
        "pairwise_ok_all": all(e["pairwise_ok"] for e in per_r2),
    }
    return _report("sphere_angles", rows, 1.0, "<=", slack, aux)


def run_shell_bound(d: int, r2_ladder, slack: float = SLACK_UPPER) -> ScalingReport:
    """Boundedness of max_{j,k} w_j(k) / 2^(j(d-2)) along an r2 ladder.

    Rows carry (r2, max ratio); the headline slope is fitted against r2 and
    aux records the slope against R = sqrt(r2) (twice the row slope), which
    is the natural scale for the bound.
    """
    if d not in (4, 5):
        raise ValueError("d must be 4 or 5")
    rows = []
    partition_ok = True
    skipped = []
    for r2 in r2_ladder:
        sphere = sphere_lattice(d, r2)
        if len(sphere) == 0:
            skipped.append(r2)
            continue
        rep = shell_counts(sphere, r2)
        for _idx, per in rep.counts:
            if sum(per.values()) != rep.m - 1:
                partition_ok = False
        rows.append((r2, rep.max_ratio))
    report = _report("shell_bound", rows, 0.0, "<=", slack,
                     {"skipped": skipped, "partition_ok": partition_ok})
    aux = dict(report.aux)
    aux["slope_vs_R"] = 2.0 * report.slope
    return ScalingReport(report.name, report.rows, report.slope, report.intercept,
                         report.r_squared, report.target_exponent, report.direction,
                         report.slack, report.passed and partition_ok, aux)


def report_csv_text(report: ScalingReport) -> str:
    lines = ["size,value"]
    for size, value in report.rows:
        lines.append(f"{size!r},{value!r}")
    return "\n".join(lines) + "\n"


def report_json_dict(report: ScalingReport, config: dict | None = None) -> dict:
    out = {
        "experiment": report.name,
        "rows": [[size, value] for size, value in report.rows],
        "slope": report.slope,
        "intercept": report.intercept,
        "r_squared": report.r_squared,
        "target_exponent": report.target_exponent,
        "direction": report.direction,
        "slack": report.slack,
        "pass": report.passed,
        "aux": report.aux,
    }
    if config is not None:
        out["config"] = config
    return out
