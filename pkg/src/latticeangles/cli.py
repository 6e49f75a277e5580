"""Command-line front end.

Subcommands map one-to-one onto library operations:

    generate  grid | block | sphere | schedule
    census    grid | sphere          (full census, --right, or --key)
    energy    riesz | shells | cross
    spectrum  nu | profile | sup | angleset
    decay                            (shell-grid Fourier decay probe)
    scaling   right-angles | equitable | repetition | sphere-angles | shells

Exit codes: 0 on success (and on a passing scaling run), 2 when a scaling
run fails its slope check, 1 on any usage or runtime error.  Every JSON
artifact embeds the resolved configuration; reruns with identical
configuration produce byte-identical files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import energy as energy_mod
from . import lattice, oscillatory, scaling, spectrum
from .census import census, count_key, count_right, report_csv_text, report_summary
from .exact_angles import AngleKey, format_key, parse_key

OUTDIR_ENV = "LATTICEANGLES_OUTDIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); keep codes honest
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    dim: int | None = None
    side: int | None = None
    r2: int | None = None
    sides: list | None = None
    r2s: list | None = None
    s: float | None = None
    t: float | None = None
    eps: float | None = None
    h: str | None = None
    bins: int | None = None
    fraction: str | None = None
    scale: str | None = None
    key: str | None = None
    right: bool = False
    ray: str | None = None
    lambdas: list | None = None
    start: int | None = None
    depth: int | None = None
    workers: int = 1
    slack: float | None = None
    outdir: str = "."
    out: str | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


def _int_list(text: str) -> list:
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok]


def _build_parser() -> _Parser:
    top = _Parser(prog="latticeangles")
    top.add_argument("--outdir", default=None, help="output directory (or $%s)" % OUTDIR_ENV)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, *, dim=True, workers=False):
        if dim:
            p.add_argument("--dim", type=int, required=True)
        if workers:
            p.add_argument("--workers", type=int, default=1)

    g = sub.add_parser("generate")
    gs = g.add_subparsers(dest="action", required=True)
    p = gs.add_parser("grid"); common(p); p.add_argument("--side", type=int, required=True)
    p.add_argument("--out")
    p = gs.add_parser("block"); common(p); p.add_argument("--side", type=int, required=True)
    p.add_argument("--fraction", default="1/5"); p.add_argument("--out")
    p = gs.add_parser("sphere"); common(p); p.add_argument("--r2", type=int, required=True)
    p.add_argument("--out")
    p = gs.add_parser("schedule"); common(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")

    c = sub.add_parser("census")
    cs = c.add_subparsers(dest="action", required=True)
    for name in ("grid", "sphere"):
        p = cs.add_parser(name)
        common(p, workers=True)
        if name == "grid":
            p.add_argument("--side", type=int, required=True)
        else:
            p.add_argument("--r2", type=int, required=True)
        p.add_argument("--right", action="store_true", help="count right angles only")
        p.add_argument("--key", help="count one angle key, e.g. '+:1/2'")

    e = sub.add_parser("energy")
    es = e.add_subparsers(dest="action", required=True)
    p = es.add_parser("riesz"); common(p)
    p.add_argument("--side", type=int); p.add_argument("--r2", type=int)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--scale", default="1")
    p = es.add_parser("shells"); common(p); p.add_argument("--r2", type=int, required=True)
    p = es.add_parser("cross"); common(p); p.add_argument("--r2", type=int, required=True)
    p.add_argument("--s", type=float, required=True)

    sp = sub.add_parser("spectrum")
    sps = sp.add_subparsers(dest="action", required=True)
    for name in ("nu", "profile", "sup", "angleset"):
        p = sps.add_parser(name)
        common(p)
        p.add_argument("--side", type=int)
        p.add_argument("--r2", type=int)
        p.add_argument("--eps", type=float, required=True)
        if name == "nu":
            p.add_argument("--t", type=float, required=True)
        if name in ("nu", "profile", "sup"):
            p.add_argument("--s", type=float, required=True)
        if name == "profile":
            p.add_argument("--bins", type=int, required=True)

    d = sub.add_parser("decay")
    common(d)
    d.add_argument("--t", type=float, default=0.0)
    d.add_argument("--eps", type=float, required=True)
    d.add_argument("--h", required=True, help="grid spacing, e.g. 1/64")
    d.add_argument("--ray", default="e1,e2", help="basis directions for (xi, eta)")
    d.add_argument("--lambdas", type=_float_list, required=True)

    sc = sub.add_parser("scaling")
    scs = sc.add_subparsers(dest="action", required=True)
    for name in ("right-angles", "equitable", "repetition", "sphere-angles", "shells"):
        p = scs.add_parser(name)
        common(p, workers=name in ("right-angles", "repetition"))
        if name in ("right-angles", "equitable", "repetition"):
            p.add_argument("--sides", type=_int_list, required=True)
        else:
            p.add_argument("--r2s", type=_int_list, required=True)
        if name in ("equitable", "repetition"):
            p.add_argument("--s", type=float, required=True)
        if name == "right-angles":
            p.add_argument("--key")
        p.add_argument("--slack", type=float)
    return top


def parse_args(argv) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command)
    for field in dataclasses.fields(RunConfig):
        if hasattr(ns, field.name) and getattr(ns, field.name) is not None:
            setattr(cfg, field.name, getattr(ns, field.name))
    if cfg.outdir is None or getattr(ns, "outdir", None) is None:
        cfg.outdir = os.environ.get(OUTDIR_ENV, ".")
    if cfg.dim is not None and cfg.dim < 2:
        raise UsageError("range error: --dim must be at least 2")
    if cfg.workers < 1:
        raise UsageError("range error: --workers must be at least 1")
    return cfg


def _outpath(cfg: RunConfig, default_name: str) -> Path:
    if cfg.out:
        path = Path(cfg.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir / default_name


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _point_input(cfg: RunConfig) -> lattice.LatticePointSet:
    if cfg.side is not None and cfg.r2 is not None:
        raise UsageError("give --side or --r2, not both")
    if cfg.side is not None:
        return lattice.generate_grid(cfg.dim, cfg.side)
    if cfg.r2 is not None:
        return lattice.sphere_lattice(cfg.dim, cfg.r2)
    raise UsageError("one of --side or --r2 is required")


def _measure_input(cfg: RunConfig) -> lattice.WeightedPointMeasure:
    pts = _point_input(cfg)
    span = cfg.side if cfg.side is not None else None
    scale = Fraction(1, span) if span else Fraction(1, 1)
    if pts.kind == "sphere":
        arr = pts.as_array()
        scale = Fraction(1, int(2 * arr.max())) if len(pts) else Fraction(1, 1)
    return lattice.thicken(pts, cfg.s, scale)


def _parse_ray(text: str, dim: int):
    dirs = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok.startswith("e") or not tok[1:].isdigit():
            raise UsageError(f"bad ray component {tok!r}; expected e1..e{dim}")
        k = int(tok[1:])
        if not 1 <= k <= dim:
            raise UsageError(f"ray component {tok!r} out of range for dim {dim}")
        vec = [0.0] * dim
        vec[k - 1] = 1.0
        dirs.append(tuple(vec))
    if len(dirs) != 2:
        raise UsageError("ray needs exactly two components, e.g. e1,e2")
    return dirs


def dispatch(cfg: RunConfig) -> int:
    handler = {
        "generate": _run_generate,
        "census": _run_census,
        "energy": _run_energy,
        "spectrum": _run_spectrum,
        "decay": _run_decay,
        "scaling": _run_scaling,
    }[cfg.command]
    return handler(cfg)


def _run_generate(cfg: RunConfig) -> int:
    if cfg.action == "grid":
        pts = lattice.generate_grid(cfg.dim, cfg.side)
        path = _outpath(cfg, f"grid_d{cfg.dim}_s{cfg.side}.csv")
        lattice.save_points_csv(pts, path)
    elif cfg.action == "block":
        grid = lattice.generate_grid(cfg.dim, cfg.side)
        pts = lattice.middle_block(grid, Fraction(cfg.fraction))
        path = _outpath(cfg, f"block_d{cfg.dim}_s{cfg.side}.csv")
        lattice.save_points_csv(pts, path)
    elif cfg.action == "sphere":
        pts = lattice.sphere_lattice(cfg.dim, cfg.r2)
        path = _outpath(cfg, f"sphere_d{cfg.dim}_r{cfg.r2}.csv")
        lattice.save_points_csv(pts, path)
    else:
        sched = lattice.nested_grid_schedule(cfg.dim, cfg.s, cfg.start, cfg.depth)
        path = _outpath(cfg, f"schedule_d{cfg.dim}.json")
        _write_json(path, {
            "config": cfg.to_dict(),
            "levels": [
                {"k": k, "side": side, "n": n, "radius": radius}
                for k, side, n, radius in sched.levels
            ],
        })
    print(f"wrote {path}")
    return 0


def _census_stub(cfg: RunConfig) -> str:
    if cfg.side is not None:
        return f"{cfg.action}_d{cfg.dim}_s{cfg.side}"
    return f"{cfg.action}_d{cfg.dim}_r{cfg.r2}"


def _run_census(cfg: RunConfig) -> int:
    pts = _point_input(cfg)
    stub = _census_stub(cfg)
    if cfg.right:
        count = count_right(pts, workers=cfg.workers)
        path = _outpath(cfg, f"count_right_{stub}.json")
        _write_json(path, {"config": cfg.to_dict(), "count_right": count})
        print(f"count_right = {count}")
    elif cfg.key:
        key = parse_key(cfg.key)
        count = count_key(pts, key, workers=cfg.workers)
        path = _outpath(cfg, f"count_key_{stub}.json")
        _write_json(path, {"config": cfg.to_dict(), "key": format_key(key), "count": count})
        print(f"count[{format_key(key)}] = {count}")
    else:
        report = census(pts, workers=cfg.workers)
        csv_path = _outpath(cfg, f"census_{stub}.csv")
        _write_text(csv_path, report_csv_text(report))
        path = _outpath(cfg, f"census_{stub}.json")
        _write_json(path, {"config": cfg.to_dict(), **report_summary(report)})
        print(f"wrote {csv_path}")
    print(f"wrote {path}")
    return 0


def _run_energy(cfg: RunConfig) -> int:
    if cfg.action == "riesz":
        pts = _point_input(cfg)
        report = energy_mod.riesz_energy(pts, cfg.s, Fraction(cfg.scale))
        path = _outpath(cfg, f"energy_d{cfg.dim}.json")
        _write_json(path, {"config": cfg.to_dict(), **energy_mod.energy_json_dict(report)})
    elif cfg.action == "shells":
        sphere = lattice.sphere_lattice(cfg.dim, cfg.r2)
        report = energy_mod.shell_counts(sphere, cfg.r2)
        csv_path = _outpath(cfg, f"shells_d{cfg.dim}_r{cfg.r2}.csv")
        _write_text(csv_path, energy_mod.shell_csv_text(report))
        path = _outpath(cfg, f"shells_d{cfg.dim}_r{cfg.r2}.json")
        _write_json(path, {
            "config": cfg.to_dict(),
            "r2": report.r2,
            "m": report.m,
            "max_ratio": report.max_ratio,
        })
        print(f"wrote {csv_path}")
    else:
        sphere = lattice.sphere_lattice(cfg.dim, cfg.r2)
        value = energy_mod.cross_term(sphere, cfg.r2, cfg.s)
        path = _outpath(cfg, f"cross_d{cfg.dim}_r{cfg.r2}.json")
        _write_json(path, {"config": cfg.to_dict(), "cross_term": value})
    print(f"wrote {path}")
    return 0


def _run_spectrum(cfg: RunConfig) -> int:
    if cfg.action == "angleset":
        pts = _point_input(cfg)
        est = spectrum.angle_set_estimate(pts, cfg.eps)
        path = _outpath(cfg, f"angleset_d{cfg.dim}.json")
        _write_json(path, {"config": cfg.to_dict(), **spectrum.estimate_json_dict(est)})
    else:
        measure = _measure_input(cfg)
        if cfg.action == "nu":
            value = spectrum.nu_epsilon(measure, cfg.t, cfg.eps)
            path = _outpath(cfg, f"nu_d{cfg.dim}.json")
            _write_json(path, {"config": cfg.to_dict(), "t": cfg.t, "nu": value})
        elif cfg.action == "profile":
            hist = spectrum.nu_profile(measure, cfg.eps, cfg.bins)
            csv_path = _outpath(cfg, f"profile_d{cfg.dim}.csv")
            _write_text(csv_path, spectrum.histogram_csv_text(hist))
            path = _outpath(cfg, f"profile_d{cfg.dim}.json")
            _write_json(path, {
                "config": cfg.to_dict(),
                "eps": hist.eps,
                "n": hist.n,
                "total_mass_check": hist.total_mass_check,
            })
            print(f"wrote {csv_path}")
        else:
            t_max, nu_max = spectrum.equitable_sup(measure, cfg.eps)
            path = _outpath(cfg, f"sup_d{cfg.dim}.json")
            _write_json(path, {"config": cfg.to_dict(), "t_max": t_max, "nu_max": nu_max})
    print(f"wrote {path}")
    return 0


def _run_decay(cfg: RunConfig) -> int:
    h = float(Fraction(cfg.h))
    grid = oscillatory.build_shell_grid(cfg.dim, cfg.t, cfg.eps, h)
    ray = _parse_ray(cfg.ray, cfg.dim)
    fit = oscillatory.decay_fit(grid, ray, cfg.lambdas)
    path = _outpath(cfg, f"decay_d{cfg.dim}.json")
    _write_json(path, {"config": cfg.to_dict(), **oscillatory.decay_json_dict(grid, fit)})
    print(f"gamma_hat = {fit.gamma_hat:.4f}")
    print(f"wrote {path}")
    return 0


def _run_scaling(cfg: RunConfig) -> int:
    kwargs = {} if cfg.slack is None else {"slack": cfg.slack}
    if cfg.action == "right-angles":
        key = parse_key(cfg.key) if cfg.key else None
        report = scaling.run_right_angle_scaling(cfg.dim, cfg.sides, key=key,
                                                workers=cfg.workers, **kwargs)
    elif cfg.action == "equitable":
        report = scaling.run_equitable_violation(cfg.dim, cfg.s, cfg.sides, **kwargs)
    elif cfg.action == "repetition":
        report = scaling.run_repetition_bound(cfg.dim, cfg.s, cfg.sides,
                                              workers=cfg.workers, **kwargs)
    elif cfg.action == "sphere-angles":
        report = scaling.run_sphere_angle_bound(cfg.dim, cfg.r2s, **kwargs)
    else:
        report = scaling.run_shell_bound(cfg.dim, cfg.r2s, **kwargs)
    csv_path = _outpath(cfg, f"{report.name}.csv")
    _write_text(csv_path, scaling.report_csv_text(report))
    json_path = _outpath(cfg, f"{report.name}.json")
    _write_json(json_path, scaling.report_json_dict(report, cfg.to_dict()))
    verdict = "pass" if report.passed else "FAIL"
    target = "none" if report.target_exponent is None else (
        f"{report.direction} {report.target_exponent:g} (slack {report.slack:g})"
    )
    print(f"{report.name}: slope = {report.slope:.4f}, target {target}: {verdict}")
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    return 0 if report.passed else 2


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_args(argv)
        return dispatch(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
