"""
Command-line interface.

    axisym estimate --input pts.csv --grid 200 --k 50 --seed 7 --out-dir out/
    axisym simulate --scenario gaussian --rho 0.7 --n 200,500,1000 --k 200 --reps 500 --seed 1
    axisym ingest --input lungs.pgm --threshold 0.45 --n 10000 --jitter 1 --seed 0

Exit codes: 0 success, 2 usage or validation error, 3 internal error.
Numeric outputs depend only on inputs, flags and seed; ``manifest.json``
carries timestamps and the thread count.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import math
import sys
from pathlib import Path

from . import __version__
from .errors import EmptyRegionError, ValidationError
from .estimator import profile
from .ingest import DEFAULT_JITTER, DEFAULT_N, DEFAULT_THRESHOLD, estimate_image_axis, load_image
from .io import (
    dumps,
    error_table_csv,
    frequency_table_csv,
    points_to_csv,
    read_points_csv,
    write_profile_outputs,
    write_text,
)
from .peaks import axes_from_profile
from .scenarios import ScenarioConfig, run_study

SCENARIO_ALIASES = {
    "gaussian": "gaussian_rho",
    "uniform": "uniform_square",
    "spherical": "spherical_gaussian",
    "mirror": "custom_mirror",
}


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="axisym", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"axisym {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--grid", type=int, default=200, help="grid size on the circle (default 200)")
        p.add_argument("--threads", type=_positive_int, default=1)
        p.add_argument("--out-dir", type=Path, default=Path("."))

    est = sub.add_parser("estimate", help="estimate symmetry axes from a two-column CSV of points")
    est.add_argument("--input", type=Path, required=True)
    est.add_argument("--k", type=int, default=50, help="number of random projections (default 50)")
    est.add_argument("--seed", type=int, default=0)
    common(est)

    sim = sub.add_parser("simulate", help="Monte Carlo study over sample sizes and projection counts")
    sim.add_argument("--scenario", required=True,
                     choices=sorted(SCENARIO_ALIASES) + sorted(SCENARIO_ALIASES.values()))
    sim.add_argument("--rho", type=float, default=0.7)
    sim.add_argument("--mirror-angle", type=float, default=30.0, help="axis of the mirror scenario, degrees")
    sim.add_argument("--n", type=_int_list, required=True)
    sim.add_argument("--k", type=_int_list, default=[50])
    sim.add_argument("--reps", type=int, default=500)
    sim.add_argument("--seed", type=int, required=True)
    common(sim)

    ing = sub.add_parser("ingest", help="estimate the symmetry axis of the dark region of an image")
    ing.add_argument("--input", type=Path, required=True, help="PGM (P2/P5) or CSV intensity matrix")
    ing.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    ing.add_argument("--n", type=int, default=DEFAULT_N)
    ing.add_argument("--jitter", type=float, default=DEFAULT_JITTER)
    ing.add_argument("--replace", action="store_true", help="sample pixels with replacement if too few qualify")
    ing.add_argument("--k", type=int, default=50)
    ing.add_argument("--seed", type=int, default=0)
    common(ing)
    return parser


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _write_manifest(out_dir: Path, args, started: str, inputs=()) -> None:
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    manifest = {
        "command": args.command,
        "parameters": params,
        "seed": args.seed,
        "version": __version__,
        "inputs": {str(p): _digest(p) for p in inputs},
        "started": started,
        "finished": _now(),
    }
    write_text(out_dir / "manifest.json", dumps(manifest))


def _report_axes(p, axes) -> None:
    print(f"epsilon_n = {p.epsilon:.6f}  (n = {p.n}, k = {p.k}, lambda = {axes.scale_lambda})")
    if not len(axes):
        print("no axes detected")
    for a, g in zip(axes.minima_angles, axes.g_values):
        print(f"axis {a.degrees:8.3f} deg   g_hat = {g:.6f}")


def cmd_estimate(args) -> int:
    started = _now()
    cloud = read_points_csv(args.input)
    p = profile(cloud, args.grid, args.k, seed=args.seed, threads=args.threads)
    axes = axes_from_profile(p)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_profile_outputs(args.out_dir, p, axes)
    _write_manifest(args.out_dir, args, started, [args.input])
    _report_axes(p, axes)
    return 0


def cmd_simulate(args) -> int:
    started = _now()
    scenario = SCENARIO_ALIASES.get(args.scenario, args.scenario)
    configs = [
        ScenarioConfig(scenario=scenario, n=n, k=k, grid_size=args.grid, replications=args.reps,
                       base_seed=args.seed, rho=args.rho, mirror_angle=math.radians(args.mirror_angle))
        for n in args.n for k in args.k
    ]
    reports = []
    for cfg in configs:
        rep = run_study(cfg, threads=args.threads)
        reports.append(rep)
        mean = rep.mean_error_over_correct_reps
        err = "-" if mean is None else f"{math.degrees(mean):.3f} deg"
        print(f"n={cfg.n:<7d} k={cfg.k:<5d} counts={rep.minima_count_frequency}  mean error={err}")
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    write_text(out / "report.json", dumps([r.to_dict() for r in reports]))
    write_text(out / "frequency_table.csv", frequency_table_csv(reports))
    write_text(out / "error_table.csv", error_table_csv(reports))
    _write_manifest(out, args, started)
    return 0


def cmd_ingest(args) -> int:
    started = _now()
    img = load_image(args.input)
    est = estimate_image_axis(img, args.threshold, args.n, args.jitter, args.grid, args.k,
                              seed=args.seed, replace=args.replace, threads=args.threads)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_text(args.out_dir / "points.csv", points_to_csv(est.points))
    write_profile_outputs(args.out_dir, est.profile, est.axes)
    _write_manifest(args.out_dir, args, started, [args.input])
    _report_axes(est.profile, est.axes)
    return 0


COMMANDS = {"estimate": cmd_estimate, "simulate": cmd_simulate, "ingest": cmd_ingest}


def _fail(kind: str, message: str, code: int) -> int:
    print("error: " + json.dumps({"kind": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except EmptyRegionError as exc:
        return _fail("empty_region", str(exc), 2)
    except ValidationError as exc:
        return _fail("validation", str(exc), 2)
    except OSError as exc:
        return _fail("io", str(exc), 2)
    except Exception as exc:  # noqa: BLE001
        return _fail("internal", f"{type(exc).__name__}: {exc}", 3)


if __name__ == "__main__":
    sys.exit(main())
