"""File formats: profile JSON/CSV, axes JSON, point CSV, simulation tables."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .estimator import PointCloud, SymmetryProfile
from .peaks import PeakResult


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def profile_to_dict(p: SymmetryProfile) -> dict:
    return {
        "n": int(p.n),
        "k": int(p.k),
        "seed": p.seed,
        "epsilon": float(p.epsilon),
        "grid_degrees": [float(x) for x in p.grid_degrees],
        "values": [float(v) for v in p.values],
    }


def profile_from_dict(d: dict) -> SymmetryProfile:
    try:
        values = np.asarray(d["values"], dtype=float)
        grid = np.radians(np.asarray(d["grid_degrees"], dtype=float))
        return SymmetryProfile(grid, values, int(d["n"]), int(d["k"]), float(d["epsilon"]), d.get("seed"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed profile JSON: {exc}") from None


def profile_to_csv(p: SymmetryProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["angle_degrees", "g_hat"])
    for a, v in zip(p.grid_degrees, p.values):
        w.writerow([repr(float(a)), repr(float(v))])
    return buf.getvalue()


def read_profile_csv(path) -> SymmetryProfile:
    pts = read_points_csv(path)
    return SymmetryProfile(np.radians(pts.points[:, 0]), pts.points[:, 1], 0, 0, 0.0)


def peaks_to_dict(r: PeakResult) -> dict:
    return {
        "lambda": int(r.scale_lambda),
        "minima": [
            {
                "index": int(i),
                "angle_degrees": a.degrees,
                "angle_radians": a.theta,
                "g_value": float(g),
            }
            for i, a, g in zip(r.minima_indices, r.minima_angles, r.g_values)
        ],
    }


def read_points_csv(path) -> PointCloud:
    """Two numeric columns per line, comma separated; a non-numeric first line is a header."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            try:
                vals = [float(v) for v in row[:2]]
            except ValueError:
                if lineno == 1:
                    continue
                raise ValidationError(f"{path}:{lineno}: non-numeric value") from None
            if len(vals) != 2 or not all(math.isfinite(v) for v in vals):
                raise ValidationError(f"{path}:{lineno}: expected two finite columns")
            rows.append(vals)
    if not rows:
        raise ValidationError(f"{path}: no points")
    return PointCloud(np.array(rows))


def points_to_csv(cloud) -> str:
    pts = getattr(cloud, "points", cloud)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y"])
    for x, y in pts:
        w.writerow([repr(float(x)), repr(float(y))])
    return buf.getvalue()


def frequency_table_csv(reports) -> str:
    """One row per (n, k) study; columns count replications by detected axis count."""
    top = max([max(r.minima_count_frequency, default=0) for r in reports] + [0])
    for r in reports:
        t = r.truth
        if isinstance(t, list):
            top = max(top, len(t))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k"] + [f"minima_{c}" for c in range(top + 1)] + ["failed"])
    for r in reports:
        freq = r.minima_count_frequency
        failed = sum(1 for row in r.per_replication if "error" in row)
        w.writerow([r.config.n, r.config.k] + [freq.get(c, 0) for c in range(top + 1)] + [failed])
    return buf.getvalue()


def error_table_csv(reports) -> str:
    """Mean angular error in degrees over correct replications: rows n, columns k."""
    ns = sorted({r.config.n for r in reports})
    ks = sorted({r.config.k for r in reports})
    cell = {(r.config.n, r.config.k): r.mean_error_over_correct_reps for r in reports}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n"] + [f"k={k}" for k in ks])
    for n in ns:
        vals = []
        for k in ks:
            e = cell.get((n, k))
            vals.append("" if e is None else repr(math.degrees(e)))
        w.writerow([n] + vals)
    return buf.getvalue()


def write_profile_outputs(out_dir, p: SymmetryProfile, axes: PeakResult) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = [out / "profile.json", out / "profile.csv", out / "axes.json"]
    write_text(files[0], dumps(profile_to_dict(p)))
    write_text(files[1], profile_to_csv(p))
    write_text(files[2], dumps(peaks_to_dict(axes)))
    return files

