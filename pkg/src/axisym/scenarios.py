"""
Simulation scenarios, the Gaussian population oracle and the replication harness.

Seeding
-------
Replication ``r`` of a study with base seed ``s`` uses
``rep_seed = mix64(mix64(s) ^ r)`` where ``mix64`` is the SplitMix64 finalizer.
Data are drawn from ``numpy.random.default_rng(mix64(rep_seed ^ 1))`` and the
estimator (split and projection directions) is seeded with
``mix64(rep_seed ^ 2)``. Gaussian samples are ``Z @ L.T`` with ``Z`` from
``Generator.standard_normal`` and ``L`` the Cholesky factor of the covariance.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from collections import Counter

import numpy as np
from scipy.special import ndtr

from .errors import ValidationError
from .estimator import PointCloud, profile
from .geometry import AxisAngle, DirectionSet, _as_unit, reflection_matrix
from .peaks import axes_from_profile, match_axes

SCENARIOS = ("gaussian_rho", "uniform_square", "spherical_gaussian", "custom_mirror")

_MASK64 = (1 << 64) - 1


class _AllDirections:
    """Every direction is an axis (spherically symmetric law)."""

    def __repr__(self):
        return "ALL_DIRECTIONS"


ALL_DIRECTIONS = _AllDirections()


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z = (int(x) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def replication_seed(base_seed: int, rep: int) -> int:
    return mix64(mix64(base_seed & _MASK64) ^ int(rep))


def data_seed(base_seed: int, rep: int) -> int:
    return mix64(replication_seed(base_seed, rep) ^ 1)


def estimator_seed(base_seed: int, rep: int) -> int:
    return mix64(replication_seed(base_seed, rep) ^ 2)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "gaussian_rho"
    n: int = 1000
    k: int = 200
    grid_size: int = 200
    replications: int = 500
    base_seed: int = 0
    rho: float = 0.7
    mirror_angle: float = math.pi / 6

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        if not abs(self.rho) < 1:
            raise ValidationError(f"|rho| must be < 1, got {self.rho}")
        if self.n < 4:
            raise ValidationError(f"n must be >= 4, got {self.n}")
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if self.grid_size < 8:
            raise ValidationError(f"grid_size must be >= 8, got {self.grid_size}")
        if self.replications < 1:
            raise ValidationError(f"replications must be >= 1, got {self.replications}")

    @property
    def covariance(self) -> np.ndarray:
        if self.scenario == "gaussian_rho":
            return np.array([[1.0, self.rho], [self.rho, 1.0]])
        if self.scenario == "spherical_gaussian":
            return np.eye(2)
        raise ValidationError(f"scenario {self.scenario!r} is not Gaussian")


def _mirror_source(rng: np.random.Generator, m: int, theta: float) -> np.ndarray:
    # axis frame: a one-sided cone opening along the axis. Its mirrored union
    # has a single axis, and the perpendicular (which flips the cone) is the
    # direction of largest asymmetry rather than a secondary minimum.
    along = rng.exponential(1.0, m)
    across = np.abs(0.5 * rng.standard_normal(m)) * (1.0 + along)
    c, s = math.cos(theta), math.sin(theta)
    return np.column_stack([along * c - across * s, along * s + across * c])


def generate(config: ScenarioConfig, rep: int) -> PointCloud:
    """Draw replication ``rep`` of ``config``; identical arguments give identical clouds."""
    rng = np.random.default_rng(data_seed(config.base_seed, rep))
    n = config.n
    s = config.scenario
    if s in ("gaussian_rho", "spherical_gaussian"):
        chol = np.linalg.cholesky(config.covariance)
        pts = rng.standard_normal((n, 2)) @ chol.T
    elif s == "uniform_square":
        pts = rng.uniform(-1.0, 1.0, size=(n, 2))
    else:
        m = n // 2
        src = _mirror_source(rng, m, config.mirror_angle)
        pts = np.vstack([src, src @ reflection_matrix(AxisAngle(config.mirror_angle).direction).T])
        if n % 2:
            # odd n: one extra point on the axis keeps the law symmetric
            pts = np.vstack([pts, np.zeros((1, 2))])
    return PointCloud(pts)


def true_axes(config: ScenarioConfig):
    """Ground-truth axes, or ``ALL_DIRECTIONS`` for spherically symmetric scenarios."""
    s = config.scenario
    if s == "spherical_gaussian" or (s == "gaussian_rho" and config.rho == 0):
        return ALL_DIRECTIONS
    if s == "gaussian_rho":
        _, vecs = np.linalg.eigh(config.covariance)
        return sorted(AxisAngle(math.atan2(v[1], v[0])) for v in vecs.T)
    if s == "uniform_square":
        return [AxisAngle(j * math.pi / 4) for j in range(4)]
    return [AxisAngle(config.mirror_angle)]


def _check_spd(cov) -> np.ndarray:
    c = np.asarray(cov, dtype=float)
    if c.shape != (2, 2) or not np.allclose(c, c.T, rtol=0, atol=1e-14):
        raise ValidationError("covariance must be a symmetric 2x2 matrix")
    if np.linalg.eigvalsh(c)[0] <= 0:
        raise ValidationError("covariance must be positive definite")
    return c


def _sup_normal_gap(s1: np.ndarray, s2: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """``sup_t |Phi(t/s1) - Phi(t/s2)|`` by golden-section search over ``t > 0``.

    The gap is unimodal on ``t > 0`` and symmetric in ``t``; the bracket
    ``[0, 10 max(s1, s2)]`` contains the maximiser.
    """
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    lo = np.zeros(np.broadcast(s1, s2).shape)
    hi = 10.0 * np.maximum(s1, s2) + lo

    def f(t):
        return np.abs(ndtr(t / s1) - ndtr(t / s2))

    inv = (math.sqrt(5) - 1) / 2
    for _ in range(200):
        c = hi - inv * (hi - lo)
        d = lo + inv * (hi - lo)
        left = f(c) > f(d)  # maximiser lies in [lo, d]
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        if np.all(hi - lo <= tol * np.maximum(1.0, hi)):
            break
    return np.where(s1 == s2, 0.0, f(0.5 * (lo + hi)))


def closed_form_gap(s1: float, s2: float) -> float:
    """Closed-form maximiser of ``|Phi(t/s1) - Phi(t/s2)|``; used to cross-check the search."""
    if s1 == s2:
        return 0.0
    t = s1 * s2 * math.sqrt(2 * math.log(s2 / s1) / (s2 ** 2 - s1 ** 2))
    return abs(float(ndtr(t / s1) - ndtr(t / s2)))


def population_g_gaussian(u, h, cov) -> float:
    """KS distance between ``<X, h>`` and ``<R_u X, h>`` for ``X ~ N(0, cov)``."""
    c = _check_spd(cov)
    hv = _as_unit(h)
    w = reflection_matrix(u) @ hv
    s1 = math.sqrt(hv @ c @ hv)
    s2 = math.sqrt(w @ c @ w)
    if s1 == s2:
        return 0.0
    return float(_sup_normal_gap(s1, s2))


def population_profile_gaussian(grid: np.ndarray, directions: DirectionSet, cov) -> np.ndarray:
    """Population ``g`` averaged over ``directions`` at every grid angle."""
    c = _check_spd(cov)
    if not isinstance(directions, DirectionSet):
        directions = DirectionSet(directions)
    h = directions.directions
    theta = np.asarray(grid, dtype=float)
    u = np.column_stack([np.cos(theta), np.sin(theta)])
    uh = u @ h.T  # (m, k)
    wx = 2 * uh * u[:, [0]] - h[None, :, 0]
    wy = 2 * uh * u[:, [1]] - h[None, :, 1]
    s1 = np.sqrt(np.einsum("ki,ij,kj->k", h, c, h))[None, :]
    s2 = np.sqrt(c[0, 0] * wx ** 2 + 2 * c[0, 1] * wx * wy + c[1, 1] * wy ** 2)
    gaps = _sup_normal_gap(np.broadcast_to(s1, s2.shape), s2)
    return gaps.sum(axis=1) / h.shape[0]


@dataclass
class SimulationReport:
    config: ScenarioConfig
    per_replication: list[dict] = field(default_factory=list)

    @property
    def truth(self):
        return true_axes(self.config)

    @property
    def minima_count_frequency(self) -> dict[int, int]:
        c = Counter(r["detected_axis_count"] for r in self.per_replication if "error" not in r)
        return dict(sorted(c.items()))

    @property
    def correct_replications(self) -> int:
        return sum(1 for r in self.per_replication if r.get("mean_angular_error") is not None)

    @property
    def mean_error_over_correct_reps(self) -> float | None:
        """Mean angular error in radians over replications with the correct axis count."""
        e = [r["mean_angular_error"] for r in self.per_replication
             if r.get("mean_angular_error") is not None]
        return float(np.mean(e)) if e else None

    def to_dict(self) -> dict:
        truth = self.truth
        mean = self.mean_error_over_correct_reps
        return {
            "config": asdict(self.config),
            "true_axes": "all" if truth is ALL_DIRECTIONS else [a.theta for a in truth],
            "minima_count_frequency": {str(k): v for k, v in self.minima_count_frequency.items()},
            "correct_replications": self.correct_replications,
            "mean_error_over_correct_reps": mean,
            "mean_error_over_correct_reps_degrees": None if mean is None else math.degrees(mean),
            "per_replication": self.per_replication,
        }


def run_replication(config: ScenarioConfig, rep: int, directions: DirectionSet | None = None) -> dict:
    """One replication: generate, profile, detect axes, and score them against the truth."""
    seed = estimator_seed(config.base_seed, rep)
    cloud = generate(config, rep)
    p = profile(cloud, config.grid_size, config.k, seed=seed, directions=directions)
    peaks = axes_from_profile(p)
    truth = true_axes(config)
    row = {
        "replication": rep,
        "seed": seed,
        "detected_axis_count": len(peaks),
        "axes": [a.theta for a in peaks.minima_angles],
        "mean_angular_error": None,
    }
    if truth is not ALL_DIRECTIONS and len(peaks) == len(truth):
        row["mean_angular_error"] = match_axes(peaks.minima_angles, truth).mean_error
    return row


def run_study(config: ScenarioConfig, threads: int = 1,
              directions: DirectionSet | None = None) -> SimulationReport:
    """Run every replication of ``config``; results are ordered by replication index.

    A replication that raises ``ValidationError`` is recorded with its message
    instead of aborting the study.
    """

    def one(rep):
        try:
            return run_replication(config, rep, directions)
        except ValidationError as exc:
            return {"replication": rep, "error": str(exc), "detected_axis_count": None,
                    "mean_angular_error": None}

    reps = range(config.replications)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, reps))
    else:
        rows = [one(r) for r in reps]
    return SimulationReport(config, rows)
