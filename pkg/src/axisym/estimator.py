"""
Plug-in estimator of the symmetry axes of a planar sample.

The sample is centered, split at random into two halves, and for each grid
direction ``u`` the first half's projections are compared with the projections
of the reflected second half, averaged over ``k`` random directions.  The axis
estimate is the level set ``{u : g_hat(u) < eps_n}`` with
``eps_n = log(n) / sqrt(n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .empirical import _as_points, ks_reflected_rows, ks_two_sample, project
from .errors import ValidationError
from .geometry import (
    AxisAngle,
    DirectionSet,
    apply_reflection,
    grid_angles,
    sample_uniform_directions,
)


@dataclass(frozen=True)
class PointCloud:
    """An ``(n, 2)`` sample with centering metadata."""

    points: np.ndarray
    centered: bool = False
    original_mean: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        p = _as_points(self.points).copy()
        p.setflags(write=False)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "original_mean", np.asarray(self.original_mean, dtype=float).reshape(2))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def __len__(self):
        return self.n


def _as_cloud(points) -> PointCloud:
    return points if isinstance(points, PointCloud) else PointCloud(points)


def center(points) -> PointCloud:
    """Subtract the sample mean; the mean removed so far is kept in ``original_mean``."""
    cloud = _as_cloud(points)
    if cloud.n < 2:
        raise ValidationError(f"centering needs at least 2 points, got {cloud.n}")
    mean = cloud.points.mean(axis=0)
    return PointCloud(cloud.points - mean, centered=True, original_mean=cloud.original_mean + mean)


@dataclass(frozen=True)
class SplitSample:
    half1: PointCloud
    half2: PointCloud

    @property
    def n(self) -> int:
        return self.half1.n + self.half2.n


def split_sample(points, rng: np.random.Generator) -> SplitSample:
    """Random balanced partition; the first half has ``floor(n/2)`` points."""
    cloud = _as_cloud(points)
    n = cloud.n
    if n < 4:
        raise ValidationError(f"splitting needs at least 4 points, got {n}")
    perm = rng.permutation(n)
    m = n // 2
    p = cloud.points
    return SplitSample(
        PointCloud(p[perm[:m]], cloud.centered, cloud.original_mean),
        PointCloud(p[perm[m:]], cloud.centered, cloud.original_mean),
    )


def g_hat_at(u, split: SplitSample, directions: DirectionSet) -> float:
    """Average over ``directions`` of the KS distance between half1 and reflected half2."""
    if not isinstance(directions, DirectionSet):
        directions = DirectionSet(directions)
    reflected = apply_reflection(u, split.half2.points)
    total = 0.0
    for h in directions.directions:
        total += ks_two_sample(project(split.half1, h), project(reflected, h))
    return total / directions.k


def epsilon_n(n: int) -> float:
    """Level-set threshold ``log(n) / sqrt(n)`` (natural log)."""
    if n < 2:
        raise ValidationError(f"epsilon_n needs n >= 2, got {n!r}")
    return math.log(n) / math.sqrt(n)


@dataclass(frozen=True)
class SymmetryProfile:
    """Values of ``g_hat`` on an equally spaced full-circle grid of directions."""

    grid: np.ndarray
    values: np.ndarray
    n: int
    k: int
    epsilon: float
    seed: int | None = None

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.shape != v.shape or g.ndim != 1:
            raise ValidationError("grid and values must be 1-D arrays of equal length")
        if np.any(v < 0) or np.any(v > 1):
            raise ValidationError("profile values must lie in [0, 1]")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    @property
    def grid_size(self) -> int:
        return self.grid.size

    @property
    def grid_degrees(self) -> np.ndarray:
        return np.degrees(self.grid)

    @property
    def step(self) -> float:
        return 2 * math.pi / self.grid_size

    @classmethod
    def from_values(cls, values, n: int = 0, k: int = 0, epsilon: float = 0.0,
                    seed: int | None = None) -> "SymmetryProfile":
        v = np.asarray(values, dtype=float)
        return cls(grid_angles(v.size), v, n, k, epsilon, seed)


def evaluate_profile(split: SplitSample, directions: DirectionSet, grid_size: int = 200,
                     seed: int | None = None, threads: int = 1) -> SymmetryProfile:
    """Evaluate ``g_hat`` on ``grid_size`` directions for a given split and direction set.

    Uses ``<R_u x, h> = <x, R_u h>``: the first half is projected and sorted once
    per direction, and only the second half is re-projected per grid angle.
    Antipodal grid points share a reflection, so for even ``grid_size`` only the
    first half of the grid is evaluated.
    """
    if not isinstance(directions, DirectionSet):
        directions = DirectionSet(directions)
    theta = grid_angles(grid_size)
    m_eval = grid_size // 2 if grid_size % 2 == 0 else grid_size
    k = directions.k
    h = directions.directions
    half1 = split.half1.points
    # same elementwise expression as the kernel, so equal inputs give equal projections
    a_sorted = np.sort(half1[:, [0]] * h[:, 0] + half1[:, [1]] * h[:, 1], axis=0).T  # (k, na)

    # w[i, j] = R_{u_i} h_j, laid out row-major so that rows i*k .. i*k+k-1 belong to u_i
    w = np.empty((m_eval, k, 2))
    for i in range(m_eval):
        u = np.array([math.cos(theta[i]), math.sin(theta[i])])
        r = 2.0 * np.outer(u, u) - np.eye(2)
        w[i] = h @ r.T
    w = w.reshape(-1, 2)
    h_index = np.tile(np.arange(k), m_eval)
    ks = ks_reflected_rows(a_sorted, h_index, split.half2.points, w, threads=threads)
    ks = ks.reshape(m_eval, k)

    vals = ks.sum(axis=1) / k  # reduction order fixed, independent of threads
    if m_eval != grid_size:
        vals = np.concatenate([vals, vals])
    n = split.n
    return SymmetryProfile(theta, vals, n, k, epsilon_n(n), seed)


def profile(points, grid_size: int = 200, k: int = 50, seed: int = 0,
            directions: DirectionSet | None = None, threads: int = 1) -> SymmetryProfile:
    """Center, split and evaluate ``g_hat`` on a full-circle grid.

    The random stream seeded by ``seed`` is consumed in a fixed order: first the
    split, then the ``k`` projection directions (skipped when ``directions`` is
    given).
    """
    cloud = _as_cloud(points)
    if cloud.n < 4:
        raise ValidationError(f"profile needs at least 4 points, got {cloud.n}")
    rng = np.random.default_rng(seed)
    split = split_sample(center(cloud), rng)
    if directions is None:
        directions = sample_uniform_directions(k, rng, seed=seed)
    return evaluate_profile(split, directions, grid_size, seed=seed, threads=threads)


@dataclass(frozen=True)
class LevelSet:
    members: np.ndarray
    epsilon: float

    def __len__(self):
        return self.members.size


def level_set(p: SymmetryProfile, epsilon: float | None = None) -> LevelSet:
    """Grid indices with ``g_hat < epsilon`` (strict); defaults to the profile's epsilon."""
    eps = p.epsilon if epsilon is None else float(epsilon)
    return LevelSet(np.flatnonzero(p.values < eps), eps)


def level_set_axes(p: SymmetryProfile, ls: LevelSet) -> list[AxisAngle]:
    """Level-set members as axes, with antipodal grid points merged."""
    seen = {}
    for i in ls.members:
        a = AxisAngle(p.grid[i])
        seen.setdefault(round(a.theta, 12), a)
    return sorted(seen.values())


def hausdorff_axial(a, b) -> float:
    """Hausdorff distance between two nonempty sets of axes under ``axial_distance``."""
    a = [x if isinstance(x, AxisAngle) else AxisAngle(x) for x in a]
    b = [x if isinstance(x, AxisAngle) else AxisAngle(x) for x in b]
    if not a or not b:
        raise ValidationError("Hausdorff distance needs two nonempty sets")
    ta = np.array([x.theta for x in a])
    tb = np.array([x.theta for x in b])
    d = np.abs(ta[:, None] - tb[None, :])
    d = np.minimum(d, np.pi - d)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def rotate_points(points, phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return _as_points(points) @ np.array([[c, -s], [s, c]]).T

