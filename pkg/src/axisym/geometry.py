"""
Reflection algebra on the plane.

Axes of reflection are identified modulo pi (``R_u == R_{-u}``), while
projection directions live on the full circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class UnitVector:
    """A unit vector in the plane.

    Inputs within ``UNIT_TOL`` of unit norm are accepted and renormalized.
    """

    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        norm = math.hypot(x, y)
        if not math.isfinite(norm) or abs(norm - 1.0) > UNIT_TOL:
            raise ValidationError(f"not a unit vector: ({x!r}, {y!r}), norm={norm!r}")
        object.__setattr__(self, "x", x / norm)
        object.__setattr__(self, "y", y / norm)

    @classmethod
    def from_angle(cls, theta: float) -> "UnitVector":
        return cls(math.cos(theta), math.sin(theta))

    @property
    def angle(self) -> float:
        """Polar angle in [0, 2*pi)."""
        return math.atan2(self.y, self.x) % (2 * math.pi)

    @property
    def axis(self) -> "AxisAngle":
        return AxisAngle(self.angle)

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y], dtype=dtype)

    def __neg__(self) -> "UnitVector":
        return UnitVector(-self.x, -self.y)


def _as_unit(u) -> np.ndarray:
    if isinstance(u, UnitVector):
        return np.array([u.x, u.y])
    return np.asarray(UnitVector(*np.asarray(u, dtype=float).ravel()))


@dataclass(frozen=True, order=True)
class AxisAngle:
    """Orientation of a line through the origin, in radians, reduced to [0, pi)."""

    theta: float

    def __post_init__(self):
        t = float(self.theta)
        if not math.isfinite(t):
            raise ValidationError(f"axis angle must be finite, got {t!r}")
        t = t % math.pi
        if t >= math.pi:  # fmod rounding can land exactly on pi
            t = 0.0
        object.__setattr__(self, "theta", t)

    @classmethod
    def from_degrees(cls, deg: float) -> "AxisAngle":
        return cls(math.radians(deg))

    @property
    def degrees(self) -> float:
        return math.degrees(self.theta)

    @property
    def direction(self) -> UnitVector:
        return UnitVector.from_angle(self.theta)


def reflection_matrix(u) -> np.ndarray:
    """Return ``2 u u^T - I``, the reflection fixing ``u`` and negating its normal."""
    v = _as_unit(u)
    return 2.0 * np.outer(v, v) - np.eye(2)


def apply_reflection(u, p) -> np.ndarray:
    """Reflect a point (or an ``(n, 2)`` array of points) across the line spanned by ``u``."""
    r = reflection_matrix(u)
    p = np.asarray(p, dtype=float)
    return p @ r.T


def compose_axis(u1, u2) -> UnitVector:
    """Axis ``R_{u1} u2``; a law symmetric about ``u1`` and ``u2`` is also symmetric about it."""
    v = reflection_matrix(u1) @ _as_unit(u2)
    return UnitVector(v[0], v[1])


def axial_distance(a, b) -> float:
    """Angular distance between two axes, in [0, pi/2]."""
    ta = a.theta if isinstance(a, AxisAngle) else AxisAngle(a).theta
    tb = b.theta if isinstance(b, AxisAngle) else AxisAngle(b).theta
    d = abs(ta - tb)
    return min(d, math.pi - d)


def grid_angles(m: int) -> np.ndarray:
    """Angles ``2*pi*j/m`` for ``j = 0..m-1``."""
    if int(m) != m or m < 2:
        raise ValidationError(f"grid size must be an integer >= 2, got {m!r}")
    return 2.0 * np.pi * np.arange(int(m)) / int(m)


def direction_grid(m: int) -> list[UnitVector]:
    """``m`` equally spaced unit vectors covering the full circle, starting at angle 0."""
    return [UnitVector(math.cos(t), math.sin(t)) for t in grid_angles(m)]


@dataclass(frozen=True)
class DirectionSet:
    """Random projection directions, stored as a ``(k, 2)`` array."""

    directions: np.ndarray
    seed: int | None = None
    angles: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if d.ndim != 2 or d.shape[1] != 2 or d.shape[0] < 1:
            raise ValidationError(f"directions must have shape (k, 2) with k >= 1, got {d.shape}")
        norms = np.hypot(d[:, 0], d[:, 1])
        if not np.all(np.abs(norms - 1.0) <= UNIT_TOL):
            raise ValidationError("all projection directions must be unit vectors")
        d = d / norms[:, None]
        d.setflags(write=False)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "angles", np.arctan2(d[:, 1], d[:, 0]) % (2 * np.pi))

    @classmethod
    def from_angles(cls, angles: Sequence[float], seed: int | None = None) -> "DirectionSet":
        a = np.asarray(angles, dtype=float)
        return cls(np.column_stack([np.cos(a), np.sin(a)]), seed=seed)

    @property
    def k(self) -> int:
        return self.directions.shape[0]

    def __len__(self):
        return self.k

    def rotated(self, phi: float) -> "DirectionSet":
        c, s = math.cos(phi), math.sin(phi)
        q = np.array([[c, -s], [s, c]])
        return DirectionSet(self.directions @ q.T, seed=self.seed)


def sample_uniform_directions(k: int, rng: np.random.Generator, seed: int | None = None) -> DirectionSet:
    """Draw ``k`` i.i.d. directions uniform on the circle from ``rng``."""
    if int(k) != k or k < 1:
        raise ValidationError(f"need at least one direction, got k={k!r}")
    phi = rng.uniform(0.0, 2.0 * np.pi, size=int(k))
    return DirectionSet.from_angles(phi, seed=seed)
