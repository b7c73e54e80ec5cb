"""
Local minima of a symmetry profile via automatic multiscale peak detection (AMPD).

AMPD runs on the negated profile. The local scalogram uses the constant 1 for
non-peak entries instead of the random fill of the original algorithm, so the
result is deterministic. Circular signals wrap their index arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .geometry import AxisAngle, axial_distance


@dataclass(frozen=True)
class PeakResult:
    """Detected minima.

    ``minima_angles`` holds the grid angle of each index reduced mod pi; it is
    empty for non-circular signals, which carry no angular grid.
    """

    minima_indices: np.ndarray
    minima_angles: list[AxisAngle]
    scale_lambda: int
    g_values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __len__(self):
        return len(self.minima_indices)

    @property
    def degrees(self) -> list[float]:
        return [a.degrees for a in self.minima_angles]


def default_max_scale(n: int, circular: bool) -> int:
    # on a circle, scales beyond n/4 compare i with two points that close in on
    # each other behind it, which inflates the minima count for any smooth signal
    return math.ceil(n / 4) - 1 if circular else math.ceil(n / 2) - 1


def scalogram(signal, circular: bool = True, max_scale: int | None = None) -> np.ndarray:
    """Local minima scalogram: ``M[k-1, i] == 0`` iff ``signal[i]`` is strictly below
    both ``signal[i-k]`` and ``signal[i+k]``, for scales ``k = 1..max_scale``."""
    s = np.asarray(signal, dtype=float)
    n = s.size
    scales = default_max_scale(n, circular) if max_scale is None else int(max_scale)
    if scales < 1:
        raise ValidationError(f"max_scale must be >= 1, got {scales}")
    m = np.ones((scales, n), dtype=np.int8)
    idx = np.arange(n)
    for k in range(1, scales + 1):
        if circular:
            left = np.roll(s, k)
            right = np.roll(s, -k)
            is_min = (s < left) & (s < right)
        else:
            is_min = np.zeros(n, dtype=bool)
            inner = (idx >= k) & (idx < n - k)
            is_min[inner] = (s[inner] < s[idx[inner] - k]) & (s[inner] < s[idx[inner] + k])
        m[k - 1, is_min] = 0
    return m


def ampd_minima(signal, circular: bool = True, max_scale: int | None = None) -> PeakResult:
    """Local minima of ``signal`` by AMPD.

    The scale ``lambda`` minimises the row sums of the scalogram (ties go to the
    smallest scale); reported minima are the indices whose scalogram entries are
    zero at every scale up to ``lambda``. Scales run up to ``ceil(N/4) - 1`` on
    circular signals and ``ceil(N/2) - 1`` on linear ones unless ``max_scale``
    is given.
    """
    s = np.asarray(signal, dtype=float).ravel()
    if s.size < 8:
        raise ValidationError(f"AMPD needs at least 8 samples, got {s.size}")
    if not np.all(np.isfinite(s)):
        raise ValidationError("signal contains non-finite values")
    m = scalogram(s, circular, max_scale)
    gamma = m.sum(axis=1, dtype=np.int64)
    lam = int(np.argmin(gamma)) + 1
    hits = np.flatnonzero(m[:lam].sum(axis=0) == 0)
    angles = [AxisAngle(2 * math.pi * i / s.size) for i in hits] if circular else []
    return PeakResult(hits, angles, lam, s[hits])


def _tie_broken(signal: np.ndarray) -> np.ndarray:
    """Ranks of ``signal`` with exact ties ordered by index; constant input is returned as is.

    Profile values are ratios of small integers, so plateaus at a minimum are
    common and strict AMPD comparisons would drop the whole basin.
    """
    if np.all(signal == signal[0]):
        return signal
    ranks = np.empty(signal.size)
    ranks[np.argsort(signal, kind="stable")] = np.arange(signal.size)
    return ranks


def axes_from_profile(p) -> PeakResult:
    """Axes of symmetry read off the minima of a full-circle profile.

    A profile with an even grid repeats exactly after half a turn, so AMPD runs
    on the first half as a circular signal of period pi. Otherwise it runs on
    the full circle and minima whose grid angles differ by pi within one grid
    step are merged, keeping the lower profile value (ties: the lower index).
    Exactly equal profile values are ordered by grid index before AMPD.
    """
    values = np.asarray(p.values, dtype=float)
    grid = np.asarray(p.grid, dtype=float)
    m = values.size
    half = m // 2
    signal = values[:half] if m % 2 == 0 and np.array_equal(values[:half], values[half:]) else values
    raw = ampd_minima(_tie_broken(signal), circular=True)
    step = 2 * math.pi / m
    order = sorted(raw.minima_indices.tolist(), key=lambda i: (values[i], i))
    kept: list[int] = []
    for i in order:
        merged = False
        for j in kept:
            d = abs(grid[i] - grid[j]) % (2 * math.pi)
            d = min(d, 2 * math.pi - d)
            if abs(d - math.pi) <= step * (1 + 1e-9):
                merged = True
                break
        if not merged:
            kept.append(i)
    kept.sort()
    idx = np.array(kept, dtype=np.int64)
    return PeakResult(idx, [AxisAngle(grid[i]) for i in kept], raw.scale_lambda, values[idx])


def dominant_axis(result: PeakResult) -> AxisAngle:
    """Axis at the lowest reported profile value."""
    if len(result) == 0:
        raise ValidationError("no minima detected")
    return result.minima_angles[int(np.argmin(result.g_values))]


@dataclass(frozen=True)
class AxisMatch:
    pairs: list[tuple[AxisAngle, AxisAngle]]
    errors: list[float]

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.errors))


def match_axes(estimated, truth) -> AxisMatch:
    """Pair each estimated axis with its nearest true axis (many-to-one allowed).

    Errors are axial distances in radians.
    """
    est = [a if isinstance(a, AxisAngle) else AxisAngle(a) for a in estimated]
    tru = [a if isinstance(a, AxisAngle) else AxisAngle(a) for a in truth]
    if not est or not tru:
        raise ValidationError("matching needs nonempty estimated and true axis sets")
    pairs, errors = [], []
    for a in est:
        d = [axial_distance(a, b) for b in tru]
        j = int(np.argmin(d))
        pairs.append((a, tru[j]))
        errors.append(d[j])
    return AxisMatch(pairs, errors)
