"""
Projections of planar samples and the two-sample Kolmogorov-Smirnov distance.

The statistic is computed exactly, by merging the two sorted samples and
reading the gap between the empirical CDFs after every pooled jump.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import ValidationError
from .geometry import _as_unit


def _as_points(points) -> np.ndarray:
    p = getattr(points, "points", points)
    p = np.asarray(p, dtype=float)
    if p.ndim == 1 and p.size == 2:
        p = p[None, :]
    if p.ndim != 2 or p.shape[1] != 2:
        raise ValidationError(f"points must have shape (n, 2), got {p.shape}")
    if p.shape[0] == 0:
        raise ValidationError("point cloud is empty")
    if not np.all(np.isfinite(p)):
        raise ValidationError("point cloud contains non-finite coordinates")
    return p


def project(points, h) -> np.ndarray:
    """Sorted projections ``<x_i, h>`` of every point onto the direction ``h``."""
    p = _as_points(points)
    v = _as_unit(h)
    return np.sort(p[:, 0] * v[0] + p[:, 1] * v[1])


def _as_sample(a) -> np.ndarray:
    a = np.asarray(a, dtype=float).ravel()
    if a.size == 0:
        raise ValidationError("sample is empty")
    if not np.all(np.isfinite(a)):
        raise ValidationError("sample contains non-finite values")
    return a


@numba.njit(cache=True, nogil=True)
def _ks_sorted(a, b):
    na = a.shape[0]
    nb = b.shape[0]
    i = 0
    j = 0
    d = 0.0
    while i < na and j < nb:
        t = a[i] if a[i] <= b[j] else b[j]
        while i < na and a[i] == t:
            i += 1
        while j < nb and b[j] == t:
            j += 1
        gap = abs(i / na - j / nb)
        if gap > d:
            d = gap
    # once either sample is exhausted the gap can only shrink
    return d


def ks_two_sample(a, b) -> float:
    """Exact two-sample KS statistic ``sup_t |F_a(t) - F_b(t)|``.

    Parameters
    ----------
    a, b : array_like
        Nonempty 1-D samples. They are sorted here if they are not already.

    Returns
    -------
    float
        Statistic in [0, 1], symmetric in ``a`` and ``b``.
    """
    a = _as_sample(a)
    b = _as_sample(b)
    if np.any(a[1:] < a[:-1]):
        a = np.sort(a)
    if np.any(b[1:] < b[:-1]):
        b = np.sort(b)
    return float(_ks_sorted(a, b))


def ks_two_sample_bruteforce(a, b) -> float:
    """Reference KS statistic evaluated at every pooled value from both sides.

    Quadratic in memory; meant for samples of at most a few thousand points.
    """
    a = _as_sample(a)
    b = _as_sample(b)
    na, nb = a.size, b.size
    t = np.unique(np.concatenate([a, b]))
    right_a = (a[None, :] <= t[:, None]).sum(axis=1)
    right_b = (b[None, :] <= t[:, None]).sum(axis=1)
    left_a = (a[None, :] < t[:, None]).sum(axis=1)
    left_b = (b[None, :] < t[:, None]).sum(axis=1)
    gaps = [np.abs(ca / na - cb / nb) for ca, cb in ((right_a, right_b), (left_a, left_b))]
    return float(max(g.max() for g in gaps))


@numba.njit(cache=True, nogil=True)
def _ks_rows(a_sorted, h_index, x, y, wx, wy, start, stop, out):
    # row r compares sample a_sorted[h_index[r]] with the projection of (x, y) onto (wx[r], wy[r])
    for r in range(start, stop):
        b = np.sort(x * wx[r] + y * wy[r])
        out[r] = _ks_sorted(a_sorted[h_index[r]], b)


def ks_reflected_rows(a_sorted: np.ndarray, h_index: np.ndarray, half2: np.ndarray,
                      w: np.ndarray, threads: int = 1) -> np.ndarray:
    """Batch KS statistics between cached sorted projections and re-projected points.

    ``a_sorted`` is ``(k, na)``, one sorted row per projection direction;
    row ``r`` of the result is the KS distance between ``a_sorted[h_index[r]]``
    and the projections of ``half2`` onto ``w[r]``. Rows are independent, so
    the output does not depend on ``threads``.
    """
    rows = w.shape[0]
    out = np.empty(rows)
    x = np.ascontiguousarray(half2[:, 0])
    y = np.ascontiguousarray(half2[:, 1])
    wx = np.ascontiguousarray(w[:, 0])
    wy = np.ascontiguousarray(w[:, 1])
    h_index = np.ascontiguousarray(h_index, dtype=np.int64)
    a_sorted = np.ascontiguousarray(a_sorted)
    threads = max(1, min(int(threads), rows))
    if threads == 1:
        _ks_rows(a_sorted, h_index, x, y, wx, wy, 0, rows, out)
        return out
    from concurrent.futures import ThreadPoolExecutor

    bounds = np.linspace(0, rows, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        jobs = [pool.submit(_ks_rows, a_sorted, h_index, x, y, wx, wy, lo, hi, out)
                for lo, hi in zip(bounds[:-1], bounds[1:])]
        for job in jobs:
            job.result()
    return out
