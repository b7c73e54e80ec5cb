"""
Grayscale images to point clouds.

Pixels darker than a threshold are sampled, jittered within their cell and
mapped to image-centered coordinates with the y axis pointing up, so that
column ``c`` and row ``r`` become ``x = c - (width-1)/2`` and
``y = (height-1)/2 - r``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyRegionError, ValidationError
from .estimator import PointCloud, SymmetryProfile, profile
from .peaks import PeakResult, axes_from_profile

DEFAULT_THRESHOLD = 0.45
DEFAULT_N = 10000
DEFAULT_JITTER = 1.0


@dataclass(frozen=True)
class GrayImage:
    """Row-major intensities in [0, 1]; 0 is black."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=float)
        if p.ndim != 2 or p.size == 0:
            raise ValidationError(f"image must be a nonempty 2-D array, got shape {p.shape}")
        if not np.all(np.isfinite(p)) or p.min() < 0 or p.max() > 1:
            raise ValidationError("intensities must lie in [0, 1]")
        object.__setattr__(self, "pixels", p)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _header_tokens(data: bytes, count: int):
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    pos = 0
    out = []
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise ValidationError("malformed PGM header")
        out.append(m.group(1))
        pos = m.end()
    return out, pos


def parse_pgm(data: bytes) -> GrayImage:
    """Parse a P2 (ASCII) or P5 (binary) portable graymap."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise ValidationError("not a PGM file (expected magic P2 or P5)")
    try:
        tokens, pos = _header_tokens(data, 4)
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise ValidationError(f"malformed PGM header: {exc}") from None
    if width < 1 or height < 1 or not 0 < maxval <= 65535:
        raise ValidationError(f"invalid PGM dimensions or maxval: {width}x{height}, maxval {maxval}")
    count = width * height
    if magic == b"P5":
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise ValidationError("malformed PGM header: missing whitespace before raster")
        raster = data[pos + 1:]
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        if len(raster) < need:
            raise ValidationError(f"truncated PGM raster: {len(raster)} of {need} bytes")
        values = np.frombuffer(raster[:need], dtype=dtype).astype(np.int64)
    else:
        body = re.sub(rb"#[^\n]*", b"", data[pos:]).split()
        if len(body) < count:
            raise ValidationError(f"truncated PGM raster: {len(body)} of {count} samples")
        try:
            values = np.array([int(v) for v in body[:count]], dtype=np.int64)
        except ValueError:
            raise ValidationError("non-integer sample in PGM raster") from None
    if values.min() < 0 or values.max() > maxval:
        raise ValidationError(f"PGM sample out of range [0, {maxval}]")
    return GrayImage(values.reshape(height, width) / maxval)


def load_image(path) -> GrayImage:
    """Load a PGM (P2/P5) file or a CSV matrix of intensities already in [0, 1]."""
    data = Path(path).read_bytes()
    if data[:2] in (b"P2", b"P5"):
        return parse_pgm(data)
    try:
        rows = [r for r in data.decode("utf-8").splitlines() if r.strip()]
        pixels = np.array([[float(v) for v in r.split(",")] for r in rows])
    except (UnicodeDecodeError, ValueError):
        raise ValidationError(f"{path}: neither a PGM file nor a numeric CSV matrix") from None
    if pixels.ndim != 2:
        raise ValidationError(f"{path}: CSV rows have unequal lengths")
    return GrayImage(pixels)


def write_pgm(path, img: GrayImage, binary: bool = True, maxval: int = 255) -> None:
    """Write ``img`` as P5 (``binary``) or P2, quantized to ``maxval`` levels."""
    q = np.rint(img.pixels * maxval).astype(np.int64)
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n{maxval}\n".encode()
    if binary:
        dtype = ">u2" if maxval > 255 else "u1"
        payload = q.astype(dtype).tobytes()
    else:
        payload = "\n".join(" ".join(str(v) for v in row) for row in q).encode() + b"\n"
    Path(path).write_bytes(header + payload)


def pixel_coordinates(img: GrayImage, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    x = cols - (img.width - 1) / 2.0
    y = (img.height - 1) / 2.0 - rows
    return np.column_stack([x, y]).astype(float)


def threshold_points(img: GrayImage, threshold: float = DEFAULT_THRESHOLD, n: int = DEFAULT_N,
                     jitter: float = DEFAULT_JITTER, rng: np.random.Generator | None = None,
                     replace: bool = False) -> PointCloud:
    """Sample ``n`` pixels with intensity strictly below ``threshold`` and jitter them.

    Jitter is uniform on ``(-jitter/2, jitter/2)`` per coordinate, in pixels.
    Sampling is without replacement unless ``replace`` is set and fewer than
    ``n`` pixels qualify.
    """
    if not 0 < threshold < 1:
        raise ValidationError(f"threshold must lie in (0, 1), got {threshold}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if jitter < 0:
        raise ValidationError(f"jitter must be >= 0, got {jitter}")
    rng = np.random.default_rng() if rng is None else rng
    rows, cols = np.nonzero(img.pixels < threshold)
    count = rows.size
    if count == 0:
        raise EmptyRegionError(f"empty region: no pixel below threshold {threshold}")
    if n > count and not replace:
        raise ValidationError(f"only {count} pixels below threshold {threshold}, fewer than n={n}")
    pick = rng.choice(count, size=n, replace=n > count)
    pts = pixel_coordinates(img, rows[pick], cols[pick])
    if jitter > 0:
        pts = pts + rng.uniform(-jitter / 2, jitter / 2, size=pts.shape)
    return PointCloud(pts)


@dataclass(frozen=True)
class ImageEstimate:
    points: PointCloud
    profile: SymmetryProfile
    axes: PeakResult


def estimate_image_axis(img: GrayImage, threshold: float = DEFAULT_THRESHOLD, n: int = DEFAULT_N,
                        jitter: float = DEFAULT_JITTER, grid_size: int = 200, k: int = 50,
                        seed: int = 0, replace: bool = False, threads: int = 1) -> ImageEstimate:
    """Threshold, sample and estimate the symmetry axes of the dark region of ``img``.

    ``seed`` drives the pixel sample and jitter; the estimator is seeded with
    ``seed + 1``.
    """
    rng = np.random.default_rng(seed)
    pts = threshold_points(img, threshold, n, jitter, rng, replace)
    p = profile(pts, grid_size, k, seed=seed + 1, threads=threads)
    return ImageEstimate(pts, p, axes_from_profile(p))
