import math

import numpy as np
import pytest

from axisym.ingest import GrayImage

RHO_COV = np.array([[1.0, 0.7], [0.7, 1.0]])


def image_coords(size):
    rows, cols = np.mgrid[0:size, 0:size]
    return cols - (size - 1) / 2.0, (size - 1) / 2.0 - rows


def rectangle_image(size=400, length=220, width=110, angle_deg=30.0):
    """Black filled rectangle on white, long side at ``angle_deg`` (y up)."""
    x, y = image_coords(size)
    a = math.radians(angle_deg)
    u = x * math.cos(a) + y * math.sin(a)
    v = -x * math.sin(a) + y * math.cos(a)
    inside = (np.abs(u) <= length / 2) & (np.abs(v) <= width / 2)
    return GrayImage(np.where(inside, 0.0, 1.0))


def lungs_image(size=400):
    """Two tilted egg-shaped blobs, mirror images across the vertical axis only."""
    x, y = image_coords(size)
    img = np.ones((size, size))
    for side in (-1, 1):
        a = math.radians(15 * side)
        u = (x - 75 * side) * math.cos(a) + y * math.sin(a)
        v = -(x - 75 * side) * math.sin(a) + y * math.cos(a)
        inside = (u / 55) ** 2 + (v / 120) ** 2 * (1 + 0.3 * np.tanh(v / 60)) <= 1
        img[inside] = 0.2
    return GrayImage(img)


def gaussian_sample(rng, n, cov=RHO_COV):
    return rng.standard_normal((n, 2)) @ np.linalg.cholesky(cov).T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# criterion id -> (passed, detail); filled by test_acceptance, printed after the run
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s[1:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{key:>3} {'PASS' if ok else 'FAIL'}  {detail}")
