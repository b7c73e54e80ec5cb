import math

import numpy as np
import pytest
from conftest import lungs_image, rectangle_image

from axisym.errors import EmptyRegionError, ValidationError
from axisym.geometry import axial_distance
from axisym.ingest import (
    GrayImage,
    estimate_image_axis,
    load_image,
    parse_pgm,
    threshold_points,
    write_pgm,
)
from axisym.peaks import dominant_axis

STEP = math.radians(1.8)


def test_parse_p2_example():
    img = parse_pgm(b"P2\n2 2\n255\n0 255\n255 0\n")
    np.testing.assert_array_equal(img.pixels, [[0, 1], [1, 0]])
    assert (img.width, img.height) == (2, 2)


def test_parse_p2_with_comments():
    img = parse_pgm(b"P2\n# made by hand\n3 1 # width height\n4\n0 2 # mid\n4\n")
    np.testing.assert_array_equal(img.pixels, [[0, 0.5, 1]])


def test_p5_and_p2_agree(tmp_path):
    rng = np.random.default_rng(0)
    img = GrayImage(rng.integers(0, 256, size=(7, 5)) / 255)
    write_pgm(tmp_path / "a.pgm", img, binary=True)
    write_pgm(tmp_path / "b.pgm", img, binary=False)
    a, b = load_image(tmp_path / "a.pgm"), load_image(tmp_path / "b.pgm")
    np.testing.assert_array_equal(a.pixels, b.pixels)
    np.testing.assert_allclose(a.pixels, img.pixels, atol=1e-15)


def test_p5_16_bit_big_endian():
    raw = np.array([[0, 65535], [256, 1]], dtype=">u2").tobytes()
    img = parse_pgm(b"P5 2 2 65535\n" + raw)
    np.testing.assert_array_equal(img.pixels * 65535, [[0, 65535], [256, 1]])


@pytest.mark.parametrize(
    "data",
    [
        b"P3\n1 1\n255\n0\n",
        b"P2\n2 x\n255\n0 0\n",
        b"P2\n2 2\n255\n0 0 0\n",
        b"P5\n2 2\n255\n\x00\x00\x00",
        b"P2\n1 1\n255\n300\n",
        b"P2\n1 1\n70000\n0\n",
        b"P2\n0 1\n255\n",
        b"P2\n2 1\n255\n1 a\n",
    ],
)
def test_malformed_pgm_rejected(data):
    with pytest.raises(ValidationError):
        parse_pgm(data)


def test_csv_fallback(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("0,0.5\n1,0.25\n")
    np.testing.assert_array_equal(load_image(p).pixels, [[0, 0.5], [1, 0.25]])
    p.write_text("0,2\n")
    with pytest.raises(ValidationError):
        load_image(p)
    p.write_text("0,1\n0\n")
    with pytest.raises(ValidationError):
        load_image(p)


def test_threshold_empty_region():
    with pytest.raises(EmptyRegionError, match="empty region"):
        threshold_points(GrayImage(np.ones((10, 10))), 0.45, 5, rng=np.random.default_rng(0))


def test_threshold_param_errors():
    img = GrayImage(np.zeros((4, 4)))
    for kw in (dict(threshold=0.0), dict(threshold=1.0), dict(n=0), dict(jitter=-1)):
        with pytest.raises(ValidationError):
            threshold_points(img, **{"n": 4, **kw}, rng=np.random.default_rng(0))
    with pytest.raises(ValidationError):
        threshold_points(img, n=17, rng=np.random.default_rng(0))
    assert threshold_points(img, n=17, rng=np.random.default_rng(0), replace=True).n == 17


def test_threshold_is_strict():
    img = GrayImage(np.array([[0.45, 0.44]]))
    pts = threshold_points(img, 0.45, 1, jitter=0, rng=np.random.default_rng(0))
    np.testing.assert_array_equal(pts.points, [[0.5, 0.0]])


def test_left_half_black_maps_to_negative_x():
    px = np.ones((20, 30))
    px[:, :15] = 0
    pts = threshold_points(GrayImage(px), 0.45, 300, jitter=0, rng=np.random.default_rng(1)).points
    assert np.all(pts[:, 0] < 0)
    # y points up: the top row maps to the largest y
    assert pts[:, 1].max() == pytest.approx(9.5)


def test_full_selection_without_jitter_is_a_permutation():
    rng = np.random.default_rng(2)
    img = GrayImage(rng.uniform(size=(12, 9)))
    count = int((img.pixels < 0.45).sum())
    a = threshold_points(img, 0.45, count, jitter=0, rng=np.random.default_rng(3)).points
    b = threshold_points(img, 0.45, count, jitter=0, rng=np.random.default_rng(4)).points
    assert sorted(map(tuple, a)) == sorted(map(tuple, b))


def test_jitter_bounded():
    img = GrayImage(np.zeros((5, 5)))
    pts = threshold_points(img, 0.45, 25, jitter=1.0, rng=np.random.default_rng(5)).points
    frac = pts - np.round(pts)
    assert np.all(np.abs(frac) <= 0.5)
    assert np.unique(pts[:, 0]).size == 25


def _axes_close(found, expected_deg, tol):
    return len(found) == len(expected_deg) and all(
        min(axial_distance(a, math.radians(e)) for a in found) <= tol for e in expected_deg
    )


def test_axis_aligned_rectangle():
    est = estimate_image_axis(rectangle_image(size=200, length=120, width=60, angle_deg=0), n=5000, seed=1)
    assert _axes_close(est.axes.minima_angles, [0, 90], math.radians(2))


def test_rotated_rectangle():
    est = estimate_image_axis(rectangle_image(angle_deg=30), seed=0)
    assert _axes_close(est.axes.minima_angles, [30, 120], math.radians(2))


def test_lungs_rotation_and_mirror():
    img = lungs_image()
    base = dominant_axis(estimate_image_axis(img, seed=3).axes)
    assert axial_distance(base, math.pi / 2) <= math.radians(3)
    rotated = dominant_axis(estimate_image_axis(GrayImage(np.rot90(img.pixels)), seed=3).axes)
    assert axial_distance(rotated, base.theta + math.pi / 2) <= STEP + 1e-12
    mirrored = dominant_axis(estimate_image_axis(GrayImage(img.pixels[:, ::-1]), seed=3).axes)
    assert axial_distance(mirrored, math.pi - base.theta) <= STEP + 1e-12
