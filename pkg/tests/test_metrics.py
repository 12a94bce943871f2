import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from mshist.core import LuminanceField
from mshist.metrics import (
    brightness,
    contrast,
    dynamic_range_db,
    gradient_magnitude,
    quality_report,
    sharpness,
)

images = arrays(np.float64, st.tuples(st.integers(2, 12), st.integers(2, 12)), elements=st.floats(0, 200))


def test_constant_image():
    F = LuminanceField(np.full((5, 5), 128.0), "display")
    assert brightness(F) == 128 and sharpness(F) == 0 and contrast(F) == 0


def test_half_black_half_white():
    F = np.zeros((4, 4))
    F[:, 2:] = 255
    assert brightness(F) == 127.5
    assert contrast(F) == 127.5


def test_ramp_gradient():
    F = np.tile(np.arange(10.0), (6, 1))
    g = gradient_magnitude(F)
    np.testing.assert_array_equal(g, np.ones_like(F))
    assert sharpness(F) == 1.0
    assert sharpness(F, total=True) == 60.0


def test_borders_use_one_sided_differences():
    F = np.array([[0.0, 1.0, 4.0], [0.0, 1.0, 4.0]])
    g = gradient_magnitude(F)
    np.testing.assert_array_equal(g[0], [1.0, 2.0, 3.0])


def test_sharpness_needs_2x2():
    with pytest.raises(ValueError):
        sharpness(np.zeros((1, 5)))


@given(images, st.floats(0, 50))
def test_offset_shifts_brightness_only(F, c):
    assert brightness(F + c) == pytest.approx(brightness(F) + c, abs=1e-9)
    assert sharpness(F + c) == pytest.approx(sharpness(F), abs=1e-9)
    assert contrast(F + c) == pytest.approx(contrast(F), abs=1e-6)


@given(images, st.integers(0, 2**32 - 1))
def test_permutation_invariance(F, seed):
    P = np.random.default_rng(seed).permutation(F.ravel()).reshape(F.shape)
    assert brightness(P) == pytest.approx(brightness(F))
    assert contrast(P) == pytest.approx(contrast(F), abs=1e-9)


def test_sharpness_sees_arrangement():
    F = np.zeros((4, 4))
    F[:, 2:] = 255
    checker = np.indices((4, 4)).sum(axis=0) % 2 * 255.0
    assert brightness(F) == brightness(checker) and sharpness(F) != sharpness(checker)


@given(arrays(np.float64, (6, 6), elements=st.floats(0, 255)))
def test_ranges(F):
    r = quality_report(F)
    assert 0 <= r.brightness <= 255 and r.sharpness >= 0 and 0 <= r.contrast <= 127.5


def test_colour_scored_on_luma():
    rgb = np.zeros((3, 3, 3))
    rgb[..., 1] = 100
    assert brightness(rgb) == pytest.approx(58.7)


def test_report_serialisation():
    r = quality_report(np.full((3, 3), 10.0), "x.png")
    assert r.csv_row() == {"name": "x.png", "brightness": 10.0, "sharpness": 0.0, "contrast": 0.0}
    assert "brightness" in r.text() and r.text().startswith("x.png")


def test_dynamic_range():
    L = np.array([[0.0, 1e-3, 10.0]])
    assert dynamic_range_db(L) == pytest.approx(80.0)
