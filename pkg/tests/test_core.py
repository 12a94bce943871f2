import numpy as np
import pytest
from hypothesis import given, strategies as st

from mshist.core import (
    LuminanceField,
    ToneParams,
    WdrImage,
    WindowRect,
    validate_params,
)


def test_paper_default_resolves_six_scales_for_2000px():
    p = validate_params(ToneParams(bins=5, epsilon=0.1, sat=0.6), 2000, 2000)
    assert p.scales == 6


def test_explicit_single_scale_unchanged():
    p = ToneParams(bins=5, epsilon=0.1, sat=0.6, scales=1)
    assert validate_params(p, 64, 64) == p


@pytest.mark.parametrize(
    "kwargs",
    [
        {"bins": 0},
        {"bins": -3},
        {"bins": 2.5},
        {"epsilon": 0.0},
        {"epsilon": -1.0},
        {"sat": 0.0},
        {"sat": 1.01},
        {"scales": 0},
        {"scales": 12},  # 64x64 has only 7 distinct levels
        {"log_floor": 0.0},
        {"fallback_tolerance": -1e-8},
    ],
)
def test_rejects_bad_params(kwargs):
    with pytest.raises(ValueError):
        validate_params(ToneParams(**kwargs), 64, 64)


def test_scale_limit_is_inclusive():
    assert validate_params(ToneParams(scales=7), 64, 64).scales == 7
    assert validate_params(ToneParams(scales=1), 1, 1).scales == 1
    with pytest.raises(ValueError):
        validate_params(ToneParams(scales=2), 1, 1)


def _halvings_to(w, h, limit=64):
    sides = [(w, h)]
    while max(sides[-1]) > limit:
        a, b = sides[-1]
        sides.append(((a + 1) // 2, (b + 1) // 2))
    return sides


@given(st.integers(1, 5000), st.integers(1, 5000))
def test_auto_scales_reach_64(w, h):
    p = validate_params(ToneParams(), w, h)
    assert p.scales == len(_halvings_to(w, h))
    assert validate_params(p, w, h) == p


@given(
    st.integers(1, 40),
    st.floats(1e-6, 10),
    st.floats(1e-3, 1.0),
    st.integers(1, 300),
    st.integers(1, 300),
)
def test_validation_is_idempotent(n, eps, sat, w, h):
    once = validate_params(ToneParams(bins=n, epsilon=eps, sat=sat), w, h)
    assert validate_params(once, w, h) == once


def test_wdr_image_invariants():
    with pytest.raises(ValueError):
        WdrImage(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        WdrImage(-np.ones((2, 2, 3)))
    with pytest.raises(ValueError):
        WdrImage(np.full((2, 2, 3), np.inf))
    img = WdrImage(np.ones((3, 4, 3)))
    assert (img.height, img.width) == (3, 4)
    with pytest.raises(ValueError):
        img.pixels[0, 0, 0] = 2.0


def test_luminance_domains():
    with pytest.raises(ValueError):
        LuminanceField(np.full((2, 2), 256.0), "display")
    with pytest.raises(ValueError):
        LuminanceField(-np.ones((2, 2)), "linear")
    LuminanceField(-np.ones((2, 2)), "log")
    with pytest.raises(ValueError):
        LuminanceField(np.ones((2, 2)), "gamma")


def test_window_rect_bounds():
    r = WindowRect(1, 2, 3, 4)
    assert (r.width, r.height, r.area) == (3, 3, 9)
    r.check(4, 5)
    with pytest.raises(IndexError):
        r.check(3, 5)
    with pytest.raises(IndexError):
        WindowRect(2, 0, 1, 0).check(4, 4)
