import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mshist.core import LuminanceField, WindowRect
from mshist.integral import (
    build_integral,
    build_integral_histogram,
    rect_sum,
    window_bin_populations,
    window_variance,
)

from oracles import naive_histogram, naive_prefix_table, naive_rect_sum, naive_window_pixels, two_pass_variance


def random_rect(rng, w, h):
    x0, x1 = sorted(rng.integers(0, w, 2))
    y0, y1 = sorted(rng.integers(0, h, 2))
    return WindowRect(int(x0), int(y0), int(x1), int(y1))


def test_small_table():
    T = build_integral(LuminanceField(np.array([[1.0, 2.0], [3.0, 4.0]]), "log"))
    np.testing.assert_array_equal(T.table, [[0, 0, 0], [0, 1, 3], [0, 4, 10]])
    assert rect_sum(T, WindowRect(0, 0, 1, 1)) == 10
    assert rect_sum(T, WindowRect(1, 1, 1, 1)) == 4


def test_ones_table_counts_pixels():
    T = build_integral(np.ones((3, 3)))
    assert T.table[-1, -1] == 9
    assert np.all(T.table[0] == 0) and np.all(T.table[:, 0] == 0)


def test_table_matches_naive_sum():
    a = np.random.default_rng(1).random((16, 16))
    T = build_integral(a)
    ref = naive_prefix_table(a.tolist())
    np.testing.assert_allclose(T.table, ref, rtol=1e-9, atol=0)


def test_rect_sum_matches_naive():
    rng = np.random.default_rng(2)
    a = rng.random((16, 16))
    T = build_integral(a)
    for _ in range(200):
        r = random_rect(rng, 16, 16)
        ref = naive_rect_sum(a, r.x0, r.y0, r.x1, r.y1)
        assert rect_sum(T, r) == pytest.approx(ref, rel=1e-9)


def test_rect_out_of_bounds():
    T = build_integral(np.ones((4, 4)))
    with pytest.raises(IndexError):
        rect_sum(T, WindowRect(0, 0, 4, 3))


@given(arrays(np.int64, st.tuples(st.integers(1, 12), st.integers(2, 12)), elements=st.integers(0, 1000)),
       st.data())
def test_additivity_is_exact_for_integers(a, data):
    h, w = a.shape
    T = build_integral(a)
    y0 = data.draw(st.integers(0, h - 1))
    y1 = data.draw(st.integers(y0, h - 1))
    x0 = data.draw(st.integers(0, w - 2))
    x1 = data.draw(st.integers(x0 + 1, w - 1))
    split = data.draw(st.integers(x0, x1 - 1))
    whole = rect_sum(T, WindowRect(x0, y0, x1, y1))
    assert whole == rect_sum(T, WindowRect(x0, y0, split, y1)) + rect_sum(T, WindowRect(split + 1, y0, x1, y1))
    assert whole == a[y0:y1 + 1, x0:x1 + 1].sum()


@given(arrays(np.float64, (6, 7), elements=st.floats(0, 1e3)))
def test_table_monotone_for_nonnegative(a):
    t = build_integral(a).table
    assert np.all(np.diff(t, axis=0) >= 0) and np.all(np.diff(t, axis=1) >= 0)


def test_variance_small_cases():
    a = np.array([[2.0, 2.0], [2.0, 2.0]])
    assert window_variance(build_integral(a), build_integral(a * a), WindowRect(0, 0, 1, 1)) == 0
    b = np.array([[0.0, 2.0]])
    assert window_variance(build_integral(b), build_integral(b * b), WindowRect(0, 0, 1, 0)) == 1


def test_variance_matches_two_pass():
    rng = np.random.default_rng(3)
    a = rng.random((16, 16))
    T, T2 = build_integral(a), build_integral(a * a)
    for _ in range(100):
        r = random_rect(rng, 16, 16)
        ref = two_pass_variance(naive_window_pixels(a, r.x0, r.y0, r.x1, r.y1))
        assert abs(window_variance(T, T2, r) - ref) <= 1e-7


@given(st.floats(-1e3, 1e3), st.integers(1, 8), st.integers(1, 8))
def test_variance_constant_window_is_zero(c, w, h):
    a = np.full((h, w), c)
    v = window_variance(build_integral(a), build_integral(a * a), WindowRect(0, 0, w - 1, h - 1))
    assert v >= 0
    assert v <= 1e-12 * max(1.0, c * c)


def test_constant_field_single_bin():
    a = np.full((5, 6), 1.5)
    for n in (1, 2, 5, 9):
        H = build_integral_histogram(a, np.linspace(1.5 - n, 1.5, n + 1))
        p = window_bin_populations(H, WindowRect(0, 0, 5, 4))
        assert p[-1] == 30 and p.sum() == 30


def test_upper_edge_goes_to_next_bin():
    a = np.array([[0.0, 1.0, 2.0, 3.0]])
    H = build_integral_histogram(a, [0.0, 1.5, 3.0])
    assert list(window_bin_populations(H, WindowRect(0, 0, 3, 0))) == [2, 2]
    H = build_integral_histogram(a, [0.0, 1.0, 2.0, 3.0])
    assert list(window_bin_populations(H, WindowRect(0, 0, 3, 0))) == [1, 1, 2]


def test_rejects_bad_edges():
    with pytest.raises(ValueError):
        build_integral_histogram(np.zeros((2, 2)), [0.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        build_integral_histogram(np.zeros((2, 2)), [1.0, 0.0])


def test_histogram_matches_naive_counts():
    rng = np.random.default_rng(4)
    l = rng.normal(size=(16, 16))
    edges = np.linspace(l.min(), l.max(), 6)
    H = build_integral_histogram(l, edges)
    for _ in range(200):
        r = random_rect(rng, 16, 16)
        ref = naive_histogram(naive_window_pixels(l, r.x0, r.y0, r.x1, r.y1), list(edges))
        assert list(window_bin_populations(H, r)) == ref


def test_single_pixel_and_global_queries():
    rng = np.random.default_rng(5)
    l = rng.random((9, 7))
    edges = np.linspace(0, 1, 5)
    H = build_integral_histogram(l, edges)
    for y in range(9):
        for x in range(7):
            p = window_bin_populations(H, WindowRect(x, y, x, y))
            assert sorted(p.tolist()) == [0, 0, 0, 1]
    full = window_bin_populations(H, WindowRect(0, 0, 6, 8))
    assert full.tolist() == naive_histogram(l.ravel().tolist(), list(edges))
    assert len(H.channels) == 4 and H.channels[0].table.shape == (10, 8)


@settings(max_examples=50)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(1, 8), st.integers(0, 2**31), st.data())
def test_partition_property(w, h, n, seed, data):
    l = np.random.default_rng(seed).random((h, w))
    edges = np.linspace(0, 1, n + 1)
    H = build_integral_histogram(l, edges)
    x0 = data.draw(st.integers(0, w - 1))
    y0 = data.draw(st.integers(0, h - 1))
    r = WindowRect(x0, y0, data.draw(st.integers(x0, w - 1)), data.draw(st.integers(y0, h - 1)))
    p = window_bin_populations(H, r)
    assert np.all(p >= 0) and p.sum() == r.area
