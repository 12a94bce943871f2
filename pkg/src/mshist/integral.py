"""Summed-area tables and integral histograms with constant-time window queries.

Every table carries a zero guard row and column, so entry ``[y, x]`` holds
the sum of all source pixels strictly above and to the left of ``(x, y)``
and a rectangle query is always the same four-corner expression.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LuminanceField, WindowRect


@dataclass(frozen=True, eq=False)
class IntegralImage:
    table: np.ndarray  # (height + 1, width + 1), float64

    @property
    def height(self) -> int:
        return self.table.shape[0] - 1

    @property
    def width(self) -> int:
        return self.table.shape[1] - 1


def _prefix_sums(a: np.ndarray, dtype) -> np.ndarray:
    h, w = a.shape
    t = np.zeros((h + 1, w + 1), dtype=dtype)
    np.cumsum(a, axis=0, dtype=dtype, out=t[1:, 1:])
    np.cumsum(t[1:, 1:], axis=1, out=t[1:, 1:])
    t.flags.writeable = False
    return t


def build_integral(f: LuminanceField | np.ndarray) -> IntegralImage:
    """Summed-area table of ``f``, accumulated in double precision."""
    a = f.samples if isinstance(f, LuminanceField) else np.asarray(f)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D field, got shape {a.shape}")
    return IntegralImage(_prefix_sums(a.astype(np.float64, copy=False), np.float64))


def corner_sums(table: np.ndarray, y0, x0, y1, x1):
    """Sum over ``[y0, y1) x [x0, x1)`` for (broadcastable arrays of) bounds.

    ``table`` may carry leading channel axes; indexing applies to the last two.
    """
    return table[..., y1, x1] - table[..., y0, x1] - table[..., y1, x0] + table[..., y0, x0]


def rect_sum(T: IntegralImage, r: WindowRect) -> float:
    r.check(T.width, T.height)
    return float(corner_sums(T.table, r.y0, r.x0, r.y1 + 1, r.x1 + 1))


def window_variance(T: IntegralImage, T2: IntegralImage, r: WindowRect) -> float:
    """Population variance of the window from sums of ``f`` and ``f**2``."""
    if r.area <= 0:
        raise ValueError("variance of an empty window is undefined")
    n = r.area
    return float(variance_from_sums(rect_sum(T, r), rect_sum(T2, r), n))


def variance_from_sums(s, s2, n):
    """``s2/n - (s/n)**2`` with cancellation noise snapped to zero.

    Results within a few ulps of the mean square are indistinguishable from
    rounding error, so flat windows come out exactly 0.
    """
    mean = s / n
    mean_sq = s2 / n
    var = mean_sq - mean * mean
    return np.where(var > 16 * np.finfo(np.float64).eps * np.abs(mean_sq), var, 0.0)


@dataclass(frozen=True, eq=False)
class IntegralHistogram:
    """One integral image per histogram bin, stacked along the first axis."""

    tables: np.ndarray  # (bins, height + 1, width + 1), int64
    bin_edges: np.ndarray  # (bins + 1,) ascending

    @property
    def bins(self) -> int:
        return self.tables.shape[0]

    @property
    def height(self) -> int:
        return self.tables.shape[1] - 1

    @property
    def width(self) -> int:
        return self.tables.shape[2] - 1

    @property
    def channels(self) -> list[IntegralImage]:
        return [IntegralImage(t) for t in self.tables]

    def bin_index(self, values):
        return bin_index(values, self.bin_edges)


def bin_index(values, edges: np.ndarray):
    """0-based bin of each value.

    A value sitting exactly on an interior edge belongs to the bin above it;
    anything at or beyond the last edge lands in the last bin.
    """
    return np.searchsorted(edges[1:-1], values, side="right")


def build_integral_histogram(l: LuminanceField | np.ndarray, edges) -> IntegralHistogram:
    a = l.samples if isinstance(l, LuminanceField) else np.asarray(l, dtype=np.float64)
    edges = np.asarray(edges, dtype=np.float64)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("need at least two bin edges")
    if np.any(np.diff(edges) <= 0):
        raise ValueError("bin edges must be strictly ascending")
    n = edges.size - 1
    idx = bin_index(a, edges)
    h, w = a.shape
    tables = np.empty((n, h + 1, w + 1), dtype=np.int64)
    for k in range(n):
        tables[k] = _prefix_sums(idx == k, np.int64)
    tables.flags.writeable = False
    edges = edges.copy()
    edges.flags.writeable = False
    return IntegralHistogram(tables, edges)


def window_bin_populations(H: IntegralHistogram, r: WindowRect) -> np.ndarray:
    """Histogram of the window as ``bins`` non-negative integer counts."""
    r.check(H.width, H.height)
    return corner_sums(H.tables, r.y0, r.x0, r.y1 + 1, r.x1 + 1)
