"""Multi-scale histogram synthesis tone mapping.

Every pixel gets one tone curve per pyramid scale, built from the
histogram of the window around it, and one textural score per scale from
the window variance. The display value is the score-weighted blend of the
per-scale tone values, with the score of scale ``i`` raised to the power
``i`` so that the full-image scale (``i = 1``) dominates flat regions.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    DISPLAY_MAX,
    LuminanceField,
    ToneParams,
    WdrImage,
    WindowRect,
    auto_scale_count,
    max_scale_count,
    validate_params,
)
from .integral import (
    IntegralHistogram,
    IntegralImage,
    bin_index,
    build_integral,
    build_integral_histogram,
    corner_sums,
    variance_from_sums,
    window_bin_populations,
    window_variance,
)

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

# Rows per work unit. Fixed so results never depend on the worker count.
BAND_ROWS = 64


def extract_luminance(img: WdrImage) -> LuminanceField:
    return LuminanceField(img.pixels @ LUMA_WEIGHTS, "linear")


def luminance_floor(L: np.ndarray, log_floor: float) -> float:
    peak = float(np.max(L))
    if peak <= 0:
        raise ValueError("image is entirely black; its dynamic range is undefined")
    return log_floor * peak


def to_log_domain(L: LuminanceField, log_floor: float = 1e-6) -> LuminanceField:
    """Natural log of luminance, floored at ``log_floor`` times the peak."""
    if L.domain != "linear":
        raise ValueError(f"expected linear luminance, got {L.domain!r}")
    floor = luminance_floor(L.samples, log_floor)
    return LuminanceField(np.log(np.maximum(L.samples, floor)), "log")


@dataclass(frozen=True)
class ScalePlan:
    """Window sizes ``(width, height)``, largest (the full image) first."""

    windows: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.windows)

    def __iter__(self):
        return iter(self.windows)


def scale_windows(width: int, height: int, s: int | str = "auto") -> ScalePlan:
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be positive")
    if s == "auto":
        s = auto_scale_count(width, height)
    elif s < 1 or s > max_scale_count(width, height):
        raise ValueError(f"cannot build {s} scales for a {width}x{height} image")
    windows = [(width, height)]
    for _ in range(s - 1):
        w, h = windows[-1]
        windows.append((-(-w // 2), -(-h // 2)))
    return ScalePlan(tuple(windows))


def window_start(center, size: int, extent: int):
    """First index of a ``size``-long window centred on ``center``.

    Windows that would cross the border slide back inside it, so every
    window keeps its full size and the full-image scale is exactly global.
    """
    return np.clip(np.asarray(center) - size // 2, 0, extent - size)


def window_rect(x: int, y: int, size: tuple[int, int], width: int, height: int) -> WindowRect:
    ww, wh = size
    x0 = int(window_start(x, ww, width))
    y0 = int(window_start(y, wh, height))
    return WindowRect(x0, y0, x0 + ww - 1, y0 + wh - 1)


def global_bin_edges(l: np.ndarray, bins: int) -> np.ndarray:
    """``bins`` equal-width intervals spanning the log-luminance range.

    A flat image has no range; its edges are laid out below the single
    value so that it sits at the top of the last bin.
    """
    lo, hi = float(np.min(l)), float(np.max(l))
    edges = lo + (hi - lo) * np.arange(bins + 1) / bins
    edges[-1] = hi
    if not np.all(np.diff(edges) > 0):
        edges = hi + np.arange(-bins, 1, dtype=np.float64)
    return edges


@dataclass(frozen=True, eq=False)
class ToneCurve:
    """Piecewise-linear map from log luminance to display level.

    ``levels[k]`` is the display value reached at the top of bin ``k``.
    """

    edges: np.ndarray
    levels: np.ndarray

    @classmethod
    def from_populations(cls, edges, populations) -> "ToneCurve":
        p = np.asarray(populations, dtype=np.float64)
        if p.sum() <= 0:
            raise ValueError("tone curve needs a non-empty histogram")
        cum = np.cumsum(p)
        levels = cum * DISPLAY_MAX / cum[-1]
        levels[-1] = DISPLAY_MAX
        return cls(np.asarray(edges, dtype=np.float64), levels)

    def __call__(self, values):
        values = np.asarray(values, dtype=np.float64)
        k = bin_index(values, self.edges)
        frac = bin_fraction(values, self.edges, k)
        lower = np.where(k > 0, self.levels[np.maximum(k - 1, 0)], 0.0)
        return lower + frac * (self.levels[k] - lower)


def bin_fraction(values, edges: np.ndarray, k):
    """Position of each value inside its bin, in ``[0, 1]``."""
    return np.clip((values - edges[k]) / (edges[k + 1] - edges[k]), 0.0, 1.0)


def local_tone_curve(H: IntegralHistogram, r: WindowRect) -> ToneCurve:
    return ToneCurve.from_populations(H.bin_edges, window_bin_populations(H, r))


def tone_value_at(x: int, y: int, value: float, window_size: tuple[int, int],
                  H: IntegralHistogram) -> float:
    """Single-scale display value of pixel ``(x, y)`` with log luminance ``value``."""
    r = window_rect(x, y, window_size, H.width, H.height)
    return float(local_tone_curve(H, r)(value))


def texture_score(variance, epsilon: float):
    return variance / (variance + epsilon)


def texture_score_at(x: int, y: int, window_size: tuple[int, int],
                     T: IntegralImage, T2: IntegralImage, epsilon: float) -> float:
    """Textural score of the window around ``(x, y)``: 0 when flat, toward 1 when busy.

    ``T`` and ``T2`` must be built over the log field rescaled to ``[0, 1]``
    and over its square.
    """
    r = window_rect(x, y, window_size, T.width, T.height)
    return texture_score(window_variance(T, T2, r), epsilon)


def fuse(u, a, tolerance: float = 1e-8):
    """Blend per-scale tone values ``u`` with weights ``a[i] ** (i + 1)``.

    Scale index runs along the first axis, largest scale first. Where the
    weights sum below ``tolerance`` the largest-scale value is returned.
    """
    u = np.asarray(u, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    exponents = np.arange(1, u.shape[0] + 1).reshape((-1,) + (1,) * (u.ndim - 1))
    w = a**exponents
    num = np.zeros(u.shape[1:])
    den = np.zeros(u.shape[1:])
    for i in range(u.shape[0]):
        num = num + w[i] * u[i]
        den = den + w[i]
    ok = den >= tolerance
    out = np.where(ok, num / np.where(ok, den, 1.0), u[0])
    out = np.clip(out, u.min(axis=0), u.max(axis=0))
    return float(out) if out.ndim == 0 else out


class MsHist:
    """Precomputed integral structures for one luminance image.

    Building this object does all the sequential work. After that every
    method is read-only, so bands of rows can be evaluated concurrently.
    """

    def __init__(self, L: LuminanceField, params: ToneParams = ToneParams()):
        self.params = validate_params(params, L.width, L.height)
        self.luminance = L
        self.log = to_log_domain(L, self.params.log_floor)
        l = self.log.samples
        self.edges = global_bin_edges(l, self.params.bins)
        self.histogram = build_integral_histogram(l, self.edges)
        lo, hi = float(l.min()), float(l.max())
        z = (l - lo) / (hi - lo) if hi > lo else np.zeros_like(l)
        self.normalized = z
        self.T = build_integral(z)
        self.T2 = build_integral(z * z)
        self.plan = scale_windows(L.width, L.height, self.params.scales)
        self._bin = bin_index(l, self.edges)
        self._frac = bin_fraction(l, self.edges, self._bin)

    @property
    def shape(self) -> tuple[int, int]:
        return self.luminance.shape

    def _bounds(self, rows: slice, window: tuple[int, int]):
        h, w = self.shape
        ww, wh = window
        ys = np.arange(h)[rows]
        x0 = window_start(np.arange(w), ww, w)[None, :]
        y0 = window_start(ys, wh, h)[:, None]
        return y0, x0, y0 + wh, x0 + ww

    def tone_band(self, rows: slice, window: tuple[int, int]) -> np.ndarray:
        y0, x0, y1, x1 = self._bounds(rows, window)
        cum = np.cumsum(corner_sums(self.histogram.tables, y0, x0, y1, x1), axis=0)
        k = self._bin[rows]
        upto = np.take_along_axis(cum, k[None], axis=0)[0]
        below = np.where(k > 0, np.take_along_axis(cum, np.maximum(k - 1, 0)[None], axis=0)[0], 0)
        total = cum[-1]
        lower = below * DISPLAY_MAX / total
        upper = upto * DISPLAY_MAX / total
        return lower + self._frac[rows] * (upper - lower)

    def score_band(self, rows: slice, window: tuple[int, int]) -> np.ndarray:
        y0, x0, y1, x1 = self._bounds(rows, window)
        var = variance_from_sums(
            corner_sums(self.T.table, y0, x0, y1, x1),
            corner_sums(self.T2.table, y0, x0, y1, x1),
            float(window[0] * window[1]),
        )
        return texture_score(var, self.params.epsilon)

    def render_band(self, rows: slice) -> np.ndarray:
        u = np.stack([self.tone_band(rows, win) for win in self.plan])
        a = np.stack([self.score_band(rows, win) for win in self.plan])
        return fuse(u, a, self.params.fallback_tolerance)

    def _bands(self):
        h = self.shape[0]
        return [slice(r, min(r + BAND_ROWS, h)) for r in range(0, h, BAND_ROWS)]

    def _assemble(self, fn, workers: int = 1) -> np.ndarray:
        out = np.empty(self.shape)
        bands = self._bands()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(fn, bands))
        else:
            results = [fn(b) for b in bands]
        for b, r in zip(bands, results):
            out[b] = r
        return out

    def render(self, workers: int = 1) -> LuminanceField:
        return LuminanceField(self._assemble(self.render_band, workers), "display")

    def scale_tone(self, i: int, workers: int = 1) -> np.ndarray:
        """Single-scale display image for scale ``i`` (0 = full image)."""
        win = self.plan.windows[i]
        return self._assemble(lambda rows: self.tone_band(rows, win), workers)

    def scale_score(self, i: int, workers: int = 1) -> np.ndarray:
        win = self.plan.windows[i]
        return self._assemble(lambda rows: self.score_band(rows, win), workers)


def tonemap_luminance(L: LuminanceField, p: ToneParams = ToneParams(),
                      workers: int = 1) -> LuminanceField:
    return MsHist(L, p).render(workers)


def restore_color(img: WdrImage, L_in: LuminanceField, L_out: LuminanceField,
                  sat: float = 0.6, log_floor: float = 1e-6) -> np.ndarray:
    """Reapply the input's colour ratios to the tone-mapped luminance.

    Returns an ``(height, width, 3)`` array in ``[0, 255]``. Ratios use the
    same floored luminance as the log transform, so black pixels stay black.
    """
    if not (0 < sat <= 1):
        raise ValueError(f"sat must lie in (0, 1], got {sat!r}")
    Lf = np.maximum(L_in.samples, luminance_floor(L_in.samples, log_floor))
    ratio = img.pixels / Lf[..., None]
    return np.clip(ratio**sat * L_out.samples[..., None], 0.0, DISPLAY_MAX)


def tonemap(img: WdrImage, p: ToneParams = ToneParams(), workers: int = 1) -> np.ndarray:
    """Full colour pipeline: luminance, MS-Hist, colour restoration."""
    L = extract_luminance(img)
    engine = MsHist(L, p)
    out = engine.render(workers)
    return restore_color(img, L, out, engine.params.sat, engine.params.log_floor)
