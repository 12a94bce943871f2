"""Domain types and parameter validation shared by the rest of the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, Union

import numpy as np

Domain = Literal["linear", "log", "display"]
ScaleCount = Union[int, Literal["auto"]]

#: Side length (pixels) the automatically chosen pyramid shrinks below.
SMALLEST_WINDOW = 64
#: Top of the 8-bit display range.
DISPLAY_MAX = 255.0


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class WdrImage:
    """Linear-light RGB radiance map stored as an ``(height, width, 3)`` array."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"expected (height, width, 3) array, got shape {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if not np.all(np.isfinite(px)):
            raise ValueError("radiance samples must be finite")
        if np.any(px < 0):
            raise ValueError("radiance samples must be non-negative")
        object.__setattr__(self, "pixels", _frozen(px))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def red(self) -> np.ndarray:
        return self.pixels[..., 0]

    @property
    def green(self) -> np.ndarray:
        return self.pixels[..., 1]

    @property
    def blue(self) -> np.ndarray:
        return self.pixels[..., 2]


@dataclass(frozen=True, eq=False)
class LuminanceField:
    """Single-channel image tagged with the domain its samples live in."""

    samples: np.ndarray
    domain: Domain = "linear"

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 2 or s.shape[0] < 1 or s.shape[1] < 1:
            raise ValueError(f"expected non-empty 2-D array, got shape {s.shape}")
        if self.domain not in ("linear", "log", "display"):
            raise ValueError(f"unknown domain {self.domain!r}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        if self.domain == "linear" and np.any(s < 0):
            raise ValueError("linear luminance must be non-negative")
        if self.domain == "display" and (np.any(s < 0) or np.any(s > DISPLAY_MAX)):
            raise ValueError("display samples must lie in [0, 255]")
        object.__setattr__(self, "samples", _frozen(s))

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.samples.shape


@dataclass(frozen=True)
class WindowRect:
    """Inclusive pixel rectangle ``[x0, x1] x [y0, y1]``."""

    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def width(self) -> int:
        return self.x1 - self.x0 + 1

    @property
    def height(self) -> int:
        return self.y1 - self.y0 + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    def check(self, width: int, height: int) -> None:
        if not (0 <= self.x0 <= self.x1 < width and 0 <= self.y0 <= self.y1 < height):
            raise IndexError(f"{self} lies outside a {width}x{height} image")


@dataclass(frozen=True)
class ToneParams:
    """User-facing knobs of the operator.

    ``log_floor`` is relative to the image's maximum linear luminance.
    ``fallback_tolerance`` is the fusion-weight sum below which the
    full-image tone value is used as is.
    """

    bins: int = 5
    epsilon: float = 0.1
    scales: ScaleCount = "auto"
    sat: float = 0.6
    log_floor: float = 1e-6
    fallback_tolerance: float = 1e-8


def max_scale_count(width: int, height: int) -> int:
    """Number of distinct pyramid levels before both sides bottom out at 1."""
    return 1 + math.ceil(math.log2(max(width, height))) if max(width, height) > 1 else 1


def auto_scale_count(width: int, height: int) -> int:
    s, w, h = 1, width, height
    while max(w, h) > SMALLEST_WINDOW:
        w, h = -(-w // 2), -(-h // 2)
        s += 1
    return s


def validate_params(p: ToneParams, width: int, height: int) -> ToneParams:
    """Check ``p`` against the image size and resolve ``scales='auto'``.

    Raises ``ValueError`` on any out-of-range knob. Calling it again on
    its own output returns an equal object.
    """
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be positive")
    if isinstance(p.bins, bool) or int(p.bins) != p.bins or p.bins < 1:
        raise ValueError(f"bins must be a positive integer, got {p.bins!r}")
    for name in ("epsilon", "log_floor", "fallback_tolerance"):
        v = getattr(p, name)
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be positive and finite, got {v!r}")
    if not (0 < p.sat <= 1):
        raise ValueError(f"sat must lie in (0, 1], got {p.sat!r}")

    if p.scales == "auto":
        scales = auto_scale_count(width, height)
    else:
        if isinstance(p.scales, bool) or int(p.scales) != p.scales or p.scales < 1:
            raise ValueError(f"scales must be a positive integer or 'auto', got {p.scales!r}")
        scales = int(p.scales)
        limit = max_scale_count(width, height)
        if scales > limit:
            raise ValueError(
                f"{scales} scales would halve a {width}x{height} window below 1 pixel "
                f"(at most {limit} allowed)"
            )
    return replace(p, bins=int(p.bins), scales=scales)
