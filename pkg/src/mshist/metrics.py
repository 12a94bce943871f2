"""Brightness, sharpness and contrast of display images."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import LuminanceField

CSV_FIELDS = ("name", "brightness", "sharpness", "contrast")


def _samples(F) -> np.ndarray:
    if isinstance(F, LuminanceField):
        return F.samples
    a = np.asarray(F, dtype=np.float64)
    if a.ndim == 3:
        # Colour images are scored on their luma.
        a = a @ np.array([0.299, 0.587, 0.114])
    return a


def brightness(F) -> float:
    return float(np.mean(_samples(F)))


def gradient_magnitude(F) -> np.ndarray:
    """Per-pixel ``|grad F|``: central differences inside, one-sided at the border."""
    a = _samples(F)
    if a.shape[0] < 2 or a.shape[1] < 2:
        raise ValueError("sharpness needs an image of at least 2x2 pixels")
    gy, gx = np.gradient(a)
    return np.hypot(gx, gy)


def sharpness(F, total: bool = False) -> float:
    """Mean gradient magnitude, or the raw sum when ``total`` is set."""
    g = gradient_magnitude(F)
    return float(g.sum() if total else g.mean())


def contrast(F) -> float:
    return float(np.std(_samples(F)))


def dynamic_range_db(L) -> float:
    """``20 log10(max / min)`` over the non-zero samples of a linear luminance map."""
    a = _samples(L)
    pos = a[a > 0]
    if pos.size == 0:
        raise ValueError("no positive samples")
    return float(20 * np.log10(pos.max() / pos.min()))


@dataclass(frozen=True)
class QualityReport:
    brightness: float
    sharpness: float
    contrast: float
    name: str = ""

    def csv_row(self) -> dict:
        return {k: asdict(self)[k] for k in CSV_FIELDS}

    def text(self) -> str:
        title = f"{self.name}\n" if self.name else ""
        return (
            f"{title}  brightness  {self.brightness:9.4f}\n"
            f"  sharpness   {self.sharpness:9.4f}\n"
            f"  contrast    {self.contrast:9.4f}"
        )


def quality_report(F, name: str = "") -> QualityReport:
    return QualityReport(brightness(F), sharpness(F), contrast(F), name)
