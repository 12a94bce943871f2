"""Procedural radiance maps for demos and tests.

No standard radiance maps ship with the package, so these scenes stand in
for them: a dim interior lit through a bright window, with textured walls,
a sky gradient and a few specular highlights.
"""

from __future__ import annotations

import numpy as np

from .core import WdrImage


def interior_scene(height: int = 192, width: int = 128, seed: int = 0,
                   dynamic_range_db: float = 100.0) -> WdrImage:
    """Window-lit room spanning roughly ``dynamic_range_db`` of luminance."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width] / np.array([height, width])[:, None, None]
    decades = dynamic_range_db / 20.0

    # Interior falls off away from the window; walls carry fine texture.
    wx, wy = 0.3 + 0.4 * rng.random(), 0.25 + 0.2 * rng.random()
    dist = np.hypot(xx - wx, yy - wy)
    log_l = -0.55 * decades * np.clip(dist / 0.8, 0, 1) ** 0.7
    log_l += 0.08 * np.sin(40 * xx + 3 * rng.random()) * np.cos(33 * yy)
    log_l += 0.05 * rng.standard_normal((height, width))

    # Bright window with a sky gradient and mullions.
    win = (np.abs(xx - wx) < 0.12) & (np.abs(yy - wy) < 0.15)
    mullion = (np.abs(xx - wx) < 0.01) | (np.abs(yy - wy) < 0.01)
    sky = -0.1 * decades + 0.3 * (1 - (yy - wy + 0.15) / 0.3)
    log_l = np.where(win & ~mullion, sky, log_l)

    # Specular glints near the top of the range; a deep shadow near the bottom.
    for _ in range(3):
        gx, gy = rng.random(2)
        log_l += 0.45 * decades * np.exp(-((xx - gx) ** 2 + (yy - gy) ** 2) / 2e-4)
    log_l = np.where((yy > 0.85) & (xx < 0.2), log_l - 0.4 * decades, log_l)

    lum = 10.0 ** log_l
    tint = 1 + 0.25 * rng.standard_normal(3)
    warm = np.stack([1.15 + 0.1 * xx, np.ones_like(xx), 0.8 + 0.1 * yy], axis=-1)
    rgb = lum[..., None] * warm * np.abs(tint)
    return WdrImage(rgb)


def corpus(count: int = 5, height: int = 96, width: int = 128) -> list[WdrImage]:
    """``count`` distinct scenes with varied sizes and dynamic ranges."""
    return [
        interior_scene(height + 16 * i, width - 8 * i, seed=i, dynamic_range_db=70 + 10 * i)
        for i in range(count)
    ]
