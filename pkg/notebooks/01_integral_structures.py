# %% [markdown]
# # Integral images and integral histograms
#
# Both structures are built once per image and then answer any rectangle
# query with four table lookups, whatever the rectangle's size.

# %%
import time

import numpy as np

from mshist.core import WindowRect
from mshist.integral import (
    build_integral,
    build_integral_histogram,
    rect_sum,
    window_bin_populations,
    window_variance,
)

rng = np.random.default_rng(0)
f = rng.random((480, 640))

T = build_integral(f)
T2 = build_integral(f * f)
print(T.table.shape)  # one guard row and column

# %% [markdown]
# A rectangle sum costs the same for a 3x3 window as for the whole image.

# %%
for r in (WindowRect(10, 10, 12, 12), WindowRect(0, 0, 639, 479)):
    t = time.perf_counter()
    for _ in range(10_000):
        s = rect_sum(T, r)
    dt = (time.perf_counter() - t) / 10_000
    print(f"{r.area:7d} px  sum={s:12.3f}  numpy={f[r.y0:r.y1 + 1, r.x0:r.x1 + 1].sum():12.3f}  {dt * 1e6:.1f} us/query")

# %% [markdown]
# Window variance from the sums of `f` and `f**2`:

# %%
r = WindowRect(100, 50, 163, 113)
print(window_variance(T, T2, r), f[50:114, 100:164].var())

# %% [markdown]
# The integral histogram keeps one table per bin. A window's histogram is
# one four-corner query per bin, and the counts always add up to the
# window area.

# %%
l = np.log(rng.lognormal(size=(480, 640)))
edges = np.linspace(l.min(), l.max(), 6)
H = build_integral_histogram(l, edges)
p = window_bin_populations(H, r)
print(p, p.sum(), r.area)
print(np.histogram(l[50:114, 100:164], bins=edges)[0])
