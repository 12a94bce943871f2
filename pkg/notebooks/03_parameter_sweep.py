# %% [markdown]
# # Bins and regularizer
#
# A 3x3 grid over the number of bins `n` (rows) and the regularizer
# `epsilon` (columns). More bins raise overall contrast; a smaller epsilon
# lets small scales act on weaker texture, bringing out more local detail.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from mshist import io
from mshist.core import ToneParams
from mshist.metrics import quality_report
from mshist.synthetic import interior_scene
from mshist.tonemap import tonemap

img = interior_scene(288, 192, seed=4, dynamic_range_db=100)
bins = (3, 5, 20)
eps = (0.9, 0.1, 0.001)

fig, axes = plt.subplots(3, 3, figsize=(9, 13))
for r, n in enumerate(bins):
    for c, e in enumerate(eps):
        rgb = tonemap(img, ToneParams(bins=n, epsilon=e))
        shown = io.to_bytes(rgb)
        rep = quality_report(shown.astype(float))
        axes[r, c].imshow(shown)
        axes[r, c].set_title(f"n={n} eps={e}\nsharp {rep.sharpness:.1f}  std {rep.contrast:.1f}", fontsize=8)
        axes[r, c].axis("off")
        print(f"n={n:2d} eps={e:<6} brightness={rep.brightness:6.2f} "
              f"sharpness={rep.sharpness:5.2f} contrast={rep.contrast:5.2f}")
fig.tight_layout()
fig.savefig("parameter_sweep.png", dpi=70)
