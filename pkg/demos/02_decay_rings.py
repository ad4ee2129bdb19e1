# %% [markdown]
# # Decay-rate maps and the parity effect
#
# Polar maps of the golden-rule rates `Gamma+-` at `k* = pi/2`, with
# `n1 = lam n2` and `dx = theta / k*`.  When the fixed atom has `n2 = 2` its
# form factor vanishes on shell, the interference term drops out and the map
# is made of rings.  With `n2 = 1` it does not, and `theta` matters.

# %%
import numpy as np

from giantbic import Geometry, ModelParams, decay_rate_continuum, robust_bic_check
from giantbic.cli import rates_map

p = ModelParams(g=0.1)
thetas = np.linspace(0, 2 * np.pi, 180, endpoint=False)
lams = np.linspace(0.02, 2.0, 100)

# %%
even = np.array(rates_map(lams, thetas, 2.0, np.pi / 2, p)).reshape(lams.size, thetas.size, 6)
odd = np.array(rates_map(lams, thetas, 1.0, np.pi / 2, p)).reshape(lams.size, thetas.size, 6)

print("n2 = 2: largest theta-variance of Gamma+ on any ring:", np.var(even[:, :, 4], axis=1).max())
i = np.argmin(np.abs(lams - 1.0))
print(f"n2 = 1, lam = {lams[i]:.2f}: Gamma+ ranges over "
      f"[{odd[i, :, 4].min():.4f}, {odd[i, :, 4].max():.4f}]")

# %% [markdown]
# Rings where both atoms satisfy `k* n = (2l+1) pi` are completely dark.

# %%
for lam in (0.5, 1.0, 1.5, 3.0):
    n1 = 2 * lam
    dark = robust_bic_check(np.pi / 2, n1).holds
    g = decay_rate_continuum(0.0, "+", p, Geometry(x1=0, x2=1, n1=n1, n2=2))
    print(f"lam = {lam:3.1f}  n1 = {n1:3.1f}  robust: {dark!s:5}  Gamma+ = {g:.3e}")

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, data, title in ((axes[0], even, "n2 = 2"), (axes[1], odd, "n2 = 1")):
        sc = ax.scatter(data[:, :, 2], data[:, :, 3], c=data[:, :, 4], s=2, cmap="magma")
        ax.set_aspect("equal")
        ax.set_title(f"Gamma+/xi, {title}")
        fig.colorbar(sc, ax=ax)
    fig.savefig("decay_rings.png", dpi=120, bbox_inches="tight")
