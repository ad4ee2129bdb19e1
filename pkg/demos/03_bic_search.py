# %% [markdown]
# # Searching for bound states in the continuum
#
# `find_bic` scans `E - Omega - Delta(E)` across the band, refines each root
# and keeps those whose on-shell rate vanishes.  The exact spectrum tells the
# same story, with one subtlety: the BIC carries a bound photon.

# %%
import numpy as np
import scipy.linalg as la

from giantbic import Geometry, ModelParams, build_hamiltonian, find_bic, on_shell_dark_state

p = ModelParams(g=0.1, N_c=2004)

# %%
for n1, n2 in ((2, 2), (2, 6), (3, 4), (1, 2)):
    geom = Geometry(x1=0, x2=2, n1=n1, n2=n2)
    hits = [s for ch in "+-" for s in find_bic(ch, p, geom) if abs(s.energy - p.Omega) < 1e-3]
    dark = on_shell_dark_state(p.k_star, p, geom)
    print(f"n = ({n1}, {n2}):", "no channel BIC" if not hits else
          ", ".join(f"{s.channel} E={s.energy:+.2e} residual={s.residual_gamma:.1e} robust={s.robust}"
                    for s in hits))
    if dark is not None:
        print(f"    on-shell dark state |c1|, |c2| = {abs(dark[0]):.3f}, {abs(dark[1]):.3f}")

# %% [markdown]
# With one small atom (`n1 = 1`) only the other atom is silent, so the dark
# state is the product state `|g,e>` and neither Bell channel hosts a BIC.
#
# The exact spectrum of the ideal geometry has a degenerate eigenspace at
# `omega_c`.  Its most atomic member still keeps about 1% of its weight in
# the field, which is the photon bound between each atom's two legs.

# %%
geom = Geometry(x1=0, x2=2, n1=2, n2=2)
E, V = la.eigh(build_hamiltonian(p, geom), driver="evr", subset_by_value=(-1e-8, 1e-8))
weight = 1 - la.svdvals(V[:2])[0] ** 2
print(f"{E.size} eigenvalues within 1e-8 of omega_c, min photonic weight {weight:.4e}, "
      f"g^2/(xi^2+g^2) = {p.g**2 / (p.xi**2 + p.g**2):.4e}")
