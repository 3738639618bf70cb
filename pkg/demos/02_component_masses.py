# %% [markdown]
# Component sums on Grassmannians.  Sampled component masses are compared
# with the uniform 1/M assignment and with a single shared normalizer
# Z^{-1} prod 1/<delta, a> over the noncompact roots of each component.

# %%
import numpy as np

from cartan_diag import Weight, diagonal_fourier, enumerate_components, estimate_diagonal_integral, get_space
from cartan_diag.closedform import component_mass, component_term

# %%
for key in ["gr:1,1", "gr:1,2", "gr:2,2"]:
    spec = get_space(key)
    lam = Weight(np.linspace(-1.0, 1.0, spec.n - 1))
    est = estimate_diagonal_integral(spec, lam, 300_000, seed=2)
    print(f"\n{key}")
    for w in enumerate_components(spec):
        s = est.per_component[w.label()]
        term = component_term(spec, w, lam)
        print(f"  {w.label()}  mass {s.mass:.4f}  uniform {component_mass(spec, w):.4f}"
              f"  shared {component_mass(spec, w, 'shared'):.4f}"
              f"  conditional z {abs(s.mean - term.value / term.prefactor) / s.stderr:.2f}")
    for norm in ("uniform", "shared"):
        print(f"  overall z ({norm}): {est.z_score(diagonal_fourier(spec, lam, norm).value):.2f}")
