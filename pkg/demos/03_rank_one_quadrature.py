# %% [markdown]
# Rank one: integrating over the hyperbolic disk with the weighted volume
# reproduces the identity-component term of the two-sphere, by two routes.

# %%
import numpy as np

from cartan_diag import ComponentIndex, Weight, component_term, get_space, hyperbolic_quadrature

# %%
spec = get_space("gr:1,1")
for s in np.linspace(0.0, 5.0, 6):
    lam = Weight([2 * s])
    target = component_term(spec, ComponentIndex.identity(2), lam).value
    a = hyperbolic_quadrature(lam, route="iwasawa")
    b = hyperbolic_quadrature(lam, route="cartan")
    print(f"s={s:.1f}  target {target:.8f}  iwasawa {abs(a - target):.1e}  cartan {abs(b - target):.1e}")
