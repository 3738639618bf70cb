# %% [markdown]
# The Poisson operator on SU(k, m)/K: skew, Pfaffian equal to a^{2 delta},
# momentum map identity with second-order step decay, constant Jacobian.

# %%
import numpy as np

from cartan_diag.poissonel import (
    evens_lu_operator,
    jacobian_ratio,
    momentum_convergence,
    pfaffian_residual,
    random_point,
    ray_momentum,
    skew_residual,
)

rng = np.random.default_rng(4)

# %%
for k, m in [(1, 1), (1, 2), (2, 2)]:
    p = random_point(k, m, rng, with_k=True)
    print(f"SU({k},{m}): skew {skew_residual(evens_lu_operator(p)):.1e}  pfaffian {pfaffian_residual(p):.1e}")

# %%
p = random_point(1, 2, rng)
print("momentum residuals at h = 4e-4, 2e-4, 1e-4:", momentum_convergence(p, np.array([0.5, -0.2, -0.3])))

# %%
ratios = [jacobian_ratio(random_point(1, 1, rng)) for _ in range(10)]
print("jacobian ratios:", np.round(ratios, 8))

# %%
x = np.zeros((3, 3))
x[0, 2] = x[2, 0] = 1.0
print("momentum along a root ray:", np.round(ray_momentum(x, np.array([1.0, 0.0, -1.0]), np.linspace(0, 2, 5), 1, 2), 4))
