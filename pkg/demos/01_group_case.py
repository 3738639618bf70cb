# %% [markdown]
# Group case: the Fourier transform of the positive LDU factor of a Haar
# unitary in SU(n) is the c-function product over positive roots.

# %%

from cartan_diag import build_root_system, c_function, estimate_group_integral

# %%
for n, coords in [(2, [1.0]), (3, [1.0, 1.0]), (4, [0.5, -1.0, 0.7])]:
    rs = build_root_system("A", n - 1)
    lam = rs.weight_from_root_coords(coords)
    closed = c_function(rs, lam)
    est = estimate_group_integral(n, lam, 200_000, seed=1)
    print(f"SU({n}) lambda={coords}: closed {closed.value:.5f}  MC {est.mean:.5f} +- {est.stderr:.1e}"
          f"  z={est.z_score(closed.value):.2f}")

# %%
# the audit trail: one factor per positive root
for f in c_function(build_root_system("A", 2), build_root_system("A", 2).weight_from_root_coords([1, 1])).factors:
    print(f.root, f.numerator, f.denominator)
