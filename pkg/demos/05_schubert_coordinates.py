# %% [markdown]
# SL(2) chart coordinates on the big cell of SL(n): translated
# lowest-weight minors factor into powers of the a-coordinates, and the
# product of per-root integrals rebuilds the c-function.

# %%
import numpy as np

from cartan_diag import Weight, build_root_system, c_function, longest_word
from cartan_diag.bottsamelson import (
    ParabolicWordData,
    factored_c_integral,
    random_sl2_prime,
    sigma_translate_exact,
    verify_a26,
)

rng = np.random.default_rng(5)

# %%
for rank in (2, 3):
    rs = build_root_system("A", rank)
    data = ParabolicWordData(rs, longest_word(rs))
    lam = Weight(-np.arange(1, rank + 1, dtype=float))
    factors = [random_sl2_prime(rng) for _ in data.word]
    print(f"A{rank} word {data.word.indices}: exponents {data.exponents(lam).real}"
          f"  residual {verify_a26(data, factors, lam):.1e}")
    factors[0] = random_sl2_prime(rng, zero_a=True)
    print("  with a_1 = 0:", sigma_translate_exact(data, factors, lam))

# %%
rs = build_root_system("A", 3)
lam = Weight([0.4, -1.3, 2.0])
print(factored_c_integral(rs, lam), c_function(rs, lam).value)
