# %% [markdown]
# # Spectral measures of weight slices
#
# Monomials `z^k` with `sum k_i = N alpha` span the weight space at level
# `N`.  The trace of a torus-invariant multiplier is a lattice sum of twisted
# Mellin transforms; summing Bargmann-space expectations state by state gives
# the same number by a different route.

# %%
from toricmellin import GaussianBump, PolynomialFunction, WeightData, spectral_measure, spectral_measure_em
from toricmellin import spectral_measure_states

W = WeightData.unit(2, alpha=1)
bump = GaussianBump([0.5, 0.5], 0.5)
print(" N   lattice sum         per-state sum       EM (M=2)")
for N in (5, 10, 20, 30):
    print(f"{N:2d}  {spectral_measure(bump, W, N):.15f}  {spectral_measure_states(bump, W, N):.15f}  "
          f"{spectral_measure_em(bump, W, N, 2):.10f}")

# %% [markdown]
# The trace of the identity counts states: `C(N alpha + d - 1, d - 1)`.

# %%
W3 = WeightData.unit(3, alpha=2)
one = PolynomialFunction.constant(1, 3)
for N in (1, 4, 10):
    print(N, spectral_measure(one, W3, N), spectral_measure_em(one, W3, N, 2))
