# %% [markdown]
# # Twisted Mellin transform and its expansion
#
# `A_N f(x)` averages `f` against a product of Gamma laws peaked at `y = x`.
# The expansion in powers of `1/N` uses the polynomials `g_k`, whose degree is
# only `k // 2`: that is what makes the layer of order `|beta|` decay like
# `N^{-|beta|/2}` rather than `N^{-|beta|}`.

# %%
from fractions import Fraction

from toricmellin import GaussianBump, PolynomialFunction, g_polynomial, transform_numeric, transform_series
from toricmellin.mellin import empirical_order

for k in range(7):
    g = g_polynomial(k)
    print(f"g_{k}(s) = {g}    degree {g.degree()}")

# %% [markdown]
# For polynomials the series terminates, so it reproduces the closed form exactly.

# %%
y2 = PolynomialFunction.monomial([2])
print(transform_numeric(y2, [Fraction(1)], 4).value, transform_series(y2, [1.0], 4, 2).value)

# %% [markdown]
# A Gaussian bump has no terminating series.  The truncation error after order
# `M` decays at least like `N^{-(M+1)/2}`.

# %%
bump = GaussianBump([1.0], 1.0)
Ns = [50, 100, 200, 400, 800]
for M in range(3):
    rep = empirical_order(bump, [1.0], Ns, M)
    errors = ", ".join(f"{e:.2e}" for e in rep.params["errors"])
    print(f"M={M}: slope {rep.fitted_slope:+.3f}   errors {errors}")

# %% [markdown]
# Per-layer magnitudes show where the truncation error comes from.

# %%
r = transform_series(bump, [1.0], 200, 4)
for j, m in enumerate(r.layer_magnitudes()):
    print(f"|beta| = {j}: {m:.3e}")
