# %% [markdown]
# # Riemann sums on lattice polytopes
#
# For a lattice polytope `P`, the Riemann sum `N^{-n} sum f(k/N)` over the
# lattice points of `NP` has an asymptotic series obtained by applying the
# Todd operator in the facet offsets `h` to `h -> int_{P_h} f`.

# %%
from toricmellin import EulerMaclaurin, GaussianBump, HPolytope, PolynomialFunction, ehrhart_check, riemann_sum
from toricmellin.reports import loglog_slope

triangle = HPolytope.standard_simplex(2)
print("vertices", triangle.vertices, "area", triangle.volume())
check = ehrhart_check(triangle, range(1, 8))
print("Ehrhart coefficients", [str(c) for c in check.coefficients], "held-out check", check.passed)

# %% [markdown]
# Polynomial data: the facet derivatives are computed exactly and the
# corrected sum matches the Riemann sum once `M >= deg f + n`.

# %%
f = PolynomialFunction.monomial([1, 2])
em = EulerMaclaurin(f, triangle, 4)
for N in (2, 5, 10, 40):
    print(N, riemann_sum(f, triangle, N), float(em.value(N)))

# %% [markdown]
# Smooth non-polynomial data: each extra order buys one power of `1/N`.

# %%
g = GaussianBump([0.2, 0.4], 0.5)
Ns = [8, 16, 32, 64]
exact = {N: riemann_sum(g, triangle, N) for N in Ns}
for M in range(3):
    table = EulerMaclaurin(g, triangle, M)
    errors = [abs(table.value(N) - exact[N]) for N in Ns]
    print(f"M={M}: slope {loglog_slope(Ns, errors):+.2f}")
