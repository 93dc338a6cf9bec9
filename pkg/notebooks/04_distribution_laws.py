# %% [markdown]
# # Distribution laws of monomial states
#
# `sigma([t, inf))` is the volume of the set where the state density exceeds
# `t`.  In `r = |z|^2` coordinates the set is a thin shell around `r = k/N`
# of width `~ sqrt(eps_N)`, and the volume follows from a ball-volume formula.

# %%
import math

from toricmellin import EpsilonSchedule, LevelSetProblem, gamma_constant, layer_cake_check, scaling_study
from toricmellin.distribution import epsilon_logN_as_printed, sigma_predicted, superlevel_volume_exact

for r in scaling_study([1.0], [200, 1000, 10**4, 10**5], 1.0, "refined"):
    print(f"N={r.params['N']:>6}  exact {r.exact:.6e}  predicted {r.predicted:.6e}  ratio {r.ratio:.6f}")

# %% [markdown]
# Degenerate direction `k = (N, 0)`: one coordinate sits at the origin and the
# volume scales like `(log N / N)^{d - l/2}`.

# %%
reps = scaling_study([1.0, 0.0], [10**3, 10**4, 10**5], 1.0, "degenerate")
print("fitted exponent", reps[0].fitted_slope)
for r in reps:
    print(r.params["N"], r.exact, r.predicted, r.ratio)

# %% [markdown]
# Rescaling `t -> N^{-t}`: substituting into the plain schedule gives
# `eps_N = (d/2 + t) log N / N - gamma/N`.  The other reading,
# `(d + 2t) log N / N`, is twice as large and misses the measured volume.

# %%
N, t, d = 10**5, 0.5, 2
S = EpsilonSchedule("logN_rescale")
P = LevelSetProblem(N, (N, N), S.effective_log_t(N, t, d))
g = gamma_constant(P.a)
exact = superlevel_volume_exact(P)
print("derived:", exact / sigma_predicted(P, "refined", epsilon=S.epsilon(N, t, g, d)))
print("doubled:", exact / sigma_predicted(P, "refined", epsilon=epsilon_logN_as_printed(N, t, d) - g / N))

# %% [markdown]
# Layer cake: integrating the distribution law over `t` recovers the total mass.

# %%
for N, k in ((1, 0), (5, 5), (20, 10)):
    print(N, k, layer_cake_check(N, (k,)).exact)
