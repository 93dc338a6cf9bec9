"""Twisted Mellin transforms, Euler-Maclaurin sums on polytopes and distribution laws of Bargmann monomial states."""

from .bargmann import (
    BargmannState,
    WeightData,
    norm_squared_log,
    spectral_measure,
    spectral_measure_em,
    spectral_measure_states,
    state_density,
    state_expectation,
    weight_lattice_points,
)
from .distribution import (
    EpsilonSchedule,
    LevelSetProblem,
    epsilon_schedule,
    gamma_constant,
    layer_cake_check,
    scaling_study,
    sigma_predicted,
    superlevel_volume,
    superlevel_volume_exact,
    superlevel_volume_mc,
)
from .errors import (
    DerivativeCapabilityError,
    DivergenceError,
    DomainError,
    GeometryError,
    NonConvergenceError,
    ToricMellinError,
    UnsupportedError,
    ValidityError,
)
from .functions import ExponentialMix, GaussianBump, NumericFunction, PolynomialFunction, TestFunction
from .mellin import TransformResult, denominator_log, empirical_order, transform_numeric, transform_series
from .polynomials import RationalPolynomial, g_from_generating_function, g_polynomial, hardy_polynomial
from .polytope import (
    EulerMaclaurin,
    HPolytope,
    dilated_integral,
    ehrhart_check,
    euler_maclaurin_sum,
    lattice_points,
    riemann_sum,
)
from .quadrature import gauss_laguerre_general, integrate_orthant, monte_carlo_volume
from .reports import AsymptoticReport
from .special import log_gamma, todd_coefficients, unit_ball_volume

__version__ = "0.1.0"
