"""Exact observables of a reversibly binding diffusive pair in 2D.

Green's functions, survival probabilities, the time-dependent rate
coefficient, and the regularized off-rate of an isolated pair that
diffuses with coefficient D and reversibly binds at an encounter radius
a with intrinsic rates kappa_a (association, length^2/time) and kappa_d
(dissociation, 1/time).  Numerics run on a compiled kernel extension
when available, with a pure-NumPy fallback (REVPAIR2D_BACKEND selects
explicitly).
"""

__version__ = "1.0.0"

from ._backend import BACKEND_NAME, get_backend
from .greens import (BOUND, AccuracyError, GreensRequest,
                     NegativeDensityWarning, gf_from_star, gf_star_from_r0,
                     gf_unbound, unbound_mass)
from .kernel import (KernelContext, PairParams, alpha, beta,
                     f_dimensionless, kernel_P, kernel_T)
from .observables import (IdentityResult, IdentitySuiteReport, ObservableId,
                          OffRateReport, RateRoute, RegularizationError,
                          TimeSeries, convolution_residual, identity_suite,
                          k_time_integral, mean_lifetime,
                          off_rate_literature_context, rate_k, rate_series,
                          survival, survival_bound, survival_bound_series,
                          survival_series)
from .pde_oracle import (BOUND_START, Initial, OracleConfig,
                         OracleInstabilityError, OracleSolution, delta_at,
                         dump_csv, oracle_bound, oracle_density_at,
                         oracle_rate, oracle_survival, richardson_survival,
                         smearing_weights, solve)
from .quadrature import (IDENTITY_CONFIG, SWEEP_CONFIG,
                         IntegrandEvaluationError, QuadratureConfig,
                         QuadratureResult, finite_part, integrate_damped,
                         integrate_finite, integrate_oscillatory)
from .special_functions import BesselOrder, bessel_j, bessel_y, \
    oscillation_nodes

__all__ = [
    "__version__", "BACKEND_NAME", "get_backend",
    "PairParams", "KernelContext", "alpha", "beta", "kernel_T", "kernel_P",
    "f_dimensionless",
    "BesselOrder", "bessel_j", "bessel_y", "oscillation_nodes",
    "QuadratureConfig", "QuadratureResult", "IDENTITY_CONFIG",
    "SWEEP_CONFIG", "IntegrandEvaluationError", "integrate_damped",
    "integrate_oscillatory", "integrate_finite", "finite_part",
    "BOUND", "GreensRequest", "AccuracyError", "NegativeDensityWarning",
    "gf_unbound", "gf_from_star", "gf_star_from_r0", "unbound_mass",
    "ObservableId", "RateRoute", "TimeSeries", "OffRateReport",
    "IdentityResult", "IdentitySuiteReport", "RegularizationError",
    "survival", "survival_bound", "survival_series",
    "survival_bound_series", "rate_k", "rate_series", "k_time_integral",
    "mean_lifetime", "off_rate_literature_context", "identity_suite",
    "convolution_residual",
    "OracleConfig", "OracleSolution", "OracleInstabilityError", "Initial",
    "BOUND_START", "delta_at", "solve", "oracle_survival", "oracle_bound",
    "oracle_rate", "oracle_density_at", "richardson_survival",
    "smearing_weights", "dump_csv",
]
