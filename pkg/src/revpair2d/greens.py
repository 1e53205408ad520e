"""Exact Green's functions of the reversibly binding pair.

Assembled from the kernel eigenfunctions by Gaussian-damped quadrature in
the dimensionless frequency xi = x a:

    g(r, t|r0)  = (1/(2 pi a^2)) I[ T(xi,rho) T(xi,rho0) xi ]
    g(*, t|r0)  = 1 - S(t|r0),   S = 1 - I[ P(xi,1) T(xi,rho0) ]
    g(r, t|*)   = (kappa_d/kappa_a) I[ P(xi,1) T(xi,rho) ]

with I[...] = integral of (...) e^{-tau xi^2} d xi and tau = D t / a^2.
Densities carry 1/length^2; bound-state quantities are probabilities.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ._backend import core
from .kernel import PairParams
from .quadrature import IDENTITY_CONFIG, QuadratureConfig, integrate_damped


class _BoundState:
    """Marker for the bound state as a source or target."""

    __slots__ = ()

    def __repr__(self):
        return "BOUND"


BOUND = _BoundState()


class AccuracyError(RuntimeError):
    """A numerical result violated its accuracy contract."""


class NegativeDensityWarning(UserWarning):
    """A density within quadrature noise of zero was clamped to zero."""


@dataclass(frozen=True)
class GreensRequest:
    """One Green's function evaluation point.

    r may be None for a bound target; r0 may be BOUND for a bound source.
    t = 0 is only meaningful for probabilities (the t = 0 density is a
    delta distribution, not pointwise evaluable).
    """

    params: PairParams
    t: float
    r: Optional[float] = None
    r0: Union[float, _BoundState] = BOUND

    def __post_init__(self):
        if not (self.t >= 0 and math.isfinite(self.t)):
            raise ValueError("t must be finite and >= 0")
        a = self.params.a
        if self.r is not None and not (self.r >= a):
            raise ValueError("r must be >= a")
        if not isinstance(self.r0, _BoundState) and not (self.r0 >= a):
            raise ValueError("r0 must be >= a or BOUND")


def _require_converged(res, what):
    if not res.converged:
        raise AccuracyError(
            "%s quadrature did not converge (error estimate %.3e after "
            "%d panels)" % (what, res.error_estimate, res.panels_used))
    return res


def _clamp_density(value, cfg, what):
    if value >= 0.0:
        return value
    if value > -cfg.abs_tol:
        warnings.warn(
            "%s = %.3e within quadrature noise of zero; clamped to 0"
            % (what, value), NegativeDensityWarning, stacklevel=3)
        return 0.0
    raise AccuracyError(
        "%s = %.3e is negative beyond the abs_tol=%.1e noise band"
        % (what, value, cfg.abs_tol))


def _survival_integral(h_t, kd_t, tau, rho0, cfg):
    """I[P(xi,1) T(xi,rho0)] at damping tau; 1 - S as a raw integral.

    No domain check on rho0: the integrand is analytic in rho0 near 1, and
    the rate-from-survival-derivative route evaluates it marginally below
    the encounter radius as an analytic continuation.
    """
    integrand = core.make_surv(h_t, kd_t, rho0)
    return _require_converged(
        integrate_damped(integrand, tau, cfg), "survival")


def _bound_survival_integral(h_t, kd_t, tau, cfg):
    """I[P(xi,1)^2 / xi]; equals (h/kd) * (1 - S(t|*))."""
    integrand = core.make_bound(h_t, kd_t)
    return _require_converged(
        integrate_damped(integrand, tau, cfg), "bound survival")


def gf_unbound(params, t, r, r0, cfg=None):
    """Density g(r, t|r0) for an initially unbound pair, 1/length^2.

    Symmetric in (r, r0) by construction: both orderings run the
    identical integral.  Small negative quadrature noise (within abs_tol)
    clamps to 0 with a NegativeDensityWarning; anything more negative
    raises AccuracyError.
    """
    if not (t > 0):
        raise ValueError(
            "t must be positive: the t=0 density is a delta distribution")
    cfg = cfg or IDENTITY_CONFIG
    a = params.a
    req = GreensRequest(params, t, r=r, r0=r0)
    tau = params.D * t / (a * a)
    #Fixed argument order makes the (r, r0) symmetry bitwise exact.
    rho_pair = sorted((req.r / a, req.r0 / a))
    integrand = core.make_gf(params.h_tilde, params.kappa_D_tilde,
                             rho_pair[0], rho_pair[1])
    res = _require_converged(
        integrate_damped(integrand, tau, cfg), "pair density")
    value = res.value / (2.0 * math.pi * a * a)
    return _clamp_density(value, cfg, "g(r,t|r0)")


def gf_star_from_r0(params, t, r0, cfg=None):
    """Binding probability g(*, t|r0) = 1 - S(t|r0), dimensionless."""
    cfg = cfg or IDENTITY_CONFIG
    a = params.a
    GreensRequest(params, t, r0=r0)
    if t == 0.0:
        return 0.0
    tau = params.D * t / (a * a)
    res = _survival_integral(params.h_tilde, params.kappa_D_tilde, tau,
                             r0 / a, cfg)
    return _clamp_density(res.value, cfg, "g(*,t|r0)")


def gf_from_star(params, t, r, cfg=None):
    """Density g(r, t|*) for an initially bound pair, 1/length^2.

    Detailed balance kappa_d g(*,t|r) = kappa_a g(r,t|*) holds by the
    algebra of the two integrals; kappa_a = 0 has no bound source state.
    """
    if params.kappa_a == 0:
        raise ValueError("gf_from_star requires kappa_a > 0")
    if not (t > 0):
        raise ValueError(
            "t must be positive: the t=0 density is concentrated at *")
    cfg = cfg or IDENTITY_CONFIG
    a = params.a
    GreensRequest(params, t, r=r)
    tau = params.D * t / (a * a)
    res = _survival_integral(params.h_tilde, params.kappa_D_tilde, tau,
                             r / a, cfg)
    value = (params.kappa_d / params.kappa_a) * res.value
    return _clamp_density(value, cfg, "g(r,t|*)")


def unbound_mass(params, t, r0, tail_mass=1e-7, points_per_decade=64,
                 cfg=None):
    """2 pi ∫_a^R g(r, t|r0) r dr on a log-r grid (64 points per decade).

    R is chosen from the free-diffusion Gaussian bound so the neglected
    tail mass is below tail_mass.  Used by the normalization witness
    g(*,t|r0) + S(t|r0) = 1; the r integral itself uses composite Simpson
    on the documented grid, each density value coming from the damped
    quadrature engine with shared panels for the whole sweep.
    """
    from scipy.integrate import simpson

    if not (t > 0):
        raise ValueError("t must be positive")
    cfg = cfg or QuadratureConfig(1e-9, 1e-11, 4096, 10)
    a = params.a
    GreensRequest(params, t, r0=r0)
    tau = params.D * t / (a * a)
    rho0 = r0 / a
    width = math.sqrt(4.0 * params.D * t)
    r_max = r0 + width * math.sqrt(max(math.log(1.0 / tail_mass), 1.0))
    n = max(int(points_per_decade * math.log10(r_max / a)) + 1, 33)
    if n % 2 == 0:
        n += 1
    r = np.geomspace(a, r_max, n)
    rho = r / a

    #One adaptive run anchors the panel set; every rho reuses its nodes.
    anchor = core.make_gf(params.h_tilde, params.kappa_D_tilde, rho0, rho0)

    def damped_anchor(xs):
        return anchor(xs) * np.exp(-tau * xs * xs)

    from .quadrature import _Adaptive
    x_max = math.sqrt(-math.log(0.01 * cfg.abs_tol) / tau) + 5.0 * math.pi
    pts = [0.0]
    s = x_max / 256.0
    while s < x_max:
        pts.append(s)
        s *= 2.0
    pts.append(x_max)
    eng = _Adaptive(damped_anchor, pts, cfg)
    if not eng.run():
        raise AccuracyError("anchor quadrature for the r sweep did not "
                            "converge")
    panels = eng.panels()
    from ._tables import NODES_K15, WEIGHTS_K15
    nodes15 = np.asarray(NODES_K15)
    wk = np.asarray(WEIGHTS_K15)
    xs_all = []
    w_all = []
    for lo, hi in panels:
        half = 0.5 * (hi - lo)
        xs_all.append(0.5 * (lo + hi) + half * nodes15)
        w_all.append(half * wk)
    xs = np.concatenate(xs_all)
    ws = np.concatenate(w_all)

    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    s1, s2 = core.contact_scaled(xs, h_t, kd_t)
    m2 = s1 * s1 + s2 * s2
    j0r0, _, y0r0, _ = core.bessel4(rho0 * xs)
    u0 = j0r0 * s2 - y0r0 * s1
    base = ws * np.exp(-tau * xs * xs) * u0 * xs / m2
    g_vals = np.empty(n)
    for i, rr in enumerate(rho):
        j0r, _, y0r, _ = core.bessel4(rr * xs)
        g_vals[i] = float(np.dot(base, j0r * s2 - y0r * s1))
    g_vals /= 2.0 * math.pi * a * a
    mass = 2.0 * math.pi * float(simpson(g_vals * r, x=r))
    return mass
