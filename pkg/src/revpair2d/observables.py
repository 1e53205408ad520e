"""Observables of the reversible pair: survival, rate, off-rate, identities.

Everything reduces to weighted integrals of the contact kernels:

    S(t|r0)  = 1 - I[P(xi,1) T(xi,rho0)]          (damping tau = D t/a^2)
    S(t|*)   = 1 - (kd~/h~) I[P(xi,1)^2 / xi]
    k(t)     = 2 pi D I[P(xi,1)^2 xi]
    tau_off  = (kd~/h~)(a^2/D) * finite-part of f(xi)/xi,  f = P(xi,1)^2/xi^2

plus the appendix closure identities, which are undamped oscillatory
integrals.  The rate coefficient is exposed through three independent
routes (spectral form, survival derivative in r0, bound-survival
derivative in t) that must agree; they share no differentiation logic.
"""

import math
import os
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from ._backend import core
from .greens import (AccuracyError, NegativeDensityWarning,
                     _bound_survival_integral, _survival_integral)
from .kernel import PairParams
from .quadrature import (IDENTITY_CONFIG, SWEEP_CONFIG, IntegrandEvaluationError,
                         QuadratureConfig, _adaptive, _geometric_tail,
                         _wrap_callback, finite_part, integrate_damped,
                         integrate_finite, integrate_oscillatory)


class RegularizationError(RuntimeError):
    """The Hadamard-regularized off-rate failed its invariance check."""


class ObservableId(Enum):
    SURVIVAL_R0 = "SURVIVAL_R0"
    SURVIVAL_STAR = "SURVIVAL_STAR"
    RATE_K = "RATE_K"


class RateRoute(Enum):
    SPECTRAL = "SPECTRAL"
    SURVIVAL_DERIV = "SURVIVAL_DERIV"
    BOUND_DERIV = "BOUND_DERIV"


_SERIES_SLACK = 1e-6


@dataclass(frozen=True)
class TimeSeries:
    """An observable sampled on a strictly increasing time grid."""

    observable_id: ObservableId
    params: PairParams
    points: Tuple[Tuple[float, float, float], ...]
    r0: Optional[float] = None

    def __post_init__(self):
        ts = [p[0] for p in self.points]
        if any(t1 <= t0 for t0, t1 in zip(ts[:-1], ts[1:])):
            raise ValueError("time grid must be strictly increasing")
        if self.observable_id in (ObservableId.SURVIVAL_R0,
                                  ObservableId.SURVIVAL_STAR):
            for t, v, _ in self.points:
                if not (-_SERIES_SLACK <= v <= 1.0 + _SERIES_SLACK):
                    raise ValueError(
                        "survival value %r at t=%r outside [0, 1] beyond "
                        "numerical slack" % (v, t))

    @property
    def times(self):
        return np.array([p[0] for p in self.points])

    @property
    def values(self):
        return np.array([p[1] for p in self.points])

    @property
    def errors(self):
        return np.array([p[2] for p in self.points])


@dataclass(frozen=True)
class OffRateReport:
    """Mean bound-state lifetime and the regularization diagnostics."""

    tau: float
    k_off: float
    C_constant: float
    split_points_tested: Tuple[float, ...]
    max_discrepancy: float

    def __post_init__(self):
        if self.k_off != 1.0 / self.tau:
            raise ValueError("k_off must equal 1/tau exactly")


def _parallel_map(fn, items):
    """Map preserving order; REVPAIR2D_THREADS > 1 uses a thread pool."""
    try:
        n = int(os.environ.get("REVPAIR2D_THREADS", "1") or "1")
    except ValueError:
        n = 1
    items = list(items)
    if n > 1 and len(items) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=n) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _clamp_probability(value, abs_tol, what):
    if value < 0.0:
        if value > -abs_tol:
            warnings.warn("%s = %.3e clamped to 0" % (what, value),
                          NegativeDensityWarning, stacklevel=3)
            return 0.0
        raise AccuracyError("%s = %.3e below 0 beyond noise" % (what, value))
    if value > 1.0:
        if value < 1.0 + abs_tol:
            warnings.warn("%s = %.17g clamped to 1" % (what, value),
                          NegativeDensityWarning, stacklevel=3)
            return 1.0
        raise AccuracyError("%s = %.17g above 1 beyond noise" % (what, value))
    return value


def _zero_time_survival_integral(h_t, kd_t, rho0, cfg):
    """The undamped integral of P(xi,1) T(xi,rho0): 0 by closure.

    The contact kernel P(xi,1) carries a phase ~ xi from the encounter
    radius, so the product oscillates at the beat frequency |rho0 - 1|,
    not rho0.  Exactly at the contact the frequency vanishes and the
    integrand is smooth, so it sums over doubling blocks with a
    geometric remainder instead.
    """
    integrand = core.make_surv(h_t, kd_t, rho0)
    if rho0 == 1.0:
        head, err_h, used_h, ok_h, _ = _adaptive(
            _wrap_callback(integrand), [0.0, 2.0, 4.0], cfg._scaled(0.5))
        tail, err_t, used_t, ok_t = _geometric_tail(
            _wrap_callback(integrand), 4.0, 0.5 * cfg.abs_tol, cfg._scaled(0.5))
        from .quadrature import QuadratureResult
        total = head + tail
        err = err_h + err_t
        ok = ok_h and ok_t and err <= max(cfg.abs_tol,
                                          cfg.rel_tol * abs(total))
        return QuadratureResult(total, err, used_h + used_t, ok)
    return integrate_oscillatory(integrand, abs(rho0 - 1.0), -2.0, cfg)


def survival(params, t, r0, cfg=None):
    """S(t|r0): probability the initially unbound pair is unbound at t.

    t = 0 runs the undamped closure integral (which must vanish) through
    the oscillatory engine rather than returning a constant, so the t = 0
    contract is itself a computed quantity.
    """
    if not (t >= 0 and math.isfinite(t)):
        raise ValueError("t must be finite and >= 0")
    a = params.a
    if not (r0 >= a):
        raise ValueError("r0 must be >= a")
    cfg = cfg or IDENTITY_CONFIG
    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    if t == 0.0:
        res = _zero_time_survival_integral(h_t, kd_t, r0 / a, cfg)
        #The undamped integral targets 0, so rel_tol cannot certify it;
        #gate on the identity residual budget instead.
        if res.error_estimate > max(1e-7, cfg.abs_tol):
            raise AccuracyError(
                "zero-time survival integral error %.2e exceeds the "
                "identity budget" % res.error_estimate)
    else:
        res = _survival_integral(h_t, kd_t, params.D * t / (a * a), r0 / a,
                                 cfg)
    return _clamp_probability(1.0 - res.value, cfg.abs_tol, "S(t|r0)")


def survival_bound(params, t, cfg=None):
    """S(t|*): probability the initially bound pair is unbound at t."""
    if params.kappa_a == 0:
        raise ValueError("survival_bound requires kappa_a > 0 (no bound "
                         "state exists at kappa_a = 0)")
    if not (t >= 0 and math.isfinite(t)):
        raise ValueError("t must be finite and >= 0")
    cfg = cfg or IDENTITY_CONFIG
    a = params.a
    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    ratio = kd_t / h_t
    if t == 0.0:
        #Undamped bound-closure integral: equals h~/kd~ exactly, making
        #S(0|*) = 0; computed, not asserted.
        integrand = core.make_bound(h_t, kd_t)
        head, err_h, _, ok_h, _ = _adaptive(
            _wrap_callback(integrand), [0.0, 2.0, 4.0], cfg._scaled(0.5))
        tail, err_t, _, ok_t = _geometric_tail(
            _wrap_callback(integrand), 4.0, 0.5 * cfg.abs_tol,
            cfg._scaled(0.5))
        if not (ok_h and ok_t):
            raise AccuracyError("zero-time bound-survival integral did "
                                "not converge")
        value = 1.0 - ratio * (head + tail)
    else:
        res = _bound_survival_integral(h_t, kd_t, params.D * t / (a * a),
                                       cfg)
        value = 1.0 - ratio * res.value
    return _clamp_probability(value, cfg.abs_tol * max(1.0, ratio),
                              "S(t|*)")


def _rate_spectral(params, t, cfg):
    a = params.a
    res = integrate_damped(
        core.make_rate(params.h_tilde, params.kappa_D_tilde),
        params.D * t / (a * a), cfg)
    if not res.converged:
        raise AccuracyError("rate quadrature did not converge")
    return 2.0 * math.pi * params.D * res.value


_FD_STEP = 1e-5


def _rate_survival_deriv(params, t, cfg):
    #k = 2 pi a D dS/dr0 at r0 = a, centered step a*1e-5.  The survival
    #integral is analytic in rho0 near 1, so the inner sample continues
    #it marginally below the encounter radius.
    a = params.a
    tau = params.D * t / (a * a)
    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    up = _survival_integral(h_t, kd_t, tau, 1.0 + _FD_STEP, cfg)
    dn = _survival_integral(h_t, kd_t, tau, 1.0 - _FD_STEP, cfg)
    #S = 1 - I, dS/drho0 = -dI/drho0; d/dr0 = (1/a) d/drho0.
    return -2.0 * math.pi * params.D * (up.value - dn.value) \
        / (2.0 * _FD_STEP)


def _rate_bound_deriv(params, t, cfg):
    if params.kappa_a == 0:
        return 0.0
    a = params.a
    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    ratio = kd_t / h_t
    dt = t * _FD_STEP
    tau_scale = params.D / (a * a)
    up = _bound_survival_integral(h_t, kd_t, (t + dt) * tau_scale, cfg)
    dn = _bound_survival_integral(h_t, kd_t, (t - dt) * tau_scale, cfg)
    #S* = 1 - ratio*I, dS*/dt by centered difference; k = K_eq dS*/dt.
    return params.K_eq * (-ratio) * (up.value - dn.value) / (2.0 * dt)


_DERIV_CFG = QuadratureConfig(rel_tol=1e-12, abs_tol=1e-14,
                              max_panels=8192, tail_accel_terms=10)


def rate_k(params, t, route=RateRoute.SPECTRAL, cfg=None):
    """Time-dependent rate coefficient k(t), length^2/time.

    Routes: SPECTRAL (direct damped integral), SURVIVAL_DERIV (centered
    difference of S(t|r0) in r0 at the contact, step a*1e-5), BOUND_DERIV
    (K_eq times the centered time derivative of S(t|*), step t*1e-5).
    The derivative routes default to a tighter quadrature tolerance so
    finite-difference cancellation stays below the route-agreement budget.
    """
    if not (t > 0 and math.isfinite(t)):
        raise ValueError("t must be positive and finite")
    route = RateRoute(route)
    if route is RateRoute.SPECTRAL:
        value = _rate_spectral(params, t, cfg or IDENTITY_CONFIG)
    elif route is RateRoute.SURVIVAL_DERIV:
        value = _rate_survival_deriv(params, t, cfg or _DERIV_CFG)
    else:
        value = _rate_bound_deriv(params, t, cfg or _DERIV_CFG)
    if value < 0.0:
        noise = 1e-10 * max(params.kappa_a, params.D)
        if value > -noise:
            return 0.0
        raise AccuracyError("k(t) = %.3e negative beyond noise" % value)
    return value


def k_time_integral(params, horizon, tail_frac=1e-3, cfg=None):
    """∫₀^∞ k(t) dt, which the theory equates to K_eq = kappa_a/kappa_d.

    Integrates k(t) over [0, horizon] honestly (adaptive quadrature in
    ln t over the resolved window, plus a k(0+)-sized stub for the
    unresolved initial sliver) and closes with the analytic remainder
    K_eq (1 - S(horizon|*)).  The identity linking the time integral to
    the bound-survival defect is NOT used inside the window; it only
    supplies the tail, so comparing the result against K_eq remains a
    genuine two-route consistency check.
    """
    if params.kappa_a == 0:
        return 0.0
    if not (horizon > 0 and math.isfinite(horizon)):
        raise ValueError("horizon must be positive and finite")
    a = params.a
    tau_h = params.D * horizon / (a * a)
    s_h = survival_bound(params, horizon)
    if (1.0 - s_h) > tail_frac:
        raise ValueError(
            "horizon too small: 1 - S(horizon|*) = %.3e exceeds the "
            "tail budget %.1e; increase the horizon" % (1.0 - s_h,
                                                        tail_frac))
    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    rate_integrand = core.make_rate(h_t, kd_t)
    inner_cfg = QuadratureConfig(1e-10, 1e-12 * max(1.0, h_t), 4096, 10)

    def k_dimless(tau):
        res = integrate_damped(rate_integrand, tau, inner_cfg)
        if not res.converged:
            raise AccuracyError("k(t) quadrature failed at tau=%g" % tau)
        return res.value

    tau_min = 1e-9
    def in_log(vs):
        return np.array([k_dimless(math.exp(v)) * math.exp(v) for v in vs])

    outer_cfg = cfg or QuadratureConfig(1e-7, 1e-7 * h_t / kd_t, 4096, 10)
    res = integrate_finite(in_log, math.log(tau_min), math.log(tau_h),
                           outer_cfg)
    if not res.converged:
        raise AccuracyError("time integral of k(t) did not converge "
                            "(error %.2e)" % res.error_estimate)
    stub = k_dimless(tau_min) * tau_min
    main = 2.0 * math.pi * a * a * (res.value + stub)
    tail = params.K_eq * (1.0 - s_h)
    return main + tail


def mean_lifetime(params, split_points=None, cfg=None):
    """Mean bound-state lifetime tau via the regularized frequency integral.

    tau = 2 pi (kappa_d/kappa_a)(a^4/D) ⨍₀^∞ f(xi)/xi dxi with
    f(xi) = P(xi,1)^2/xi^2 and f(0) = h~^2/kd~^2.  The finite part is
    evaluated at every requested split point (default [1.0]); the spread
    must stay below 1e-6 relative or a RegularizationError is raised,
    since split-point dependence would mean the regularization leaked.
    The off-rate constant C is recovered from tau, never hardcoded.
    """
    if params.kappa_a == 0:
        raise ValueError("mean_lifetime requires kappa_a > 0")
    pts = tuple(split_points) if split_points else (1.0,)
    if any(not (c > 0 and math.isfinite(c)) for c in pts):
        raise ValueError("split points must be positive and finite")
    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    f = core.make_f_reg(h_t, kd_t)
    f0 = (h_t / kd_t) ** 2
    cfg = cfg or QuadratureConfig(1e-10, max(1e-13, 1e-10 * f0), 8192, 10)
    prefactor = (kd_t / h_t) * params.a * params.a / params.D
    taus = []
    for c in pts:
        res = finite_part(f, f0, c, cfg)
        if not res.converged:
            raise RegularizationError(
                "finite part did not converge at split point %g "
                "(error %.2e)" % (c, res.error_estimate))
        taus.append(prefactor * res.value)
    tau = float(np.mean(taus))
    spread = (max(taus) - min(taus)) / abs(tau)
    if spread >= 1e-6:
        raise RegularizationError(
            "regularized lifetime depends on the split point: relative "
            "spread %.3e across %r" % (spread, list(pts)))
    c_constant = (tau - 1.0 / params.kappa_d) * 2.0 * math.pi * params.D \
        / params.K_eq
    return OffRateReport(tau=tau, k_off=1.0 / tau, C_constant=c_constant,
                         split_points_tested=pts, max_discrepancy=spread)


def off_rate_literature_context(params, b, delta):
    """Conventional contact-pair off-rate 1/(1/kappa_d + K_eq(ln(b/a)+delta)/(2 pi D)).

    Comparison helper only: this family depends on the auxiliary outer
    radius b and offset delta, whereas the exact off-rate (mean_lifetime)
    does not.  It reproduces the exact value only where ln(b/a) + delta
    happens to equal the regularization constant C.
    """
    if not (b > params.a):
        raise ValueError("b must exceed the encounter radius a")
    denom = 1.0 / params.kappa_d \
        + params.K_eq * (math.log(b / params.a) + delta) \
        / (2.0 * math.pi * params.D)
    return 1.0 / denom


@dataclass(frozen=True)
class IdentityResult:
    """One closure-identity evaluation: value vs analytic target."""

    name: str
    arguments: Dict[str, float]
    value: float
    target: float
    residual: float
    error_estimate: float
    converged: bool


@dataclass(frozen=True)
class IdentitySuiteReport:
    results: Tuple[IdentityResult, ...]
    passed: bool
    max_residual: float


def _scaled_residual(value, target):
    #Scaled by target magnitude where the target is nonzero; absolute
    #otherwise.
    if target != 0.0:
        return abs(value - target) / abs(target)
    return abs(value)


def _step_identity_value(h_t, kd_t, rho, rho0, cfg):
    """∫₀^∞ P(xi,rho) T(xi,rho0) dxi by two-frequency splitting.

    The product oscillates at both |rho - rho0| and rho + rho0 - 2 (the
    kernel contributes a unit-radius phase).  Away from the origin it
    splits exactly into two single-frequency parts; each diverges like
    log(xi)/xi at 0, so a finite adaptive head of the unsplit integrand
    covers [0, s] and the split parts integrate the tails from s.
    """
    if rho == 1.0 or rho0 == 1.0:
        #Contact on either side leaves a single beat frequency
        #|other - 1|; the contact factor is non-oscillatory, and when it
        #is the P side the envelope decays a power faster.
        other = rho0 if rho == 1.0 else rho
        decay = -2.0 if rho == 1.0 else -1.0
        return integrate_oscillatory(core.make_pt(h_t, kd_t, rho, rho0),
                                     abs(other - 1.0), decay, cfg)
    freq_b = abs(rho - rho0)
    freq_a = rho + rho0 - 2.0
    if freq_b < 1e-9:
        raise ValueError("step identity is undefined at rho == rho0")
    part_a, part_b = core.make_pt_split(h_t, kd_t, rho, rho0)
    s = 3.0 * math.pi / min(freq_a, freq_b) + 1.0
    head, err_h, used_h, ok_h, _ = _adaptive(
        _wrap_callback(core.make_pt(h_t, kd_t, rho, rho0)),
        [0.0, 0.5 * s, s], cfg._scaled(0.25))
    res_a = integrate_oscillatory(part_a, freq_a, -1.0, cfg._scaled(0.25),
                                  start=s)
    res_b = integrate_oscillatory(part_b, freq_b, -1.0, cfg._scaled(0.25),
                                  start=s)
    from .quadrature import QuadratureResult
    value = head + res_a.value + res_b.value
    err = err_h + res_a.error_estimate + res_b.error_estimate
    ok = ok_h and res_a.converged and res_b.converged
    return QuadratureResult(value, err, used_h + res_a.panels_used
                            + res_b.panels_used, ok)


def _equilibrium_weight_value(h_t, kd_t, rho0, cfg):
    """∫₀^∞ P(xi,1) P(xi,rho0) dxi/xi; target h~/(kd~ rho0).

    Oscillates at the beat frequency |rho0 - 1| (see the zero-time
    survival note); smooth and non-oscillatory at the contact.
    """
    integrand = core.make_pp_over_x(h_t, kd_t, rho0)
    if rho0 == 1.0:
        head, err_h, used_h, ok_h, _ = _adaptive(
            _wrap_callback(integrand), [0.0, 2.0, 4.0], cfg._scaled(0.5))
        tail, err_t, used_t, ok_t = _geometric_tail(
            _wrap_callback(integrand), 4.0, 0.5 * cfg.abs_tol,
            cfg._scaled(0.5))
        from .quadrature import QuadratureResult
        val = head + tail
        err = err_h + err_t
        ok = ok_h and ok_t
        return QuadratureResult(val, err, used_h + used_t, ok)
    return integrate_oscillatory(integrand, abs(rho0 - 1.0), -3.0, cfg)


def identity_suite(params, r_grid, cfg=None):
    """Evaluate the kernel closure identities on a grid of separations.

    Checks, in dimensionless form: the zero-time survival integral
    (must vanish), the completeness step function (0 inside, 1/rho
    outside, the diagonal excluded), and the equilibrium-weight integral
    h~/(kd~ rho0) including its contact case.  Individual failures are
    collected in the report, never raised.
    """
    cfg = cfg or IDENTITY_CONFIG
    a = params.a
    rhos = [r / a for r in r_grid]
    if any(rho < 1.0 for rho in rhos):
        raise ValueError("all r_grid entries must be >= a")
    if len(set(rhos)) != len(rhos):
        raise ValueError("r_grid entries must be distinct")
    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    results = []

    def record(name, args, fn, target):
        try:
            res = fn()
            value, err, ok = res.value, res.error_estimate, res.converged
        except (AccuracyError, IntegrandEvaluationError) as exc:
            value, err, ok = float("nan"), float("inf"), False
            warnings.warn("identity %s at %r failed: %s" % (name, args,
                                                            exc))
        residual = _scaled_residual(value, target) if math.isfinite(value) \
            else float("inf")
        results.append(IdentityResult(
            name=name, arguments=args, value=value, target=target,
            residual=residual, error_estimate=err, converged=ok))

    for rho0 in rhos:
        record("zero_time_survival", {"r0/a": rho0},
               lambda rr=rho0: _zero_time_survival_integral(
                   h_t, kd_t, rr, cfg),
               0.0)
    for rho in rhos:
        for rho0 in rhos:
            if rho == rho0:
                continue
            target = 0.0 if rho < rho0 else 1.0 / rho
            record("completeness_step", {"r/a": rho, "r0/a": rho0},
                   lambda r1=rho, r2=rho0: _step_identity_value(
                       h_t, kd_t, r1, r2, cfg),
                   target)
    for rho0 in rhos:
        record("equilibrium_weight", {"r0/a": rho0},
               lambda rr=rho0: _equilibrium_weight_value(h_t, kd_t, rr,
                                                         cfg),
               h_t / (kd_t * rho0))
    record("equilibrium_weight_contact", {"r0/a": 1.0},
           lambda: _equilibrium_weight_value(h_t, kd_t, 1.0, cfg),
           h_t / kd_t)

    finite_res = [r for r in results if math.isfinite(r.residual)]
    max_residual = max((r.residual for r in finite_res), default=0.0) \
        if len(finite_res) == len(results) else float("inf")
    #The pass criterion is the residual budget; the per-item converged
    #flag stays in the report as a diagnostic.
    passed = bool(len(finite_res) == len(results)
                  and all(r.residual < 1e-7 for r in results))
    return IdentitySuiteReport(results=tuple(results), passed=passed,
                               max_residual=max_residual)


def _survival_contact_sweep(params, taus, cfg=None):
    """S(tau|a) on a whole dimensionless time grid with shared abscissae.

    One adaptive run at the smallest positive tau fixes the panel set
    (the contact integrand is smooth and non-oscillatory, and larger
    damping only shrinks it); every grid point is then a weighted sum
    over the same nodes, with a per-point embedded-rule error column.
    tau = 0 entries take the analytic S(0|a) = 1.
    """
    cfg = cfg or SWEEP_CONFIG
    taus = np.asarray(taus, dtype=np.float64)
    out = np.ones_like(taus)
    errs = np.zeros_like(taus)
    pos = taus > 0
    if not np.any(pos):
        return out, errs
    tau_min = float(taus[pos].min())
    h_t, kd_t = params.h_tilde, params.kappa_D_tilde
    integrand = core.make_surv(h_t, kd_t, 1.0)

    def damped(xs):
        return integrand(xs) * np.exp(-tau_min * xs * xs)

    from .quadrature import _Adaptive
    x_max = math.sqrt(-math.log(0.01 * cfg.abs_tol) / tau_min) \
        + 5.0 * math.pi
    pts = [0.0]
    s = x_max / 256.0
    while s < x_max:
        pts.append(s)
        s *= 2.0
    pts.append(x_max)
    eng = _Adaptive(damped, pts, cfg)
    if not eng.run():
        raise AccuracyError("contact survival sweep anchor did not "
                            "converge")
    panels = eng.panels()
    from ._tables import NODES_K15, WEIGHTS_G7, WEIGHTS_K15
    nodes15 = np.asarray(NODES_K15)
    wk = np.asarray(WEIGHTS_K15)
    wg = np.asarray(WEIGHTS_G7)
    n_p = len(panels)
    xs = np.empty((n_p, 15))
    half = np.empty(n_p)
    for i, (lo, hi) in enumerate(panels):
        half[i] = 0.5 * (hi - lo)
        xs[i] = 0.5 * (lo + hi) + half[i] * nodes15
    flat = xs.ravel()
    fx = integrand(flat).reshape(n_p, 15)
    #E[j, i, :]: damping factors per grid point j and panel i.
    tpos = taus[pos]
    expo = np.exp(-np.einsum("j,pi->jpi", tpos, xs * xs))
    k_contrib = np.einsum("jpi,pi,p->jp", expo, fx * wk, half)
    g_contrib = np.einsum("jpi,pi,p->jp", expo, fx * wg, half)
    vals = k_contrib.sum(axis=1)
    errcol = np.abs(k_contrib - g_contrib).sum(axis=1)
    out[pos] = 1.0 - vals
    errs[pos] = errcol
    return out, errs


def convolution_residual(params, t, n_grid=2048, cfg=None):
    """|S(t|*) - kappa_d ∫₀^t e^{-kappa_d t'} S(t-t'|a) dt'|.

    The right side runs on a fixed n_grid-point trapezoid (2048 by
    default, for determinism) with the t' = t endpoint taking the
    analytic S(0|a) = 1.  Returns (lhs, rhs, |difference|).
    """
    if not (t > 0 and math.isfinite(t)):
        raise ValueError("t must be positive and finite")
    lhs = survival_bound(params, t, cfg)
    tp = np.linspace(0.0, t, n_grid)
    tau_scale = params.D / (params.a * params.a)
    taus = (t - tp) * tau_scale
    taus[-1] = 0.0
    svals, _ = _survival_contact_sweep(params, taus, cfg)
    w = np.exp(-params.kappa_d * tp) * svals
    rhs = params.kappa_d * float(np.trapezoid(w, tp))
    return lhs, rhs, abs(lhs - rhs)


def _series(params, obs_id, t_values, fn, r0=None):
    ts = [float(t) for t in t_values]

    def named(t):
        try:
            return fn(t)
        except AccuracyError as exc:
            raise AccuracyError("at t = %.17g: %s" % (t, exc)) from None

    vals = _parallel_map(named, ts)
    points = tuple((t, v, e) for t, (v, e) in zip(ts, vals))
    return TimeSeries(observable_id=obs_id, params=params, points=points,
                      r0=r0)


def survival_series(params, t_values, r0, cfg=None):
    """S(t|r0) swept over a time grid; returns a TimeSeries."""
    cfg = cfg or SWEEP_CONFIG

    def one(t):
        if t == 0.0:
            return 1.0, 0.0
        res = _survival_integral(params.h_tilde, params.kappa_D_tilde,
                                 params.D * t / params.a ** 2,
                                 r0 / params.a, cfg)
        return (_clamp_probability(1.0 - res.value, cfg.abs_tol,
                                   "S(t|r0)"), res.error_estimate)

    return _series(params, ObservableId.SURVIVAL_R0, t_values, one, r0=r0)


def survival_bound_series(params, t_values, cfg=None):
    """S(t|*) swept over a time grid; returns a TimeSeries."""
    cfg = cfg or SWEEP_CONFIG
    ratio = params.kappa_D_tilde / params.h_tilde

    def one(t):
        if t == 0.0:
            return 0.0, 0.0
        res = _bound_survival_integral(params.h_tilde,
                                       params.kappa_D_tilde,
                                       params.D * t / params.a ** 2, cfg)
        return (_clamp_probability(1.0 - ratio * res.value,
                                   cfg.abs_tol * max(1.0, ratio),
                                   "S(t|*)"),
                ratio * res.error_estimate)

    return _series(params, ObservableId.SURVIVAL_STAR, t_values, one)


def rate_series(params, t_values, route=RateRoute.SPECTRAL, cfg=None):
    """k(t) swept over a time grid; returns a TimeSeries."""
    route = RateRoute(route)

    def one(t):
        value = rate_k(params, t, route, cfg)
        if route is RateRoute.SPECTRAL:
            res = integrate_damped(
                core.make_rate(params.h_tilde, params.kappa_D_tilde),
                params.D * t / params.a ** 2, cfg or IDENTITY_CONFIG)
            err = 2.0 * math.pi * params.D * res.error_estimate
        else:
            err = abs(value) * 1e-5
        return value, err

    return _series(params, ObservableId.RATE_K, t_values, one)
