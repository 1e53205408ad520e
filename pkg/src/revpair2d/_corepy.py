"""Pure NumPy backend for the hot numerical kernels.

Mirrors the compiled extension ``revpair2d._core`` function for function;
``revpair2d._backend`` picks whichever is importable.  Everything here is
vectorized over 1-D float64 abscissa arrays because the quadrature engines
hand whole panels to the integrands at once.

Conventions shared by both backends (and certified against an
arbitrary-precision oracle when the tables were generated):

* J0/J1/Y0/Y1 use Chebyshev tables from ``_tables`` with a seam at x = 5:
  below it in the variable u = 0.08 x^2 - 1 with the log/pole parts of Y
  peeled off analytically, at and above it through modulus polynomials
  P, Q in u = 50 / x^2 - 1 with a compensated split of the pi/4 phase so
  the argument reduction stays accurate to ~1 ulp up to x = 1e6.
* Kernel algebra is carried in the scaled variables s1 = x*alpha(x),
  s2 = x*beta(x).  They stay finite down to x = 0 (s1 -> 0,
  s2 -> 2*kappa_D/pi), which removes every overflow and cancellation
  hazard of the raw alpha, beta near the origin.
"""

import numpy as np
from numpy.polynomial.chebyshev import chebval

from ._tables import (
    J0_SMALL, J1_SMALL, Y0_SMALL, Y1_SMALL,
    P0_LARGE, Q0_LARGE, P1_LARGE, Q1_LARGE,
    PIO4_HI, PIO4_LO, SQRT_TWO_OVER_PI, TWO_OVER_PI,
)

_J0S = np.asarray(J0_SMALL)
_J1S = np.asarray(J1_SMALL)
_Y0S = np.asarray(Y0_SMALL)
_Y1S = np.asarray(Y1_SMALL)
_P0L = np.asarray(P0_LARGE)
_Q0L = np.asarray(Q0_LARGE)
_P1L = np.asarray(P1_LARGE)
_Q1L = np.asarray(Q1_LARGE)

BACKEND_NAME = "python"


def bessel4(x):
    """J0, J1, Y0, Y1 of a nonnegative float64 array, all at once.

    Y0 and Y1 are -inf at x = 0 by continuity; J0, J1 are exact there.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    j0 = np.empty_like(x)
    j1 = np.empty_like(x)
    y0 = np.empty_like(x)
    y1 = np.empty_like(x)
    small = x < 5.0
    xs = x[small]
    if xs.size:
        u = 0.08 * xs * xs - 1.0
        j0s = chebval(u, _J0S)
        j1s = xs * chebval(u, _J1S)
        lg = np.log(np.where(xs > 0, xs, 1.0))
        y0s = TWO_OVER_PI * lg * j0s + chebval(u, _Y0S)
        y1s = TWO_OVER_PI * (lg * j1s - np.divide(
            1.0, xs, out=np.full_like(xs, np.inf), where=xs > 0)) \
            + xs * chebval(u, _Y1S)
        y0s[xs == 0.0] = -np.inf
        j0[small], j1[small], y0[small], y1[small] = j0s, j1s, y0s, y1s
    big = ~small
    xb = x[big]
    if xb.size:
        p0, q0, p1, q1, cw, sw, env = _asymptotic_parts(xb)
        j0[big] = env * (p0 * cw - q0 * sw)
        y0[big] = env * (p0 * sw + q0 * cw)
        j1[big] = env * (p1 * sw + q1 * cw)
        y1[big] = env * (-p1 * cw + q1 * sw)
    return j0, j1, y0, y1


def _asymptotic_parts(xb):
    #Shared phase reduction: w = x - pi/4 via a hi/lo split of pi/4 so the
    #subtraction is exact (Sterbenz) and the low part enters as a first
    #order rotation of (cos, sin).
    u = 50.0 / (xb * xb) - 1.0
    p0 = chebval(u, _P0L)
    q0 = chebval(u, _Q0L) / xb
    p1 = chebval(u, _P1L)
    q1 = chebval(u, _Q1L) / xb
    s = xb - PIO4_HI
    e = (xb - s) - PIO4_HI
    dlo = e - PIO4_LO
    c0 = np.cos(s)
    s0 = np.sin(s)
    cw = c0 - s0 * dlo
    sw = s0 + c0 * dlo
    env = SQRT_TWO_OVER_PI / np.sqrt(xb)
    return p0, q0, p1, q1, cw, sw, env


def _scaled_y(x):
    """(x*Y1(x), x^2*Y0(x)) without the 1/x pole or log blowup at 0."""
    w1 = np.empty_like(x)
    w0 = np.empty_like(x)
    small = x < 5.0
    xs = x[small]
    if xs.size:
        u = 0.08 * xs * xs - 1.0
        j0s = chebval(u, _J0S)
        j1s = xs * chebval(u, _J1S)
        lg = np.where(xs > 0, np.log(np.where(xs > 0, xs, 1.0)), 0.0)
        #x*Y1 = (2/pi)(x ln x * J1 - 1) + x^2 * C;  -2/pi exactly at 0
        w1[small] = TWO_OVER_PI * (lg * xs * j1s - 1.0) \
            + xs * xs * chebval(u, _Y1S)
        w0[small] = TWO_OVER_PI * xs * xs * lg * j0s \
            + xs * xs * chebval(u, _Y0S)
    big = ~small
    xb = x[big]
    if xb.size:
        p0, q0, p1, q1, cw, sw, env = _asymptotic_parts(xb)
        w1[big] = xb * env * (-p1 * cw + q1 * sw)
        w0[big] = xb * xb * env * (p0 * sw + q0 * cw)
    return w1, w0


def contact_scaled(x, h, kd):
    """s1 = x*alpha, s2 = x*beta for the backreaction kernel.

    alpha = (x^2 - kd) J1 + h x J0 and beta the same with Y;  h, kd are the
    dimensionless intrinsic rates (h = kappa_a / (2 pi D),
    kd = kappa_d a^2 / D).  Finite for every x >= 0.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    j0, j1, _, _ = bessel4(x)
    w1, w0 = _scaled_y(x)
    g = x * x - kd
    s1 = g * x * j1 + h * x * x * j0
    s2 = g * w1 + h * w0
    return s1, s2


def _denom(x, h, kd):
    s1, s2 = contact_scaled(x, h, kd)
    return s1, s2, s1 * s1 + s2 * s2


def make_f_reg(h, kd):
    """f(x) = P(x,1)^2 / x^2 = (2h/pi)^2 / (s1^2 + s2^2); f(0) = (h/kd)^2."""
    c = (2.0 * h / np.pi) ** 2

    def f(x):
        _, _, m2 = _denom(x, h, kd)
        return c / m2

    return f


def make_rate(h, kd):
    """P(x,1)^2 * x, the undamped rate-coefficient integrand."""
    c = (2.0 * h / np.pi) ** 2

    def f(x):
        x = np.ascontiguousarray(x, dtype=np.float64)
        _, _, m2 = _denom(x, h, kd)
        return c * x * x * x / m2

    return f


def make_bound(h, kd):
    """P(x,1)^2 / x, the undamped bound-survival integrand."""
    c = (2.0 * h / np.pi) ** 2

    def f(x):
        x = np.ascontiguousarray(x, dtype=np.float64)
        _, _, m2 = _denom(x, h, kd)
        return c * x / m2

    return f


def make_surv(h, kd, rho0):
    """P(x,1) * T(x,rho0), the undamped survival / detailed-balance integrand.

    rho0 == 1 collapses T through the contact Wronskian reduction
    x*(J0 beta - Y0 alpha) = -(2/pi)(x^2 - kd), avoiding a same-argument
    Bessel product difference.
    """
    c = 2.0 * h / np.pi
    if rho0 == 1.0:
        def f(x):
            x = np.ascontiguousarray(x, dtype=np.float64)
            _, _, m2 = _denom(x, h, kd)
            return -c * TWO_OVER_PI * (x * x - kd) * x / m2
    else:
        def f(x):
            x = np.ascontiguousarray(x, dtype=np.float64)
            s1, s2, m2 = _denom(x, h, kd)
            j0r, _, y0r, _ = bessel4(rho0 * x)
            #s1(0) = 0 and Y0(rho0 x) s1 -> 0, so the x = 0 entry is the
            #finite limit, not inf * 0.
            y0r = np.where(x == 0.0, 0.0, y0r)
            return c * (j0r * s2 - y0r * s1) * x / m2

    return f


def make_gf(h, kd, rho, rho0):
    """T(x,rho) * T(x,rho0) * x, the undamped pair density integrand."""
    def u_of(rr, x, s1, s2):
        if rr == 1.0:
            return -TWO_OVER_PI * (x * x - kd)
        j0r, _, y0r, _ = bessel4(rr * x)
        #Finite limit at x = 0 (s1 vanishes quadratically there).
        y0r = np.where(x == 0.0, 0.0, y0r)
        return j0r * s2 - y0r * s1

    def f(x):
        x = np.ascontiguousarray(x, dtype=np.float64)
        s1, s2, m2 = _denom(x, h, kd)
        return u_of(rho, x, s1, s2) * u_of(rho0, x, s1, s2) * x / m2

    return f


def make_pt(h, kd, rho, rho0):
    """P(x,rho) * T(x,rho0), undamped (identity-suite integrand)."""
    def f(x):
        x = np.ascontiguousarray(x, dtype=np.float64)
        s1, s2, m2 = _denom(x, h, kd)
        if rho == 1.0:
            v = (2.0 * h / np.pi) * x
        else:
            _, j1r, _, y1r = bessel4(rho * x)
            v = j1r * s2 - np.where(x == 0.0, 0.0, y1r) * s1
        if rho0 == 1.0:
            u = -TWO_OVER_PI * (x * x - kd)
        else:
            j0r, _, y0r, _ = bessel4(rho0 * x)
            u = j0r * s2 - np.where(x == 0.0, 0.0, y0r) * s1
        return v * u / m2

    return f


def make_pp_over_x(h, kd, rho0):
    """P(x,1) * P(x,rho0) / x, undamped (bound-state identity integrand)."""
    c = 2.0 * h / np.pi

    def f(x):
        x = np.ascontiguousarray(x, dtype=np.float64)
        s1, s2, m2 = _denom(x, h, kd)
        if rho0 == 1.0:
            v = c * x
        else:
            _, j1r, _, y1r = bessel4(rho0 * x)
            v = j1r * s2 - np.where(x == 0.0, 0.0, y1r) * s1
        return c * v / m2

    return f


def make_pt_split(h, kd, rho, rho0):
    """Two single-frequency components A, B with A + B = P(x,rho)*T(x,rho0).

    B = (J1(rho x) J0(rho0 x) + Y1(rho x) Y0(rho0 x)) / 2 is kernel free and
    oscillates at |rho - rho0|; A carries the kernel weights and oscillates
    at rho + rho0 - 2.  Each diverges like log(x)/x at 0 on its own, so
    callers must pair them with a finite head of the unsplit integrand.
    """
    def parts(x):
        x = np.ascontiguousarray(x, dtype=np.float64)
        s1, s2, m2 = _denom(x, h, kd)
        _, j1r, _, y1r = bessel4(rho * x)
        j0r, _, y0r, _ = bessel4(rho0 * x)
        b = 0.5 * (j1r * j0r + y1r * y0r)
        a = -0.5 * ((j1r * j0r - y1r * y0r) * (s1 * s1 - s2 * s2)
                    + 2.0 * s1 * s2 * (j1r * y0r + y1r * j0r)) / m2
        return a, b

    def part_a(x):
        return parts(x)[0]

    def part_b(x):
        return parts(x)[1]

    return part_a, part_b
