# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled backend for the hot numerical kernels.

Same contract as ``revpair2d._corepy`` (see its module docstring for the
shared numerical conventions); here every integrand is a single fused loop
per abscissa with no intermediate arrays.  Uses only typed memoryviews, so
no NumPy C headers are required to build.
"""

import numpy as np

from ._tables import (
    J0_SMALL, J1_SMALL, Y0_SMALL, Y1_SMALL,
    P0_LARGE, Q0_LARGE, P1_LARGE, Q1_LARGE,
    PIO4_HI, PIO4_LO, SQRT_TWO_OVER_PI, TWO_OVER_PI,
)

from libc.math cimport sin, cos, log, sqrt, INFINITY

BACKEND_NAME = "c"

cdef double PIO4_HI_C = PIO4_HI
cdef double PIO4_LO_C = PIO4_LO
cdef double SQ2OPI = SQRT_TWO_OVER_PI
cdef double TOPI = TWO_OVER_PI

cdef double[::1] _J0S = np.asarray(J0_SMALL)
cdef double[::1] _J1S = np.asarray(J1_SMALL)
cdef double[::1] _Y0S = np.asarray(Y0_SMALL)
cdef double[::1] _Y1S = np.asarray(Y1_SMALL)
cdef double[::1] _P0L = np.asarray(P0_LARGE)
cdef double[::1] _Q0L = np.asarray(Q0_LARGE)
cdef double[::1] _P1L = np.asarray(P1_LARGE)
cdef double[::1] _Q1L = np.asarray(Q1_LARGE)


cdef inline double _cheb(double[::1] c, double u) noexcept nogil:
    #Clenshaw in the same operation order as numpy.polynomial.chebyshev.
    cdef Py_ssize_t n = c.shape[0]
    cdef double c0 = c[n - 2]
    cdef double c1 = c[n - 1]
    cdef double u2 = 2.0 * u
    cdef double tmp
    cdef Py_ssize_t i
    for i in range(3, n + 1):
        tmp = c0
        c0 = c[n - i] - c1
        c1 = tmp + c1 * u2
    return c0 + c1 * u


cdef struct Bess4:
    double j0
    double j1
    double y0
    double y1
    double w1      # x * Y1
    double w0      # x^2 * Y0


cdef inline Bess4 _bessel_all(double x) noexcept nogil:
    cdef Bess4 r
    cdef double u, lg, p0, q0, p1, q1, s, e, dlo, c0, s0, cw, sw, env
    if x < 5.0:
        u = 0.08 * x * x - 1.0
        r.j0 = _cheb(_J0S, u)
        r.j1 = x * _cheb(_J1S, u)
        if x > 0.0:
            lg = log(x)
            r.y0 = TOPI * lg * r.j0 + _cheb(_Y0S, u)
            r.y1 = TOPI * (lg * r.j1 - 1.0 / x) + x * _cheb(_Y1S, u)
            r.w1 = TOPI * (lg * x * r.j1 - 1.0) + x * x * _cheb(_Y1S, u)
            r.w0 = TOPI * x * x * lg * r.j0 + x * x * _cheb(_Y0S, u)
        else:
            r.y0 = -INFINITY
            r.y1 = -INFINITY
            r.w1 = -TOPI
            r.w0 = 0.0
    else:
        u = 50.0 / (x * x) - 1.0
        p0 = _cheb(_P0L, u)
        q0 = _cheb(_Q0L, u) / x
        p1 = _cheb(_P1L, u)
        q1 = _cheb(_Q1L, u) / x
        s = x - PIO4_HI_C
        e = (x - s) - PIO4_HI_C
        dlo = e - PIO4_LO_C
        c0 = cos(s)
        s0 = sin(s)
        cw = c0 - s0 * dlo
        sw = s0 + c0 * dlo
        env = SQ2OPI / sqrt(x)
        r.j0 = env * (p0 * cw - q0 * sw)
        r.y0 = env * (p0 * sw + q0 * cw)
        r.j1 = env * (p1 * sw + q1 * cw)
        r.y1 = env * (-p1 * cw + q1 * sw)
        r.w1 = x * r.y1
        r.w0 = x * x * r.y0
    return r


cdef struct Scaled:
    double s1
    double s2
    double m2


cdef inline double _y_lim(double y, double x) noexcept nogil:
    #Y(rho * 0) is -inf but always multiplies s1(0) = 0 whose product
    #limit vanishes; substitute the limit instead of producing inf * 0.
    return 0.0 if x == 0.0 else y


cdef inline Scaled _contact(double x, double h, double kd) noexcept nogil:
    cdef Bess4 b = _bessel_all(x)
    cdef Scaled r
    cdef double g = x * x - kd
    r.s1 = g * x * b.j1 + h * x * x * b.j0
    r.s2 = g * b.w1 + h * b.w0
    r.m2 = r.s1 * r.s1 + r.s2 * r.s2
    return r


def bessel4(object xarr):
    """J0, J1, Y0, Y1 of a nonnegative float64 array, all at once."""
    cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    j0a = np.empty(n)
    j1a = np.empty(n)
    y0a = np.empty(n)
    y1a = np.empty(n)
    cdef double[::1] j0 = j0a
    cdef double[::1] j1 = j1a
    cdef double[::1] y0 = y0a
    cdef double[::1] y1 = y1a
    cdef Py_ssize_t i
    cdef Bess4 b
    with nogil:
        for i in range(n):
            b = _bessel_all(x[i])
            j0[i] = b.j0
            j1[i] = b.j1
            y0[i] = b.y0
            y1[i] = b.y1
    return j0a, j1a, y0a, y1a


def contact_scaled(object xarr, double h, double kd):
    """s1 = x*alpha, s2 = x*beta of the backreaction kernel (finite at 0)."""
    cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    s1a = np.empty(n)
    s2a = np.empty(n)
    cdef double[::1] s1 = s1a
    cdef double[::1] s2 = s2a
    cdef Py_ssize_t i
    cdef Scaled sc
    with nogil:
        for i in range(n):
            sc = _contact(x[i], h, kd)
            s1[i] = sc.s1
            s2[i] = sc.s2
    return s1a, s2a


def make_f_reg(double h, double kd):
    """f(x) = P(x,1)^2 / x^2 = (2h/pi)^2 / (s1^2 + s2^2); f(0) = (h/kd)^2."""
    cdef double c = (2.0 * h / np.pi) ** 2

    def f(object xarr):
        cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
        cdef Py_ssize_t n = x.shape[0]
        outa = np.empty(n)
        cdef double[::1] out = outa
        cdef Py_ssize_t i
        cdef Scaled sc
        with nogil:
            for i in range(n):
                sc = _contact(x[i], h, kd)
                out[i] = c / sc.m2
        return outa

    return f


def make_rate(double h, double kd):
    """P(x,1)^2 * x, the undamped rate-coefficient integrand."""
    cdef double c = (2.0 * h / np.pi) ** 2

    def f(object xarr):
        cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
        cdef Py_ssize_t n = x.shape[0]
        outa = np.empty(n)
        cdef double[::1] out = outa
        cdef Py_ssize_t i
        cdef Scaled sc
        with nogil:
            for i in range(n):
                sc = _contact(x[i], h, kd)
                out[i] = c * x[i] * x[i] * x[i] / sc.m2
        return outa

    return f


def make_bound(double h, double kd):
    """P(x,1)^2 / x, the undamped bound-survival integrand."""
    cdef double c = (2.0 * h / np.pi) ** 2

    def f(object xarr):
        cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
        cdef Py_ssize_t n = x.shape[0]
        outa = np.empty(n)
        cdef double[::1] out = outa
        cdef Py_ssize_t i
        cdef Scaled sc
        with nogil:
            for i in range(n):
                sc = _contact(x[i], h, kd)
                out[i] = c * x[i] / sc.m2
        return outa

    return f


def make_surv(double h, double kd, double rho0):
    """P(x,1) * T(x,rho0) undamped; contact reduction when rho0 == 1."""
    cdef double c = 2.0 * h / np.pi
    cdef bint at_contact = rho0 == 1.0

    def f(object xarr):
        cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
        cdef Py_ssize_t n = x.shape[0]
        outa = np.empty(n)
        cdef double[::1] out = outa
        cdef Py_ssize_t i
        cdef Scaled sc
        cdef Bess4 br
        cdef double xi
        with nogil:
            for i in range(n):
                xi = x[i]
                sc = _contact(xi, h, kd)
                if at_contact:
                    out[i] = -c * TOPI * (xi * xi - kd) * xi / sc.m2
                else:
                    br = _bessel_all(rho0 * xi)
                    out[i] = c * (br.j0 * sc.s2 - _y_lim(br.y0, xi) * sc.s1) * xi / sc.m2
        return outa

    return f


def make_gf(double h, double kd, double rho, double rho0):
    """T(x,rho) * T(x,rho0) * x, the undamped pair density integrand."""
    cdef bint c_r = rho == 1.0
    cdef bint c_r0 = rho0 == 1.0

    def f(object xarr):
        cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
        cdef Py_ssize_t n = x.shape[0]
        outa = np.empty(n)
        cdef double[::1] out = outa
        cdef Py_ssize_t i
        cdef Scaled sc
        cdef Bess4 br
        cdef double xi, u, u0
        with nogil:
            for i in range(n):
                xi = x[i]
                sc = _contact(xi, h, kd)
                if c_r:
                    u = -TOPI * (xi * xi - kd)
                else:
                    br = _bessel_all(rho * xi)
                    u = br.j0 * sc.s2 - _y_lim(br.y0, xi) * sc.s1
                if c_r0:
                    u0 = -TOPI * (xi * xi - kd)
                else:
                    br = _bessel_all(rho0 * xi)
                    u0 = br.j0 * sc.s2 - _y_lim(br.y0, xi) * sc.s1
                out[i] = u * u0 * xi / sc.m2
        return outa

    return f


def make_pt(double h, double kd, double rho, double rho0):
    """P(x,rho) * T(x,rho0), undamped (identity-suite integrand)."""
    cdef bint c_r = rho == 1.0
    cdef bint c_r0 = rho0 == 1.0
    cdef double cv = 2.0 * h / np.pi

    def f(object xarr):
        cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
        cdef Py_ssize_t n = x.shape[0]
        outa = np.empty(n)
        cdef double[::1] out = outa
        cdef Py_ssize_t i
        cdef Scaled sc
        cdef Bess4 br
        cdef double xi, v, u
        with nogil:
            for i in range(n):
                xi = x[i]
                sc = _contact(xi, h, kd)
                if c_r:
                    v = cv * xi
                else:
                    br = _bessel_all(rho * xi)
                    v = br.j1 * sc.s2 - _y_lim(br.y1, xi) * sc.s1
                if c_r0:
                    u = -TOPI * (xi * xi - kd)
                else:
                    br = _bessel_all(rho0 * xi)
                    u = br.j0 * sc.s2 - _y_lim(br.y0, xi) * sc.s1
                out[i] = v * u / sc.m2
        return outa

    return f


def make_pp_over_x(double h, double kd, double rho0):
    """P(x,1) * P(x,rho0) / x, undamped (bound-state identity integrand)."""
    cdef bint c_r0 = rho0 == 1.0
    cdef double c = 2.0 * h / np.pi

    def f(object xarr):
        cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
        cdef Py_ssize_t n = x.shape[0]
        outa = np.empty(n)
        cdef double[::1] out = outa
        cdef Py_ssize_t i
        cdef Scaled sc
        cdef Bess4 br
        cdef double xi, v
        with nogil:
            for i in range(n):
                xi = x[i]
                sc = _contact(xi, h, kd)
                if c_r0:
                    v = c * xi
                else:
                    br = _bessel_all(rho0 * xi)
                    v = br.j1 * sc.s2 - _y_lim(br.y1, xi) * sc.s1
                out[i] = c * v / sc.m2
        return outa

    return f


def make_pt_split(double h, double kd, double rho, double rho0):
    """Single-frequency components A, B with A + B = P(x,rho) * T(x,rho0).

    See the pure backend docstring: both diverge at 0 individually and are
    only used on oscillatory tails away from the origin.
    """
    def _fill(object xarr, bint want_a):
        cdef double[::1] x = np.ascontiguousarray(xarr, dtype=np.float64)
        cdef Py_ssize_t n = x.shape[0]
        outa = np.empty(n)
        cdef double[::1] out = outa
        cdef Py_ssize_t i
        cdef Scaled sc
        cdef Bess4 b1, b0
        cdef double xi
        with nogil:
            for i in range(n):
                xi = x[i]
                b1 = _bessel_all(rho * xi)
                b0 = _bessel_all(rho0 * xi)
                if want_a:
                    sc = _contact(xi, h, kd)
                    out[i] = -0.5 * (
                        (b1.j1 * b0.j0 - b1.y1 * b0.y0)
                        * (sc.s1 * sc.s1 - sc.s2 * sc.s2)
                        + 2.0 * sc.s1 * sc.s2
                        * (b1.j1 * b0.y0 + b1.y1 * b0.j0)) / sc.m2
                else:
                    out[i] = 0.5 * (b1.j1 * b0.j0 + b1.y1 * b0.y0)
        return outa

    def part_a(object xarr):
        return _fill(xarr, True)

    def part_b(object xarr):
        return _fill(xarr, False)

    return part_a, part_b
