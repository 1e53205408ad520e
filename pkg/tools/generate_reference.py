#!/usr/bin/env python3
"""Generate golden reference values for the test suite with mpmath.

Everything here is computed directly from the defining integrals with
arbitrary-precision Bessel functions, completely independently of the
package's own tables, kernels, and quadrature engines. The output is
written to tests/_golden.py.

The script also certifies, before the main build is trusted at all:
  * the contact reductions  P(xi,1)*M = 2*h/pi  and
    T(xi,1)*M = -(2/(pi*xi))*(xi^2 - kD),
  * the oscillatory identities (P*T integrals) by direct quadosc evaluation,
  * that the regularized off-rate integral reproduces C(1) ~ 0.11593.

Run:  python3 tools/generate_reference.py   (takes a few minutes)
"""

import os
import sys

from mpmath import mp, mpf

OUT_PATH = os.path.join(os.path.dirname(__file__), os.pardir,
                        "tests", "_golden.py")


def kernel_funcs(h_t, kD_t):
    """Return mpmath callables alpha~, beta~, M, T~, P~ for given h~, kD~."""
    def alpha(xi):
        return (xi * xi - kD_t) * mp.besselj(1, xi) + h_t * xi * mp.besselj(0, xi)

    def beta(xi):
        return (xi * xi - kD_t) * mp.bessely(1, xi) + h_t * xi * mp.bessely(0, xi)

    def mod(xi):
        a, b = alpha(xi), beta(xi)
        return mp.sqrt(a * a + b * b)

    def T(xi, rho):
        a, b = alpha(xi), beta(xi)
        return (mp.besselj(0, rho * xi) * b - mp.bessely(0, rho * xi) * a) \
            / mp.sqrt(a * a + b * b)

    def P(xi, rho):
        a, b = alpha(xi), beta(xi)
        return (mp.besselj(1, rho * xi) * b - mp.bessely(1, rho * xi) * a) \
            / mp.sqrt(a * a + b * b)

    return alpha, beta, mod, T, P


def f_reg(h_t, kD_t):
    """The dimensionless off-rate integrand f(xi) = P(xi,1)^2 / xi^2."""
    _, _, mod, _, _ = kernel_funcs(h_t, kD_t)

    def f(xi):
        m = mod(xi)
        return (2 * h_t / mp.pi) ** 2 / (xi * xi * m * m)

    return f


def finite_part_f(h_t, kD_t, c=mpf(1)):
    """Hadamard finite part of f(xi)/xi with split point c."""
    f = f_reg(h_t, kD_t)
    f0 = (h_t / kD_t) ** 2
    tail = mp.quad(lambda x: f(x) / x,
                   [c, 2, 4, 8, 16, 32, 64, 128, mp.inf] if c <= 2
                   else [c, 2 * c, 4 * c, 8 * c, mp.inf])
    # substitute xi = exp(v) on (0, c]: integrand (f - f0) dv.
    # |f - f0| <= K e^{2v} |v|, so cutting at v = -80 leaves a stub far below
    # working precision; an infinite lower endpoint makes mp.quad sample
    # absurdly negative v where bessely returns garbage.
    head = mp.quad(lambda v: f(mp.e ** v) - f0,
                   [mpf(-80), mpf(-40), mpf(-15), mpf(-5), mp.log(c)])
    return tail + head + f0 * mp.log(c)


def certify_contact_reductions():
    h_t, kD_t = mpf("0.7"), mpf("1.9")
    alpha, beta, mod, T, P = kernel_funcs(h_t, kD_t)
    for xi in (mpf("0.013"), mpf("0.9"), mpf("3.7"), mpf("24.5")):
        m = mod(xi)
        lhs_p = P(xi, 1) * m
        if abs(lhs_p - 2 * h_t / mp.pi) > mpf("1e-35"):
            raise SystemExit("contact reduction for P failed")
        lhs_t = T(xi, 1) * m
        rhs_t = -(2 / (mp.pi * xi)) * (xi * xi - kD_t)
        if abs(lhs_t - rhs_t) > mpf("1e-33"):
            raise SystemExit("contact reduction for T failed")
    print("contact reductions certified")


def main():
    mp.dps = 40
    certify_contact_reductions()

    g = {}

    # --- kernel golden values: h~=0.5, kD~=2, xi=1.3, rho=2 ---------------
    _, _, _, T, P = kernel_funcs(mpf("0.5"), mpf(2))
    g["KERNEL_T_TILDE"] = float(T(mpf("1.3"), mpf(2)))
    g["KERNEL_P_TILDE"] = float(P(mpf("1.3"), mpf(2)))
    print("kernel goldens:", g["KERNEL_T_TILDE"], g["KERNEL_P_TILDE"])

    # --- Bessel zeros (independent of the package tables) -----------------
    g["J0_FIRST_ZERO"] = float(mp.findroot(lambda x: mp.besselj(0, x), 2.4))
    g["Y0_FIRST_ZERO"] = float(mp.findroot(lambda x: mp.bessely(0, x), 0.9))
    print("zeros:", g["J0_FIRST_ZERO"], g["Y0_FIRST_ZERO"])

    # --- standard parameter point: D=1, a=1, ka=2*pi, kd=1 ----------------
    h_t, kD_t = mpf(1), mpf(1)
    _, _, mod, T, P = kernel_funcs(h_t, kD_t)

    def Pc(xi):
        return 2 * h_t / (mp.pi * mod(xi))

    # survival S(t=0.5 | r0=1.5)
    tau = mpf("0.5")
    iv = mp.quad(lambda x: mp.e ** (-tau * x * x) * Pc(x) * T(x, mpf("1.5")),
                 mp.linspace(0, 16, 9))
    g["SURVIVAL_T05_R015"] = float(1 - iv)

    # bound-state survival S(t=1 | *)
    tau = mpf(1)
    iv = mp.quad(lambda x: mp.e ** (-tau * x * x) * Pc(x) ** 2 / x,
                 [0, mpf("0.25"), 1, 2, 4, 8, 12])
    g["BOUND_SURVIVAL_T1"] = float(1 - (kD_t / h_t) * iv)

    # rate k(t=0.5) (SPECTRAL form), D=1
    tau = mpf("0.5")
    iv = mp.quad(lambda x: mp.e ** (-tau * x * x) * Pc(x) ** 2 * x,
                 [0, mpf("0.5"), 1, 2, 4, 8, 12])
    g["RATE_T05"] = float(2 * mp.pi * iv)

    # unbound Green's function g(r=1, t=0.25 | r0=1)
    tau = mpf("0.25")
    iv = mp.quad(lambda x: mp.e ** (-tau * x * x) * T(x, 1) ** 2 * x,
                 mp.linspace(0, 20, 11))
    g["GF_T025_R1_R01"] = float(iv / (2 * mp.pi))

    # bound-source density g(r=2, t=1 | *) = (kd/ka) * integral
    tau = mpf(1)
    iv = mp.quad(lambda x: mp.e ** (-tau * x * x) * Pc(x) * T(x, 2),
                 mp.linspace(0, 12, 7))
    g["GF_FROM_STAR_T1_R2"] = float(iv / (2 * mp.pi))

    print("observable goldens done")

    # --- off-rate constant at h~ = kD~ = 1 --------------------------------
    mp.dps = 50
    fp1 = finite_part_f(mpf(1), mpf(1), mpf(1))
    C = fp1 - 1          # tau~ = fp = 1/kD~ + C*h~/kD~ = 1 + C here
    g["FINITE_PART_H1_K1_C1"] = float(fp1)
    g["C_CONSTANT"] = float(C)
    print("C(1) =", mp.nstr(C, 12))
    if abs(C - mpf("0.11593")) > mpf("1e-4"):
        raise SystemExit("off-rate constant does not reproduce 0.11593")

    # split-point invariance of the full finite part (the tau~ value)
    for c in (mpf("0.5"), mpf(2), mpf(4)):
        v = finite_part_f(mpf(1), mpf(1), c)
        if abs(v - fp1) > mpf("1e-30"):
            raise SystemExit(f"finite part not split-point invariant at c={c}")
    print("split-point invariance certified")

    # --- structure of the regularized integral across (h~, kD~) -----------
    mp.dps = 30
    grid = []
    for ht in (mpf("0.5"), mpf(1), mpf(2)):
        for kt in (mpf("0.5"), mpf(1), mpf(2)):
            v = finite_part_f(ht, kt, mpf(1))
            c_impl = (v - ht / kt ** 2) * kt ** 2 / ht ** 2
            grid.append((float(ht), float(kt), float(v), float(c_impl)))
            print(f"  h~={float(ht)} kD~={float(kt)}: fp={float(v):.12g} "
                  f"C_implied={float(c_impl):.12g}")
    g["FINITE_PART_GRID"] = grid

    # --- oscillatory identity values by quadosc ---------------------------
    mp.dps = 30
    _, _, mod, T, P = kernel_funcs(mpf(1), mpf(1))

    def Pc1(xi):
        return 2 / (mp.pi * mod(xi))

    v16 = mp.quadosc(lambda x: Pc1(x) * T(x, 2), [0, mp.inf],
                     period=2 * mp.pi)
    print("Eq.16-type integral (should vanish):", mp.nstr(v16, 8))
    g["OSC_PT_R02"] = float(v16)
    if abs(v16) > mpf("1e-12"):
        raise SystemExit("P(.,1)*T(.,r0) integral did not vanish")

    v40_gt = mp.quadosc(lambda x: P(x, 2) * T(x, mpf("1.5")), [0, mp.inf],
                        period=4 * mp.pi)
    print("step identity r>r0 (target 0.5):", mp.nstr(v40_gt, 10))
    if abs(v40_gt - mpf("0.5")) > mpf("1e-10"):
        raise SystemExit("step identity (r > r0) failed")

    v40_lt = mp.quadosc(lambda x: P(x, mpf("1.5")) * T(x, 2), [0, mp.inf],
                        period=4 * mp.pi)
    print("step identity r<r0 (target 0):", mp.nstr(v40_lt, 8))
    if abs(v40_lt) > mpf("1e-10"):
        raise SystemExit("step identity (r < r0) failed")

    v43 = mp.quadosc(lambda x: Pc1(x) * P(x, mpf("1.5")) / x, [0, mp.inf],
                     period=4 * mp.pi)
    print("P*P/x identity (target 2/3):", mp.nstr(v43, 10))
    if abs(v43 - mpf(2) / 3) > mpf("1e-10"):
        raise SystemExit("P*P/x identity failed")

    # --- emit --------------------------------------------------------------
    lines = [
        '"""Golden reference values for the test suite.',
        "",
        "Generated by tools/generate_reference.py with mpmath, independent of",
        "the package implementation; do not edit by hand.",
        '"""',
        "",
    ]
    for k in sorted(g):
        lines.append(f"{k} = {g[k]!r}")
        lines.append("")
    out = os.path.abspath(OUT_PATH)
    with open(out, "w") as fh:
        fh.write("\n".join(lines))
    print("wrote", out)


if __name__ == "__main__":
    sys.exit(main())
