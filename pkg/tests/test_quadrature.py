import math

import numpy as np
import pytest
from scipy import special

import _golden as golden
from revpair2d.kernel import KernelContext, PairParams, kernel_P, kernel_T
from revpair2d.quadrature import (IDENTITY_CONFIG, SWEEP_CONFIG,
                                  IntegrandEvaluationError, QuadratureConfig,
                                  QuadratureResult, finite_part,
                                  integrate_damped, integrate_finite,
                                  integrate_oscillatory)

GAMMA = 0.5772156649015329
STD = PairParams(D=1.0, a=1.0, kappa_a=2.0 * math.pi, kappa_d=1.0)


class TestDampedExamples:
    def test_linear_integrand(self):
        r = integrate_damped(lambda x: x, 1.0)
        assert r.converged
        assert r.value == pytest.approx(0.5, abs=1e-12)

    def test_constant_integrand(self):
        r = integrate_damped(lambda x: np.ones_like(x), 1.0)
        assert r.converged
        assert r.value == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)

    def test_bessel_hankel_transform(self):
        #int_0^inf J0(x) x e^{-x^2/4} dx = 2 e^{-1}.
        r = integrate_damped(lambda x: special.j0(x) * x, 0.25)
        assert r.converged
        assert r.value == pytest.approx(2.0 * math.exp(-1.0), rel=1e-11)


class TestOscillatoryExamples:
    def test_j0_integrates_to_one(self):
        r = integrate_oscillatory(special.j0, 1.0, -1.0)
        assert r.converged
        assert abs(r.value - 1.0) <= 1e-9

    def test_j1_integrates_to_one(self):
        r = integrate_oscillatory(special.j1, 1.0, -1.0)
        assert r.converged
        assert abs(r.value - 1.0) <= 1e-9

    def test_kernel_orthogonality_at_r0_2a(self):
        #int_0^inf P(x, a) T(x, 2a) dx = 0; the product beats at the
        #difference frequency |r0/a - 1| = 1 and decays like x^-2.
        ctx = KernelContext(STD)

        def integrand(x):
            return kernel_P(ctx, x, 1.0) * kernel_T(ctx, x, 2.0)

        r = integrate_oscillatory(integrand, 1.0, -2.0)
        assert abs(r.value) <= 1e-8
        #The generator-side evaluation of the same integral is itself
        #consistent with zero at this scale.
        assert abs(golden.OSC_PT_R02) <= 1e-12


class TestFinitePartExamples:
    def test_truncated_constant_split_at_one(self):
        #f = 1 on [0, c], 0 beyond: only the ln c term survives, and
        #ln 1 = 0.
        f = lambda x: np.where(np.asarray(x) <= 1.0, 1.0, 0.0)
        r = finite_part(f, 1.0, 1.0)
        assert r.converged
        assert abs(r.value) <= 1e-15

    def test_truncated_constant_split_at_e(self):
        c = math.e
        f = lambda x: np.where(np.asarray(x) <= c, 1.0, 0.0)
        r = finite_part(f, 1.0, c)
        assert r.converged
        assert abs(r.value - 1.0) <= 1e-15

    def test_exponential_gives_negative_euler_gamma(self):
        r = finite_part(lambda x: np.exp(-x), 1.0, 1.0)
        assert r.converged
        assert r.value == pytest.approx(-GAMMA, abs=1e-10)

    def test_split_point_invariance(self):
        results = [finite_part(lambda x: np.exp(-x), 1.0, c)
                   for c in (0.5, 1.0, 2.0, 4.0)]
        for r in results:
            assert r.converged
            assert r.value == pytest.approx(-GAMMA, abs=1e-9)
        for i, ri in enumerate(results):
            for rj in results[i + 1:]:
                combined = ri.error_estimate + rj.error_estimate + 2e-14
                assert abs(ri.value - rj.value) <= combined


def _richardson_linear(fd, dampings=(1e-2, 1e-3, 1e-4)):
    s = list(dampings)
    v = [fd(d) for d in s]
    p01 = (s[0] * v[1] - s[1] * v[0]) / (s[0] - s[1])
    p12 = (s[1] * v[2] - s[2] * v[1]) / (s[1] - s[2])
    return (s[0] * p12 - s[2] * p01) / (s[0] - s[2])


class TestDampedOscillatoryConsistency:
    #For decay <= -2 integrands with no non-oscillatory component the
    #damped integral is analytic in the damping, so three-point
    #Richardson extrapolation to zero damping lands on the undamped value.
    CASES = [
        (lambda x: np.sin(2 * x) / (1 + x * x), 2.0),
        (lambda x: x * np.sin(3 * x) / (1 + x * x) ** 1.5, 3.0),
        (lambda x: np.cos(x) / (4 + x * x), 1.0),
    ]

    @pytest.mark.parametrize("case", range(3))
    def test_richardson_agreement(self, case):
        f, scale = self.CASES[case]
        cfg = QuadratureConfig(1e-12, 1e-14, 16384, 10)
        osc = integrate_oscillatory(f, scale, -2.0, cfg)
        assert osc.converged
        rich = _richardson_linear(
            lambda s: integrate_damped(f, s, cfg).value)
        assert abs(osc.value - rich) <= 1e-6 * abs(osc.value)


#--- error-estimate honesty corpus: 20 closed-form integrals -------------
SQPI = math.sqrt(math.pi)
DAMPED_CORPUS = [
    (lambda x: x, 1.0, 0.5),
    (lambda x: np.ones_like(x), 1.0, SQPI / 2),
    (lambda x: x ** 3, 1.0, 0.5),
    (lambda x: x ** 5, 1.0, 1.0),
    (lambda x: x * x, 1.0, SQPI / 4),
    (lambda x: np.cos(x), 1.0, SQPI / 2 * math.exp(-0.25)),
    (lambda x: x * np.sin(x), 1.0, SQPI / 4 * math.exp(-0.25)),
    (lambda x: special.j0(x) * x, 0.25, 2 * math.exp(-1.0)),
    (lambda x: special.j0(x) * x, 1.0, math.exp(-0.25) / 2),
    (lambda x: x, 0.5, 1.0),
]
FINITE_PART_CORPUS = [
    (lambda x: np.exp(-x), 1.0, 1.0, -GAMMA),
    (lambda x: np.exp(-x), 1.0, 2.0, -GAMMA),
    (lambda x: np.exp(-2 * x), 1.0, 1.0, -GAMMA - math.log(2.0)),
    (lambda x: 1.0 / (1 + x * x), 1.0, 1.0, 0.0),
    (lambda x: np.exp(-x * x), 1.0, 1.0, -GAMMA / 2),
]
OSC_CORPUS = [
    (special.j0, 1.0, -1.0, 1.0),
    (special.j1, 1.0, -1.0, 1.0),
    (lambda x: special.j0(2 * x), 2.0, -1.0, 0.5),
    (lambda x: special.j1(x) / x, 1.0, -1.5, 1.0),
    (lambda x: np.sin(x) / x, 1.0, -1.0, math.pi / 2),
]


def _run_corpus():
    cfg = QuadratureConfig(1e-11, 1e-13, 8192, 10)
    out = []
    for f, damping, truth in DAMPED_CORPUS:
        out.append((integrate_damped(f, damping, cfg), truth, cfg))
    for f, f0, c, truth in FINITE_PART_CORPUS:
        out.append((finite_part(f, f0, c), truth, IDENTITY_CONFIG))
    for f, scale, dec, truth in OSC_CORPUS:
        out.append((integrate_oscillatory(f, scale, dec), truth,
                    IDENTITY_CONFIG))
    return out


class TestErrorHonesty:
    def test_corpus_size(self):
        assert (len(DAMPED_CORPUS) + len(FINITE_PART_CORPUS)
                + len(OSC_CORPUS)) == 20

    def test_true_error_within_three_times_reported(self):
        results = _run_corpus()
        honest = sum(abs(r.value - truth) <= 3.0 * r.error_estimate
                     for r, truth, _ in results)
        assert honest >= 0.95 * len(results)

    def test_converged_implies_error_within_tolerance(self):
        for r, _, cfg in _run_corpus():
            assert isinstance(r, QuadratureResult)
            assert r.error_estimate >= 0.0
            if r.converged:
                bound = max(cfg.abs_tol, cfg.rel_tol * abs(r.value))
                assert r.error_estimate <= bound


class TestConfigValidation:
    def test_defaults_exported(self):
        assert IDENTITY_CONFIG.rel_tol == 1e-10
        assert IDENTITY_CONFIG.abs_tol == 1e-12
        assert SWEEP_CONFIG.rel_tol == 1e-8
        assert SWEEP_CONFIG.abs_tol == 1e-10

    @pytest.mark.parametrize("kwargs", [
        dict(rel_tol=1e-15),
        dict(abs_tol=0.0),
        dict(abs_tol=-1e-10),
        dict(max_panels=8),
        dict(tail_accel_terms=0),
    ])
    def test_rejects_bad_config(self, kwargs):
        base = dict(rel_tol=1e-10, abs_tol=1e-12, max_panels=4096,
                    tail_accel_terms=10)
        base.update(kwargs)
        with pytest.raises(ValueError):
            QuadratureConfig(**base)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            integrate_damped(lambda x: x, 0.0)
        with pytest.raises(ValueError):
            integrate_damped(lambda x: x, -1.0)
        with pytest.raises(ValueError):
            integrate_oscillatory(special.j0, 0.0, -1.0)
        with pytest.raises(ValueError):
            integrate_oscillatory(special.j0, 1.0, -0.5)
        with pytest.raises(ValueError):
            integrate_oscillatory(special.j0, 1.0, -1.0, start=-1.0)
        with pytest.raises(ValueError):
            finite_part(lambda x: np.exp(-x), 1.0, 0.0)
        with pytest.raises(ValueError):
            finite_part(lambda x: np.exp(-x), float("inf"), 1.0)
        with pytest.raises(ValueError):
            integrate_finite(lambda x: x, 1.0, 1.0)


class TestEvaluationErrors:
    def test_damped_non_finite_sample_carries_abscissa(self):
        def bad(x):
            return np.where(x > 3.0, np.nan, x)

        with pytest.raises(IntegrandEvaluationError) as exc:
            integrate_damped(bad, 0.01)
        assert exc.value.abscissa > 3.0
        assert "x =" in str(exc.value)

    def test_finite_interval_non_finite_sample(self):
        def bad(x):
            return np.where(np.abs(x - 0.5) < 0.01, np.inf, x)

        with pytest.raises(IntegrandEvaluationError) as exc:
            integrate_finite(bad, 0.0, 1.0)
        assert abs(exc.value.abscissa - 0.5) < 0.011

    def test_finite_part_non_finite_near_zero(self):
        def bad(x):
            x = np.asarray(x)
            return np.where(x < 1e-5, np.nan, np.exp(-x))

        with pytest.raises(IntegrandEvaluationError):
            finite_part(bad, 1.0, 1.0)


class TestHonestNonConvergence:
    def test_panel_budget_exhaustion_flags(self):
        cfg = QuadratureConfig(1e-12, 1e-14, 16, 10)
        r = integrate_damped(lambda x: special.j0(50 * x) * x, 1e-4, cfg)
        assert not r.converged

    def test_non_oscillatory_component_flags(self):
        #J1(x)^2/x has a non-alternating envelope component (violating
        #the stated precondition); the engine must refuse to claim
        #convergence rather than return a silently wrong value.
        r = integrate_oscillatory(lambda x: special.j1(x) ** 2 / x,
                                  2.0, -2.0)
        assert not r.converged


class TestCallbackAndStart:
    def test_scalar_only_callback_supported(self):
        r = integrate_damped(lambda x: math.exp(-x), 1.0)
        truth = SQPI / 2 * math.exp(0.25) * special.erfc(0.5)
        assert r.converged
        assert r.value == pytest.approx(truth, rel=1e-10)

    def test_start_splits_cleanly(self):
        tail = integrate_oscillatory(special.j0, 1.0, -1.0, start=5.0)
        head = integrate_finite(special.j0, 0.0, 5.0)
        assert tail.converged and head.converged
        assert head.value + tail.value == pytest.approx(1.0, abs=1e-9)
