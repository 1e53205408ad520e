"""Crank-Nicolson oracle: config validation, conservation, and agreement
with the spectral evaluator on survival, rate, and detailed balance."""

import math

import numpy as np
import pytest

from revpair2d.kernel import PairParams
from revpair2d.observables import rate_k, survival, survival_bound
from revpair2d.pde_oracle import (
    BOUND_START,
    Initial,
    OracleConfig,
    OracleInstabilityError,
    delta_at,
    dump_csv,
    oracle_bound,
    oracle_density_at,
    oracle_rate,
    oracle_survival,
    richardson_survival,
    smearing_weights,
    solve,
)

STD = PairParams(D=1.0, a=1.0, kappa_a=2.0 * math.pi, kappa_d=1.0)
NO_BIND = PairParams(D=1.0, a=1.0, kappa_a=0.0, kappa_d=1.0)

#Coarse config for a t_final = 0.5 horizon: r_max >= a + 8 sqrt(2 D t) = 9.
CFG = OracleConfig(r_max=9.2, n_r=256, dt=2e-3)
T_FINAL = 0.5
T_CHECK = (0.1, 0.5)


@pytest.fixture(scope="module")
def bound_pair():
    """Refined survival plus the coarse/fine solution pair, bound start."""
    return richardson_survival(STD, BOUND_START, CFG, T_FINAL, T_CHECK)


@pytest.fixture(scope="module")
def delta_pair():
    """Same refinement pair started from a delta ring at r0 = 1.5 a."""
    return richardson_survival(STD, delta_at(1.5), CFG, T_FINAL, T_CHECK)


class TestOracleConfig:
    def test_defaults(self):
        cfg = OracleConfig(r_max=20.0)
        assert cfg.n_r == 512
        assert cfg.dt == 1e-3
        assert cfg.scheme_theta == 0.5

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"r_max": 0.0},
            {"r_max": -3.0},
            {"r_max": math.inf},
            {"r_max": 10.0, "n_r": 255},
            {"r_max": 10.0, "dt": 0.0},
            {"r_max": 10.0, "dt": -1e-3},
            {"r_max": 10.0, "dt": math.inf},
            {"r_max": 10.0, "scheme_theta": 0.49},
            {"r_max": 10.0, "scheme_theta": 1.01},
        ],
    )
    def test_rejects_bad_config(self, kwargs):
        with pytest.raises(ValueError):
            OracleConfig(**kwargs)

    def test_frozen(self):
        cfg = OracleConfig(r_max=10.0)
        with pytest.raises(AttributeError):
            cfg.dt = 5e-4


class TestInitial:
    def test_bound_start(self):
        assert BOUND_START.kind == "BOUND"
        assert BOUND_START.r0 is None

    def test_delta_at(self):
        ini = delta_at(1.5)
        assert ini.kind == "DELTA_AT"
        assert ini.r0 == 1.5

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            Initial("GAUSSIAN")

    def test_delta_requires_r0(self):
        with pytest.raises(ValueError, match="r0"):
            Initial("DELTA_AT")


class TestSolveValidation:
    @pytest.mark.parametrize("t_final", [0.0, -1.0, math.inf])
    def test_rejects_bad_horizon(self, t_final):
        with pytest.raises(ValueError, match="t_final"):
            solve(STD, BOUND_START, CFG, t_final)

    def test_rejects_domain_too_small(self):
        #t = 0.5 needs r_max >= 9; an r_max = 5 box would reflect mass back
        cfg = OracleConfig(r_max=5.0, n_r=256, dt=1e-3)
        with pytest.raises(ValueError, match="r_max too small"):
            solve(STD, BOUND_START, cfg, T_FINAL)

    @pytest.mark.parametrize("r0", [1.0, 9.2, 12.0, 0.5])
    def test_rejects_delta_outside_open_interval(self, r0):
        with pytest.raises(ValueError, match="strictly inside"):
            solve(STD, delta_at(r0), CFG, 0.01)


class TestBoundStart:
    def test_initial_state(self, bound_pair):
        _, sol_c, _ = bound_pair
        assert sol_c.times[0] == 0.0
        assert oracle_bound(sol_c, 0.0) == 1.0
        assert oracle_survival(sol_c, 0.0) == 0.0
        assert np.all(sol_c.density[0] == 0.0)

    def test_mass_conserved_every_step(self, bound_pair):
        _, sol_c, sol_f = bound_pair
        for sol in (sol_c, sol_f):
            assert np.max(np.abs(sol.mass() - 1.0)) < 1e-8

    def test_survival_plus_bound_is_one(self, bound_pair):
        _, _, sol_f = bound_pair
        for t in (0.05, 0.1, 0.25, 0.5):
            total = oracle_survival(sol_f, t) + oracle_bound(sol_f, t)
            assert total == pytest.approx(1.0, abs=1e-8)

    def test_survival_matches_spectral_route(self, bound_pair):
        vals, _, _ = bound_pair
        for t, (refined, err) in zip(T_CHECK, vals):
            assert err < 2e-4
            exact = survival_bound(STD, t)
            assert refined == pytest.approx(exact, rel=1e-3)

    def test_rate_matches_spectral_route(self, bound_pair):
        _, sol_c, sol_f = bound_pair
        for t in T_CHECK:
            kc = oracle_rate(sol_c, t)
            kf = oracle_rate(sol_f, t)
            refined = kf + (kf - kc) / 3.0
            assert refined == pytest.approx(rate_k(STD, t), rel=1e-3)

    def test_rate_requires_bound_start(self, delta_pair):
        _, sol_c, _ = delta_pair
        with pytest.raises(ValueError, match="BOUND-start"):
            oracle_rate(sol_c, 0.1)


class TestDeltaStart:
    def test_survival_matches_smeared_spectral(self, delta_pair):
        """Compare against the analytic survival smeared with the same
        initial profile the solver used, not the raw point value."""
        vals, sol_c, _ = delta_pair
        centers, weights, _ = smearing_weights(
            STD, delta_at(1.5), CFG, smear_sigma=sol_c.smear_sigma)
        live = weights > 1e-13 * weights.max()
        for t, (refined, err) in zip(T_CHECK, vals):
            assert err < 2e-4
            smeared = sum(
                w * survival(STD, t, r0=c)
                for c, w in zip(centers[live], weights[live]))
            smeared += 1.0 - weights.sum()  #tail mass outside the window
            assert refined == pytest.approx(smeared, rel=1e-3)

    def test_mass_conserved_every_step(self, delta_pair):
        _, sol_c, sol_f = delta_pair
        for sol in (sol_c, sol_f):
            assert np.max(np.abs(sol.mass() - 1.0)) < 1e-8

    def test_detailed_balance_against_bound_run(self, bound_pair, delta_pair):
        #kappa_d (1 - S(t|r0)) = kappa_a g(r0, t | *) at r0 = 1.5, t = 0.5
        vals, _, _ = delta_pair
        refined_s = vals[1][0]
        _, bc, bf = bound_pair
        gc = oracle_density_at(bc, T_FINAL, 1.5)
        gf = oracle_density_at(bf, T_FINAL, 1.5)
        refined_g = gf + (gf - gc) / 3.0
        lhs = STD.kappa_d * (1.0 - refined_s)
        rhs = STD.kappa_a * refined_g
        assert lhs == pytest.approx(rhs, rel=5e-3)

    def test_no_association_when_kappa_a_zero(self):
        cfg = OracleConfig(r_max=4.0, n_r=256, dt=1e-3)
        sol = solve(NO_BIND, delta_at(1.5), cfg, 0.05)
        assert np.max(sol.bound_prob) == 0.0
        assert np.max(np.abs(sol.mass() - 1.0)) < 1e-8
        #pure reflecting diffusion keeps the density nonnegative
        assert np.min(sol.density) > -1e-12


class TestQueryDomain:
    def test_survival_beyond_horizon(self, bound_pair):
        _, sol_c, _ = bound_pair
        with pytest.raises(ValueError, match="horizon"):
            oracle_survival(sol_c, 0.9)
        with pytest.raises(ValueError, match="horizon"):
            oracle_survival(sol_c, -0.1)

    def test_density_point_outside_grid(self, bound_pair):
        _, sol_c, _ = bound_pair
        for r in (0.5, 0.99, 50.0):
            with pytest.raises(ValueError, match="outside the stored grid"):
                oracle_density_at(sol_c, 0.1, r)

    def test_density_time_outside_horizon(self, bound_pair):
        _, sol_c, _ = bound_pair
        with pytest.raises(ValueError, match="horizon"):
            oracle_density_at(sol_c, 2.0, 1.5)


class TestSmearingWeights:
    def test_weights_normalized_and_centered(self):
        centers, weights, sigma = smearing_weights(STD, delta_at(1.5), CFG)
        assert weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(weights >= 0.0)
        assert sigma > 0.0
        com = float(centers @ weights)
        assert abs(com - 1.5) < sigma

    def test_sigma_override(self):
        _, _, sigma = smearing_weights(
            STD, delta_at(1.5), CFG, smear_sigma=0.05)
        assert sigma == 0.05

    def test_bound_start_has_no_weights(self):
        with pytest.raises(ValueError, match="DELTA_AT"):
            smearing_weights(STD, BOUND_START, CFG)

    def test_solver_records_pinned_sigma(self):
        cfg = OracleConfig(r_max=4.0, n_r=256, dt=1e-3)
        sol = solve(STD, delta_at(1.5), cfg, 0.01, smear_sigma=0.04)
        assert sol.smear_sigma == 0.04


class TestSchemeVariants:
    def test_implicit_euler_also_conserves(self):
        cfg = OracleConfig(r_max=4.0, n_r=256, dt=1e-3, scheme_theta=1.0)
        sol = solve(STD, BOUND_START, cfg, 0.05)
        assert np.max(np.abs(sol.mass() - 1.0)) < 1e-8

    def test_instability_error_is_runtime_error(self):
        #the theta-scheme on this conservative stencil is A-stable, so the
        #density cap is a defensive invariant rather than a reachable path
        assert issubclass(OracleInstabilityError, RuntimeError)


class TestDumpCsv:
    def test_round_trip(self, tmp_path):
        cfg = OracleConfig(r_max=4.0, n_r=256, dt=1e-3)
        sol = solve(STD, BOUND_START, cfg, 0.01)
        path = tmp_path / "oracle.csv"
        dump_csv(sol, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,r,density"
        assert len(lines) == 1 + len(sol.times) * cfg.n_r
        t, r, rho = (float(tok) for tok in lines[1].split(","))
        assert t == 0.0
        assert r == pytest.approx(sol.r_centers[0])
        assert rho == 0.0
