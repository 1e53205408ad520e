"""Command-line interface: exit codes, output formats, determinism."""

import json
import math

import pytest

import _golden as golden
from revpair2d.cli import main

BASE = ["--D", "1", "--a", "1", "--ka", "6.283185307179586", "--kd", "1"]


def run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def csv_rows(text):
    lines = text.strip().splitlines()
    return lines[0].split(","), [
        [float(v) for v in ln.split(",")] for ln in lines[1:]]


class TestArgparseBehaviour:
    def test_help_exits_zero(self, capsys):
        rc, out, _ = run(capsys, ["--help"])
        assert rc == 0
        assert "survival" in out

    def test_missing_subcommand(self, capsys):
        rc, _, _ = run(capsys, [])
        assert rc == 2

    def test_unknown_subcommand(self, capsys):
        rc, _, _ = run(capsys, ["frobnicate"] + BASE)
        assert rc == 2

    def test_unknown_flag(self, capsys):
        rc, _, _ = run(capsys, ["offrate"] + BASE + ["--bogus", "1"])
        assert rc == 2


#a few ulp beyond 1 at long t is expected and clamped with a warning
SWEEP_CLAMP = pytest.mark.filterwarnings(
    "ignore::revpair2d.greens.NegativeDensityWarning")


class TestSurvivalCommand:
    @SWEEP_CLAMP
    def test_csv_shape_and_short_time_limit(self, capsys):
        rc, out, _ = run(capsys, ["survival"] + BASE + [
            "--r0", "1.5", "--t-grid", "log:1e-3:1e3:25"])
        assert rc == 0
        cols, rows = csv_rows(out)
        assert cols == ["t", "S", "err"]
        assert len(rows) == 25
        t0, s0, e0 = rows[0]
        assert t0 == pytest.approx(1e-3)
        assert s0 == pytest.approx(1.0, abs=1e-4)
        #every numeric column ships with an error estimate column
        assert all(len(r) == 3 and r[2] >= 0 for r in rows)

    @SWEEP_CLAMP
    def test_json_round_trip(self, capsys):
        rc, out, _ = run(capsys, ["survival", "--format", "json"] + BASE + [
            "--r0", "1.5", "--t-grid", "log:1e-3:1e3:25"])
        assert rc == 0
        doc = json.loads(out)
        assert set(doc) == {"manifest", "columns", "points"}
        assert doc["columns"] == ["t", "S", "err"]
        assert len(doc["points"]) == 25
        man = doc["manifest"]
        assert man["params"]["kappa_a"] == pytest.approx(2 * math.pi)
        assert "timestamp" not in man

    def test_r0_below_contact(self, capsys):
        rc, _, err = run(capsys, ["survival"] + BASE + [
            "--r0", "0.5", "--t-grid", "log:0.1:1:3"])
        assert rc == 2
        assert "r0 must be >= a" in err

    @pytest.mark.parametrize("grid", [
        "log:1:10", "cubic:1:10:5", "log:10:1:5", "log:0:1:5",
        "lin:1:x:5", "log:1:10:0"])
    def test_bad_grid(self, capsys, grid):
        rc, _, err = run(capsys, ["survival"] + BASE + [
            "--r0", "1.5", "--t-grid", grid])
        assert rc == 2
        assert "grid" in err

    def test_bad_params_exit_two(self, capsys):
        rc, _, err = run(capsys, ["survival", "--D", "-1", "--a", "1",
                                  "--ka", "1", "--kd", "1",
                                  "--r0", "1.5", "--t-grid", "log:0.1:1:3"])
        assert rc == 2
        assert "error" in err


class TestKaSpelling:
    def _rate_value(self, capsys, ka):
        rc, out, _ = run(capsys, ["rate", "--D", "1", "--a", "1",
                                  "--ka", ka, "--kd", "1",
                                  "--t-grid", "log:0.5:1:1"])
        assert rc == 0
        _, rows = csv_rows(out)
        return rows[0][1]

    def test_h_form_matches_raw_value(self, capsys):
        #h~ = 1 means kappa_a = 2 pi D, the raw number in BASE
        assert self._rate_value(capsys, "h:1") == \
            self._rate_value(capsys, "6.283185307179586")

    @pytest.mark.parametrize("ka", ["h:x", "abc", "h:-1"])
    def test_bad_ka(self, capsys, ka):
        rc, _, err = run(capsys, ["rate", "--D", "1", "--a", "1",
                                  "--ka", ka, "--kd", "1",
                                  "--t-grid", "log:0.5:1:1"])
        assert rc == 2
        assert "ka" in err or "h~" in err


class TestRateRoutes:
    def test_routes_agree(self, capsys):
        vals = {}
        for route in ("spectral", "survival-deriv", "bound-deriv"):
            rc, out, _ = run(capsys, ["rate"] + BASE + [
                "--route", route, "--t-grid", "log:0.5:1:1"])
            assert rc == 0
            _, rows = csv_rows(out)
            vals[route] = rows[0][1]
        k0 = vals["spectral"]
        assert k0 == pytest.approx(golden.RATE_T05, rel=1e-8)
        for v in vals.values():
            assert v == pytest.approx(k0, rel=1e-5)


class TestGfCommand:
    def test_pair_profile(self, capsys):
        rc, out, _ = run(capsys, ["gf"] + BASE + [
            "--t", "0.25", "--r0", "1.0", "--r-grid", "lin:1:3:5"])
        assert rc == 0
        cols, rows = csv_rows(out)
        assert cols == ["r", "g", "err"]
        assert len(rows) == 5
        assert all(r[1] >= 0 for r in rows)

    def test_from_star_profile(self, capsys):
        rc, out, _ = run(capsys, ["gf", "--from-star"] + BASE + [
            "--t", "1.0", "--r-grid", "lin:1:4:4"])
        assert rc == 0
        _, rows = csv_rows(out)
        assert all(r[1] > 0 for r in rows)

    def test_r0_required_without_from_star(self, capsys):
        rc, _, err = run(capsys, ["gf"] + BASE + [
            "--t", "0.25", "--r-grid", "lin:1:3:3"])
        assert rc == 2
        assert "--r0 required" in err

    def test_r_grid_below_contact(self, capsys):
        rc, _, err = run(capsys, ["gf"] + BASE + [
            "--t", "0.25", "--r0", "1.0", "--r-grid", "lin:0.5:3:3"])
        assert rc == 2
        assert ">= a" in err


class TestOffrateCommand:
    def test_constant_and_consistency(self, capsys):
        rc, out, _ = run(capsys, ["offrate"] + BASE)
        assert rc == 0
        doc = json.loads(out)
        assert doc["C_constant"] == pytest.approx(0.11593, abs=1e-4)
        assert doc["k_off"] == pytest.approx(1.0 / doc["tau"], rel=1e-12)
        #max_discrepancy is the relative spread across split points
        assert doc["max_discrepancy"] < 1e-6
        assert len(doc["split_points_tested"]) >= 2


class TestIdentitiesCommand:
    def test_suite_passes(self, capsys):
        rc, out, _ = run(capsys, ["identities"] + BASE + [
            "--radii", "1.5,2"])
        assert rc == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert doc["max_residual"] < 1e-7
        #zero-target identities sit at the cancellation floor where the
        #engine cannot certify a relative tolerance; their residual rules
        for r in doc["results"]:
            assert r["converged"] or abs(r["residual"]) < 1e-10

    def test_bad_radii(self, capsys):
        rc, _, err = run(capsys, ["identities"] + BASE + [
            "--radii", "1.5,zz"])
        assert rc == 2
        assert "radii" in err


class TestOracleCompare:
    def test_survival_agreement(self, capsys):
        rc, out, _ = run(capsys, ["oracle-compare", "--observable",
                                  "survival"] + BASE + [
            "--r0", "1.5", "--t-grid", "log:0.1:0.5:3",
            "--n-r", "320", "--n-steps", "400"])
        assert rc == 0
        cols, rows = csv_rows(out)
        assert cols == ["t", "analytic", "oracle", "rel_diff"]
        assert max(r[3] for r in rows) < 1e-3

    def test_rate_agreement(self, capsys):
        rc, out, _ = run(capsys, ["oracle-compare", "--observable",
                                  "rate"] + BASE + [
            "--t-grid", "log:0.25:0.5:2", "--n-r", "320",
            "--n-steps", "400"])
        assert rc == 0
        _, rows = csv_rows(out)
        assert max(r[3] for r in rows) < 1e-3

    def test_survival_needs_interior_r0(self, capsys):
        rc, _, err = run(capsys, ["oracle-compare", "--observable",
                                  "survival"] + BASE + [
            "--r0", "1.0", "--t-grid", "log:0.1:0.5:2"])
        assert rc == 2
        assert "strictly inside" in err


class TestDeterminismAndSidecar:
    ARGS = ["survival", "--format", "json"] + BASE + [
        "--r0", "1.5", "--t-grid", "log:0.01:10:7"]

    def test_byte_identical_payloads(self, tmp_path, capsys):
        p1 = tmp_path / "run1.json"
        p2 = tmp_path / "run2.json"
        assert main(self.ARGS + ["--out", str(p1)]) == 0
        assert main(self.ARGS + ["--out", str(p2)]) == 0
        capsys.readouterr()
        assert p1.read_bytes() == p2.read_bytes()

    def test_timestamp_only_in_sidecar(self, tmp_path, capsys):
        p = tmp_path / "run.json"
        assert main(self.ARGS + ["--out", str(p)]) == 0
        capsys.readouterr()
        assert "timestamp" not in p.read_text()
        side = json.loads((tmp_path / "run.json.manifest.json").read_text())
        assert "timestamp" in side
        assert side["version"]
        assert side["quadrature_digest"]

    def test_csv_out_matches_stdout(self, tmp_path, capsys):
        argv = ["survival"] + BASE + ["--r0", "1.5",
                                      "--t-grid", "log:0.01:10:7"]
        rc, out, _ = run(capsys, argv)
        assert rc == 0
        p = tmp_path / "run.csv"
        assert main(argv + ["--out", str(p)]) == 0
        capsys.readouterr()
        assert p.read_text() == out
