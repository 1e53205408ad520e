"""Command-line front end emitting reproducible CSV/JSON tables.

Determinism contract: two runs with identical flags produce
byte-identical data files.  The data payload therefore never contains a
timestamp; the full run manifest (with timestamp) goes to a sidecar
file `<out>.manifest.json` when --out is given.  All numbers print with
17 significant digits so text round-trips reproduce the binary values.

Exit codes: 0 success, 2 usage/precondition error, 3 numerical failure
(non-convergence, instability), with a diagnostic naming the failing
point where applicable.
"""

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__
from .greens import AccuracyError, gf_from_star, gf_unbound
from .kernel import PairParams
from .observables import (RateRoute, RegularizationError, identity_suite,
                          mean_lifetime, rate_series, survival_bound_series,
                          survival_series)
from .pde_oracle import (BOUND_START, OracleConfig, delta_at, oracle_rate,
                         OracleInstabilityError, richardson_survival, solve,
                         smearing_weights)
from .quadrature import IntegrandEvaluationError, SWEEP_CONFIG


class UsageError(Exception):
    pass


def _fmt(x):
    return "%.17g" % float(x)


def _parse_grid(spec):
    """Parse 'log:t0:t1:n' or 'lin:t0:t1:n' into an ndarray."""
    parts = spec.split(":")
    if len(parts) != 4 or parts[0] not in ("log", "lin"):
        raise UsageError("grid must look like log:t0:t1:n or lin:t0:t1:n")
    try:
        lo, hi, n = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise UsageError("bad grid numbers: %s" % exc)
    if n < 1 or not (hi > lo):
        raise UsageError("grid needs hi > lo and n >= 1")
    if parts[0] == "log":
        if lo <= 0:
            raise UsageError("log grid needs t0 > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _parse_ka(text, D):
    """kappa_a flag: raw value, or 'h:<h_tilde>' (kappa_a = 2 pi D h~)."""
    if text.startswith("h:"):
        try:
            h_tilde = float(text[2:])
        except ValueError:
            raise UsageError("bad h: value in --ka")
        if h_tilde < 0:
            raise UsageError("h~ must be >= 0")
        return 2.0 * math.pi * D * h_tilde
    try:
        return float(text)
    except ValueError:
        raise UsageError("--ka must be a number or h:<value>")


def _params(args):
    try:
        return PairParams(D=args.D, a=args.a,
                          kappa_a=_parse_ka(args.ka, args.D),
                          kappa_d=args.kd)
    except ValueError as exc:
        raise UsageError(str(exc))


def _digest(obj):
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _manifest(args, params, extra_cfg=None):
    q = {"rel_tol": SWEEP_CONFIG.rel_tol, "abs_tol": SWEEP_CONFIG.abs_tol,
         "max_panels": SWEEP_CONFIG.max_panels,
         "tail_accel_terms": SWEEP_CONFIG.tail_accel_terms}
    man = {
        "command": " ".join(sys.argv[1:]) if sys.argv[1:] else args.cmd,
        "params": {"D": params.D, "a": params.a,
                   "kappa_a": params.kappa_a, "kappa_d": params.kappa_d},
        "quadrature_digest": _digest(q),
        "version": __version__,
    }
    if extra_cfg is not None:
        man["oracle_digest"] = _digest(extra_cfg)
    return man


def _write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-revpair2d-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, manifest, columns, rows):
    """Render CSV or JSON and write to --out (atomically) or stdout."""
    if args.format == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        doc = {"manifest": manifest, "columns": list(columns),
               "points": [[float(v) for v in row] for row in rows]}
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if args.out:
        _write_atomic(args.out, text)
        side = dict(manifest)
        side["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ",
                                          time.gmtime())
        _write_atomic(args.out + ".manifest.json",
                      json.dumps(side, sort_keys=True, indent=1) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def _emit_json_doc(args, doc):
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if args.out:
        _write_atomic(args.out, text)
        side = dict(doc.get("manifest", {}))
        side["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ",
                                          time.gmtime())
        _write_atomic(args.out + ".manifest.json",
                      json.dumps(side, sort_keys=True, indent=1) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def cmd_survival(args):
    params = _params(args)
    if args.r0 < params.a:
        raise UsageError("r0 must be >= a")
    ts = _parse_grid(args.t_grid)
    series = survival_series(params, ts, args.r0)
    rows = [(t, v, e) for t, v, e in series.points]
    return _emit(args, _manifest(args, params), ("t", "S", "err"), rows)


def cmd_bound_survival(args):
    params = _params(args)
    ts = _parse_grid(args.t_grid)
    series = survival_bound_series(params, ts)
    rows = [(t, v, e) for t, v, e in series.points]
    return _emit(args, _manifest(args, params), ("t", "S", "err"), rows)


def cmd_rate(args):
    params = _params(args)
    route = {"spectral": RateRoute.SPECTRAL,
             "survival-deriv": RateRoute.SURVIVAL_DERIV,
             "bound-deriv": RateRoute.BOUND_DERIV}[args.route]
    ts = _parse_grid(args.t_grid)
    series = rate_series(params, ts, route)
    rows = [(t, v, e) for t, v, e in series.points]
    return _emit(args, _manifest(args, params), ("t", "k", "err"), rows)


def cmd_gf(args):
    params = _params(args)
    rs = _parse_grid(args.r_grid)
    if np.any(rs < params.a):
        raise UsageError("r grid must stay >= a")
    rows = []
    for r in rs:
        if args.from_star:
            g = gf_from_star(params, args.t, float(r))
        else:
            if args.r0 is None:
                raise UsageError("--r0 required unless --from-star")
            if args.r0 < params.a:
                raise UsageError("r0 must be >= a")
            g = gf_unbound(params, args.t, float(r), args.r0)
        rows.append((float(r), g, SWEEP_CONFIG.abs_tol))
    return _emit(args, _manifest(args, params), ("r", "g", "err"), rows)


def cmd_offrate(args):
    params = _params(args)
    #three splits so the emitted max_discrepancy actually measures
    #split-point invariance of the regularization
    report = mean_lifetime(params, split_points=(0.5, 1.0, 2.0))
    doc = {
        "manifest": _manifest(args, params),
        "tau": report.tau,
        "k_off": report.k_off,
        "C_constant": report.C_constant,
        "split_points_tested": list(report.split_points_tested),
        "max_discrepancy": report.max_discrepancy,
    }
    return _emit_json_doc(args, doc)


def cmd_identities(args):
    params = _params(args)
    try:
        radii = [float(v) * params.a for v in args.radii.split(",")]
    except ValueError:
        raise UsageError("--radii must be a comma list of numbers")
    report = identity_suite(params, radii)
    doc = {
        "manifest": _manifest(args, params),
        "passed": report.passed,
        "max_residual": report.max_residual,
        "results": [
            {"name": r.name, "arguments": r.arguments, "value": r.value,
             "target": r.target, "residual": r.residual,
             "converged": r.converged}
            for r in report.results
        ],
    }
    _emit_json_doc(args, doc)
    return 0 if report.passed else 3


def cmd_oracle_compare(args):
    from .observables import rate_k, survival, survival_bound
    params = _params(args)
    ts = sorted(_parse_grid(args.t_grid))
    t_final = ts[-1]
    r_max = params.a + 8.0 * math.sqrt(2.0 * params.D * t_final) \
        + 0.5 * params.a
    cfg = OracleConfig(r_max=r_max, n_r=args.n_r,
                       dt=t_final / args.n_steps)
    rows = []
    if args.observable == "survival":
        if args.r0 <= params.a:
            raise UsageError("oracle survival needs r0 strictly inside "
                             "(a, r_max)")
        vals, sol_c, _ = richardson_survival(
            params, delta_at(args.r0), cfg, t_final, ts)
        centers, wts, _ = smearing_weights(params, delta_at(args.r0), cfg,
                                           sol_c.smear_sigma)
        mask = wts > 1e-12
        for t, (v, e) in zip(ts, vals):
            sa = sum(w * survival(params, t, r)
                     for r, w in zip(centers[mask], wts[mask]))
            sa /= wts[mask].sum()
            rows.append((t, sa, v, abs(v - sa) / max(abs(sa), 1e-300)))
    elif args.observable == "bound-survival":
        vals, _, _ = richardson_survival(params, BOUND_START, cfg,
                                         t_final, ts)
        for t, (v, e) in zip(ts, vals):
            sa = survival_bound(params, t)
            rows.append((t, sa, v, abs(v - sa) / max(abs(sa), 1e-300)))
    else:
        sol = solve(params, BOUND_START, cfg, t_final)
        for t in ts:
            ko = oracle_rate(sol, t)
            ka = rate_k(params, t)
            rows.append((t, ka, ko, abs(ko - ka) / max(abs(ka), 1e-300)))
    return _emit(args, _manifest(args, params,
                                 extra_cfg={"r_max": cfg.r_max,
                                            "n_r": cfg.n_r, "dt": cfg.dt,
                                            "theta": cfg.scheme_theta}),
                 ("t", "analytic", "oracle", "rel_diff"), rows)


def _add_common(sp):
    sp.add_argument("--D", type=float, required=True,
                    help="diffusion coefficient (length^2/time)")
    sp.add_argument("--a", type=float, required=True,
                    help="encounter radius (length)")
    sp.add_argument("--ka", type=str, required=True,
                    help="association constant, raw or h:<h_tilde>")
    sp.add_argument("--kd", type=float, required=True,
                    help="dissociation rate (1/time)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", type=str, default=None,
                    help="output path (default: stdout)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="revpair2d",
        description="Exact observables of a reversibly binding diffusive "
                    "pair in two dimensions")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("survival", help="S(t|r0) time series")
    _add_common(sp)
    sp.add_argument("--r0", type=float, required=True)
    sp.add_argument("--t-grid", dest="t_grid", type=str, required=True)
    sp.set_defaults(fn=cmd_survival)

    sp = sub.add_parser("bound-survival", help="S(t|*) time series")
    _add_common(sp)
    sp.add_argument("--t-grid", dest="t_grid", type=str, required=True)
    sp.set_defaults(fn=cmd_bound_survival)

    sp = sub.add_parser("rate", help="rate coefficient k(t) time series")
    _add_common(sp)
    sp.add_argument("--t-grid", dest="t_grid", type=str, required=True)
    sp.add_argument("--route", choices=("spectral", "survival-deriv",
                                        "bound-deriv"),
                    default="spectral")
    sp.set_defaults(fn=cmd_rate)

    sp = sub.add_parser("gf", help="Green's function radial profile")
    _add_common(sp)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--r0", type=float, default=None)
    sp.add_argument("--from-star", action="store_true",
                    help="bound-state source instead of --r0")
    sp.add_argument("--r-grid", dest="r_grid", type=str, required=True)
    sp.set_defaults(fn=cmd_gf)

    sp = sub.add_parser("offrate", help="exact off-rate report (JSON)")
    _add_common(sp)
    sp.set_defaults(fn=cmd_offrate, format="json")

    sp = sub.add_parser("identities", help="closure identity suite")
    _add_common(sp)
    sp.add_argument("--radii", type=str, default="1,1.5,2,3",
                    help="comma list of r/a values")
    sp.set_defaults(fn=cmd_identities, format="json")

    sp = sub.add_parser("oracle-compare",
                        help="analytic vs finite-difference oracle")
    _add_common(sp)
    sp.add_argument("--observable", choices=("survival", "bound-survival",
                                             "rate"), required=True)
    sp.add_argument("--r0", type=float, default=1.5)
    sp.add_argument("--t-grid", dest="t_grid", type=str, required=True)
    sp.add_argument("--n-r", dest="n_r", type=int, default=320)
    sp.add_argument("--n-steps", dest="n_steps", type=int, default=800)
    sp.set_defaults(fn=cmd_oracle_compare)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        #argparse exits 2 on usage errors already; preserve it.
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (AccuracyError, RegularizationError, IntegrandEvaluationError,
            OracleInstabilityError) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
