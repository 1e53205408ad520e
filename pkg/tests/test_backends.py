import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revpair2d import bench
from revpair2d._backend import BACKEND_NAME, core, get_backend

PY = get_backend("python")
try:
    C = get_backend("c")
    HAVE_C = True
except ImportError:
    C = None
    HAVE_C = False

needs_c = pytest.mark.skipif(not HAVE_C, reason="compiled backend not built")

X_GRID = np.concatenate([
    [0.0],
    np.geomspace(1e-8, 1e6, 400),
])


def _scaled_diff(a, b):
    return np.max(np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a),
                                                             np.abs(b))))


def test_backend_name_reported():
    assert BACKEND_NAME in ("c", "python")
    assert core.BACKEND_NAME == BACKEND_NAME


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        get_backend("fortran")


@needs_c
def test_bessel4_agreement():
    x = X_GRID[1:]
    for py_v, c_v in zip(PY.bessel4(x), C.bessel4(x)):
        assert _scaled_diff(py_v, c_v) < 5e-13


@needs_c
def test_contact_scaled_agreement():
    x = X_GRID
    for h, kd in ((1.0, 1.0), (0.5, 2.0), (0.0, 1.0), (10.0, 0.1)):
        s1p, s2p = PY.contact_scaled(x, h, kd)
        s1c, s2c = C.contact_scaled(x, h, kd)
        assert _scaled_diff(s1p, s1c) < 5e-13
        assert _scaled_diff(s2p, s2c) < 5e-13


@needs_c
@pytest.mark.parametrize("factory,args", [
    ("make_f_reg", ()),
    ("make_rate", ()),
    ("make_bound", ()),
    ("make_surv", (1.5,)),
    ("make_surv", (1.0,)),
    ("make_gf", (1.0, 1.5)),
    ("make_gf", (2.0, 2.0)),
    ("make_pt", (1.0, 2.0)),
    ("make_pt", (1.5, 3.0)),
    ("make_pp_over_x", (1.5,)),
    ("make_pp_over_x", (1.0,)),
])
def test_factory_agreement(factory, args):
    for h, kd in ((1.0, 1.0), (0.5, 2.0), (2.0, 0.5)):
        fp = getattr(PY, factory)(h, kd, *args)
        fc = getattr(C, factory)(h, kd, *args)
        vp = np.asarray(fp(X_GRID))
        vc = np.asarray(fc(X_GRID))
        assert np.all(np.isfinite(vp))
        assert np.all(np.isfinite(vc))
        assert _scaled_diff(vp, vc) < 5e-13


@pytest.mark.parametrize("backend", ["python", "c"])
def test_scaled_contact_limits(backend):
    #s1 -> 0 quadratically, s2 -> 2 kd~/pi as xi -> 0; both must be
    #finite and exact at xi = 0.
    if backend == "c" and not HAVE_C:
        pytest.skip("compiled backend not built")
    b = get_backend(backend)
    for h, kd in ((1.0, 1.0), (0.3, 2.7)):
        s1, s2 = b.contact_scaled(np.array([0.0, 1e-12, 1e-6]), h, kd)
        assert s1[0] == 0.0
        assert s2[0] == pytest.approx(2.0 * kd / math.pi, rel=1e-14)
        assert abs(s1[2]) < 1e-11
        f = b.make_f_reg(h, kd)
        assert f(np.array([0.0]))[0] == pytest.approx((h / kd) ** 2,
                                                      rel=1e-14)


@given(st.floats(min_value=1e-3, max_value=1e4))
@settings(max_examples=150, deadline=None)
def test_wronskian_property_active_backend(x):
    j0, j1, y0, y1 = core.bessel4(np.array([x]))
    lhs = j1[0] * y0[0] - y1[0] * j0[0]
    rhs = 2.0 / (math.pi * x)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


@needs_c
@given(st.floats(min_value=1e-6, max_value=1e3),
       st.floats(min_value=0.05, max_value=5.0),
       st.floats(min_value=0.05, max_value=5.0))
@settings(max_examples=100, deadline=None)
def test_f_reg_agreement_property(x, h, kd):
    fp = PY.make_f_reg(h, kd)(np.array([x]))[0]
    fc = C.make_f_reg(h, kd)(np.array([x]))[0]
    assert fp == pytest.approx(fc, rel=1e-12, abs=1e-300)


def test_bench_smoke(capsys):
    results = bench.run(sizes=(2048,), verbose=True)
    out = capsys.readouterr().out
    assert "bessel4" in out
    assert ("python", 2048) in results
    for timings in results.values():
        assert len(timings) == 3
        assert all(t > 0.0 for t in timings)
