import cmath
import math

import numpy as np
import pytest

import gaugedyn as gd


def test_fixed_points_and_phi():
    p = gd.solve_fixed_points(0.1)
    assert abs(0.1 * math.exp(p.beta) - p.beta) < 1e-12 * p.beta
    g = gd.Gauge(0.1, 1.0)
    assert g.phi(g.beta) == 0.0
    x = 10.0
    assert g.phi_log(math.log(0.1) + x) == pytest.approx(g.beta * g.phi(x), rel=1e-10)
    assert gd.koenigs_coefficients(0.1)[2] == pytest.approx(1 / (2 * (p.beta - 1)), abs=1e-12)


def test_domain_errors_map_to_value_error():
    with pytest.raises(ValueError):
        gd.solve_fixed_points(0.5)
    with pytest.raises(gd.DomainError):
        gd.Gauge(0.1, 1.0).phi(1.0)


def test_mittag_leffler_closed_forms():
    for z in (0.5 + 1j, -3.0, 4j):
        assert abs(gd.ml_series(1.0, z) - cmath.exp(z)) < 1e-12 * abs(cmath.exp(z))
    assert gd.ml_series(0.5, 9.0).real == pytest.approx(math.cosh(3.0), rel=1e-13)
    p = gd.MLParams(2.0)
    assert p.log_f(3.0).real == pytest.approx(math.log(gd.ml_series(2.0, 3.0).real), rel=1e-12)


def test_scans_are_masks_and_thread_independent():
    f = gd.Family.exponential(0.1)
    a = gd.escape_scan(f, [-2, 8, -8, 8], 64, 48, threads=1)
    b = gd.escape_scan(f, [-2, 8, -8, 8], 64, 48, threads=3)
    assert a.shape == (48, 64)
    assert a.dtype == np.uint8
    assert np.array_equal(a, b)
    assert 0 < a.sum() < a.size
    t = gd.tract_scan(f, [0, 4, -math.pi, math.pi], 32, 32)
    assert set(np.unique(t)) <= {0, 1}


def test_besicovitch_and_thresholds():
    rng = np.random.default_rng(1)
    req = [(complex(*rng.uniform(0, 50, 2)), float(rng.uniform(0.5, 5))) for _ in range(300)]
    chosen, overlap = gd.besicovitch_cover(req)
    assert 1 <= overlap <= 16
    assert len(chosen) <= len(req)
    lower, upper = gd.gamma_thresholds(2.0, 0.01, 2.0, 16, 0.1)
    beta = gd.solve_fixed_points(0.1).beta
    assert lower == pytest.approx((math.log(2) - math.log(0.01)) / math.log(beta))
    assert upper < lower


def test_verify_and_cli():
    lines = gd.run_suite("linearizer")
    assert lines and all(ok for _, _, ok, _ in lines)
    code, out, err = gd.cli(["phi", "--lambda", "0.1", "--xs", "4,10"])
    assert code == 0 and err == ""
    assert out.splitlines()[0] == "x,phi"
    assert gd.cli(["phi", "--lambda", "2", "--xs", "4"])[0] == 1


def test_module_under_test_is_the_requested_build():
    import os

    want = os.environ.get("GAUGEDYN_EXPECT_MODULE_DIR")
    if want is None:
        pytest.skip("no build directory requested")
    assert os.path.samefile(os.path.dirname(gd._core.__file__), want)
