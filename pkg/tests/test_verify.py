import json
import math

import mpmath
import numpy as np
import pytest

from maxtheta import theta2d
from maxtheta import verify as V
from maxtheta.lattice import LatticeParam

R3_2 = math.sqrt(3) / 2


def mp_series(term, start, stop=60):
    with mpmath.workdps(40):
        return float(mpmath.fsum(term(mpmath.mpf(n)) for n in range(start, stop)))


def test_constants_match_independent_sums():
    pi = mpmath.pi
    ref = [
        mp_series(lambda l: 4 * (l + 0.5) ** 2 * mpmath.exp(-pi / 2 * (l * l + l - 0.5)), 1),
        mp_series(lambda l: 4 * (l + 0.5) ** 2 * mpmath.exp(-pi * (l * l + l)), 1),
        mp_series(lambda l: l * l * mpmath.exp(-pi / 2 * (l * l - 1.5)), 2),
        mp_series(lambda l: l * l * mpmath.exp(-pi * (l * l - 1)), 2),
        mp_series(lambda k: (2 * k + 1) * mpmath.exp(-pi * (k * k + k)), 1),
        mp_series(lambda k: (2 * k + 1) ** 2 * mpmath.exp(-pi * (k * k + k)), 1),
    ]
    for c, r in zip(V.reproduce_constants(), ref):
        assert abs(c.computed - r) < 1e-15 * max(1, r)


def test_constant_check_semantics():
    assert V.ConstantCheck("a", 0.1234, 0.1234, 5e-5, "=").ok
    assert not V.ConstantCheck("a", 0.1235, 0.1234, 5e-5, "=").ok
    assert V.ConstantCheck("b", 0.1, 0.2, 0.0, "<").ok
    assert not V.ConstantCheck("b", 0.2, 0.2, 0.0, "<").ok


def test_shifted_exponent_reading_is_off_by_exp_half_pi():
    cs = {c.name: c for c in V.reproduce_constants() + V.constant_diagnostics()}
    plain = cs["4 sum_{l>=1} (l+1/2)^2 e^{-pi(l^2+l)}"].computed
    shifted = cs["4 sum_{l>=1} (l+1/2)^2 e^{-pi(l^2+l-1/2)}"].computed
    assert abs(shifted / plain - math.exp(math.pi / 2)) < 1e-12
    assert cs["4 sum_{l>=1} (l+1/2)^2 e^{-pi(l^2+l)} < 2999/3001"].ok


def test_constant_reports_gate_only_printed_values():
    reps = V.check_constants()
    assert sum(r.gate for r in reps) == 6
    assert all(r.line().startswith("INFO") for r in reps if not r.gate)


def test_scan_grid_contains_hexagonal_node():
    X, Y = V.scan_grid(7, 9)
    assert X.shape == (7, 9)
    assert X[-1, 0] == 0.5 and Y[-1, 0] == R3_2
    assert np.all(X ** 2 + Y ** 2 >= 1 - 1e-12)
    assert np.all(Y <= 4 + 1e-12)


def test_scan_spec_validation():
    with pytest.raises(ValueError):
        V.ScanSpec(nx=1)
    with pytest.raises(ValueError):
        V.ScanSpec(flavor="shifted")
    with pytest.raises(ValueError):
        V.ScanSpec(alphas=(0.0,))


@pytest.mark.parametrize("flavor,alpha", [("centered", 1.0), ("plain", 2.0), ("alternating", 0.5)])
def test_scan_extremum_small(flavor, alpha):
    (r,) = V.scan_extremum(V.ScanSpec((alpha,), 40, 40, 4.0, flavor))
    assert r.at_hexagonal


def test_centered_and_alternating_scans_agree_at_one():
    a = V.scan_extremum(V.ScanSpec((1.0,), 30, 30, 4.0, "centered"))[0]
    b = V.scan_extremum(V.ScanSpec((1.0,), 30, 30, 4.0, "alternating"))[0]
    assert np.max(np.abs(a.V - b.V) / a.V) < 1e-13


def test_scan_mirror_strip():
    X, Y = V.scan_grid(11, 11)
    for flavor in ("centered", "alternating", "plain"):
        a = theta2d.theta_grid(flavor, X, Y, 1.5)
        b = theta2d.theta_grid(flavor, -X, Y, 1.5)
        assert np.max(np.abs(a - b) / a) < 1e-14


def test_first_lemma_small_grid():
    r = V.check_first_main_lemma(0.42, 8, 8)
    assert r.ok and r.gate and r.details["min_dc_dx"] > 0


def test_derivative_tends_to_zero_at_axis():
    vals = [theta2d.dtheta_c_dx(LatticeParam(x, 1.0), 1.0) for x in (1e-2, 1e-3, 1e-4)]
    assert all(v > 0 for v in vals)
    assert vals[2] < vals[1] < vals[0]


def test_second_lemma_examples():
    r = V.check_second_main_lemma(1.0, ys=[0.87, 1.0, 1.5, 3.0])
    assert r.ok


def test_second_lemma_fd_at_alpha2_y1():
    a, y, h = 2.0, 1.0, 1e-5
    with mpmath.workdps(32):
        fd = V._fd(lambda d: V.mp_theta("centered", 0.5, y + d, a), mpmath.mpf(h))
    assert abs(theta2d.dtheta_c_dy(LatticeParam(0.5, y), a) - float(fd)) < 1e-6 * abs(float(fd))


def test_mp_theta_matches_double_precision():
    for flavor in ("centered", "alternating"):
        for a in (0.6, 1.0, 2.5):
            v = float(V.mp_theta(flavor, 0.2, 1.3, a))
            assert abs(v - theta2d.theta_grid(flavor, 0.2, 1.3, a)) < 1e-14 * v


def test_derivative_fd_check_small():
    r = V.check_derivative_fd(n=3, seed=4)
    assert r.ok and r.details["max_rel"] < 1e-8


def test_bounds_suite_small():
    reps = V.check_bounds_suite(10, 12)
    assert all(r.ok for r in reps)


def test_negativity_and_maximality_small():
    assert all(r.ok for r in V.check_negativity(n_lattices=4))
    assert all(r.ok for r in V.check_maximality(n_lattices=6))


def test_sample_potentials_deterministic():
    a = V.sample_potentials(np.random.default_rng(9))
    b = V.sample_potentials(np.random.default_rng(9))
    assert a == b and len(a) == 7


def test_conjecture_probe_is_informational():
    r = V.probe_fixed_x_conjecture(xs=(0.0, 0.3), alphas=(1.0,), ny=6)
    assert not r.gate and r.line().startswith("INFO")


def test_run_suite_unknown():
    with pytest.raises(ValueError):
        V.run_suite("everything")


def test_reports_serialize():
    reps = V.run_suite("lemma2")
    doc = json.loads(V.report_json(reps))
    assert doc["ok"] is True and len(doc["checks"]) == 3
    txt = V.report_text(reps)
    assert txt.splitlines()[-1].startswith("OK: 3/3")
    assert V.suite_ok(reps)


def test_timing_recorded():
    r = V.check_second_main_lemma(3.0)
    assert r.seconds > 0
