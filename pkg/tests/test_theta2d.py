import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from maxtheta import theta1d as T
from maxtheta import theta2d as D
from maxtheta.errors import DomainViolation, NotReduced, NotReducedWarning
from maxtheta.lattice import LatticeParam, hexagonal, reduce_param, sample_reduced, square

R3_2 = math.sqrt(3) / 2
alphas = st.floats(0.1, 10)
reduced_pts = st.builds(
    lambda x, u: LatticeParam(x, math.sqrt(1 - x * x) + u), st.floats(0, 0.5), st.floats(0, 3)
)


def brute(L, alpha, shift=(0.0, 0.0), character=None, N=40):
    """Direct double sum over a square index window."""
    k, l = np.meshgrid(np.arange(-N, N + 1.0), np.arange(-N, N + 1.0))
    kk, ll = k + shift[0], l + shift[1]
    q = (kk ** 2 + 2 * L.x * kk * ll + (L.x ** 2 + L.y ** 2) * ll ** 2) / L.y
    w = np.exp(-math.pi * alpha * q)
    if character is not None:
        w = w * np.cos(2 * math.pi * (k * character[1] - l * character[0]))
    return math.fsum(w.ravel())


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.5])
def test_square_factorizations(alpha):
    S = square()
    assert rel(D.theta_plain(S, alpha), T.theta3(alpha) ** 2) < 1e-14
    assert rel(D.theta_alternating(S, alpha), T.theta4(alpha) ** 2) < 1e-14
    assert rel(D.theta_centered(S, alpha), T.theta2(alpha) ** 2) < 1e-14


def test_hexagonal_centered_oracle():
    v = D.theta_centered(hexagonal(), 1.0)
    assert rel(v, oracles.HEX_CENTERED_AT_1) < 1e-13
    assert rel(v, 0.5 * T.theta2(R3_2) * T.theta2(1 / (2 * math.sqrt(3)))) < 1e-13


@pytest.mark.parametrize("flavor", ["plain", "centered", "alternating"])
@pytest.mark.parametrize("alpha", [1.0, 1.7, 4.0])
def test_against_direct_double_sum(flavor, alpha):
    L = LatticeParam(0.31, 1.13)
    if flavor == "plain":
        ref = brute(L, alpha)
    elif flavor == "centered":
        ref = brute(L, alpha, shift=(0.5, 0.5))
    else:
        ref = brute(L, alpha, character=(0.5, 0.5))
    assert rel(D.theta_grid(flavor, L.x, L.y, alpha), ref) < 1e-13


def test_shift_and_character_special_cases():
    L = LatticeParam(0.2, 1.3)
    assert rel(D.theta_shifted(L, 0, 0, 1.4), D.theta_plain(L, 1.4)) < 1e-14
    assert rel(D.theta_character(L, 0.5, 0.5, 1.4), D.theta_alternating(L, 1.4)) < 1e-14
    assert rel(D.theta_shifted(L, 1.3, -0.6, 0.8), D.theta_shifted(L, 0.3, 0.4, 0.8)) < 1e-13
    assert rel(D.theta_shifted(L, 0.3, 0.4, 2.0), brute(L, 2.0, shift=(0.3, 0.4))) < 1e-13
    assert rel(D.theta_character(L, 0.3, 0.4, 2.0), brute(L, 2.0, character=(0.3, 0.4))) < 1e-13


@given(reduced_pts, alphas)
def test_functional_equations(L, alpha):
    tc = D.theta_centered(L, alpha)
    assert rel(tc, D.theta_alternating(L, 1 / alpha) / alpha) < 1e-12
    assert rel(D.theta_plain(L, alpha), D.theta_plain(L, 1 / alpha) / alpha) < 1e-12


@given(reduced_pts, alphas, st.floats(0, 1), st.floats(0, 1))
def test_shift_character_duality(L, alpha, xi, eta):
    a = D.theta_shifted(L, xi, eta, alpha)
    b = D.theta_character(L, xi, eta, 1 / alpha) / alpha
    assert abs(a - b) < 1e-12 * max(abs(a), abs(b), 1e-300) + 1e-300


def test_self_dual_point():
    for L in sample_reduced(np.random.default_rng(1), 20):
        assert rel(D.theta_centered(L, 1.0), D.theta_alternating(L, 1.0)) < 1e-13


@given(st.floats(0.5, 4), st.floats(0.1, 10))
def test_factorization_at_half(y, alpha):
    # the identity is about the (1/2, y) basis itself, so no reduction
    v = D.theta_grid("centered", 0.5, y, alpha)
    assert rel(v, D.theta_c_factorized(y, alpha)) < 1e-12
    if y >= R3_2:
        assert rel(D.theta_centered(LatticeParam(0.5, y), alpha), v) < 1e-15


def test_factorized_maximal_at_half():
    for alpha in (0.5, 1.0, 2.0):
        top = D.theta_c_factorized(0.5, alpha)
        for y in np.linspace(0.2, 3, 57):
            assert D.theta_c_factorized(y, alpha) <= top * (1 + 1e-15)


def test_factorized_duality_at_hexagonal():
    for alpha in (0.4, 2.0):
        assert rel(alpha * D.theta_c_factorized(R3_2, alpha), D.theta_alternating(hexagonal(), 1 / alpha)) < 1e-12


@given(st.sampled_from([0.5, 1.0, 2.0]), st.floats(0.25, 4))
def test_product_ratio(t, y):
    r = D.product_ratio(t, y)
    assert r <= 1 + 1e-15
    if abs(y - 1) > 1e-3:
        assert r < 1


@given(reduced_pts, alphas)
def test_global_bounds(L, alpha):
    assert D.theta_alternating(L, alpha) < 1
    assert D.theta_centered(L, alpha) < 1 / alpha


def test_montgomery_plain_on_grid():
    xs = np.linspace(0, 0.5, 101)
    ys = np.linspace(R3_2, 3, 100)
    X, Y = np.meshgrid(xs, ys)
    keep = X ** 2 + Y ** 2 >= 1 - 1e-12
    vals = D.theta_grid("plain", X[keep], Y[keep], 2.0)
    assert vals.min() >= D.theta_plain(hexagonal(), 2.0) - 1e-15


@pytest.mark.parametrize("alpha", [0.5, 1, 2, 4])
def test_centered_monotone(alpha):
    for y in (0.9, 1.0, 1.5):
        v = D.theta_grid("centered", np.linspace(0, 0.5, 21), y, alpha)
        assert np.all(np.diff(v) > 0)
    v = D.theta_grid("centered", 0.5, np.linspace(R3_2, 4, 30), alpha)
    assert np.all(np.diff(v) < 0)


def test_plain_and_alternating_invariant_after_reduction():
    L = LatticeParam(1.3, 0.4)
    R = reduce_param(L)
    assert rel(D.theta_plain(L, 1.3), D.theta_plain(R, 1.3)) < 1e-12
    # a reduced basis keeps the alternating value stable under another reduction
    assert D.theta_alternating(reduce_param(R), 1.3) == D.theta_alternating(R, 1.3)


def test_centered_reduces_with_warning():
    L = LatticeParam(0, 0.5)
    with pytest.warns(NotReducedWarning):
        r = D.evaluate(D.ThetaQuery(L, 1.0, "centered"))
    assert r.L == LatticeParam(0, 2) and r.reduced_from == L
    with pytest.raises(NotReduced):
        D.theta_centered(L, 1.0, reduce=False)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        D.theta_centered(hexagonal(), 1.0)


def test_result_reports_radius():
    r = D.evaluate(D.ThetaQuery(hexagonal(), 0.25, "alternating"))
    assert r.alpha_eff == 4 and min(r.radius) >= 1


@given(reduced_pts, st.floats(0.2, 6), st.sampled_from(["plain", "alternating"]))
def test_punctured(L, alpha, flavor):
    full = D.theta_grid(flavor, L.x, L.y, alpha)
    p = D.theta_punctured(flavor, L.x, L.y, alpha)
    assert abs(p - (full - 1)) < 1e-13 * max(1, full)


def test_punctured_large_alpha_no_cancellation():
    p = D.theta_punctured("plain", 0, 1, 30.0)
    assert rel(p, 4 * math.exp(-30 * math.pi)) < 1e-10


def test_dx_zero_on_axis_and_positive_inside():
    assert abs(D.dtheta_c_dx(LatticeParam(0, 1.2), 1.0)) < 1e-15
    assert D.dtheta_c_dx(LatticeParam(0.25, 1.0), 1.0) > 0


def _fd(f, v, h=1e-6):
    return (f(v + h) - f(v - h)) / (2 * h)


def test_derivatives_against_finite_differences():
    x, y, a = 0.3, 1.1, 2.0
    for flavor, fn in [("centered", D.dtheta_c_dx), ("alternating", D.dtheta_pm_dx)]:
        fd = _fd(lambda s: D.theta_grid(flavor, s, y, a), x)
        assert rel(fn(LatticeParam(x, y), a), fd) < 1e-6
        assert rel(D.dtheta_dx(LatticeParam(x, y), a, flavor), fd) < 1e-6
        fd = _fd(lambda s: D.theta_grid(flavor, x, s, a), y)
        assert rel(D.dtheta_dy(LatticeParam(x, y), a, flavor), fd) < 1e-6
    for flavor, fn in [("centered", D.dtheta_c_dy), ("alternating", D.dtheta_pm_dy)]:
        fd = _fd(lambda s: D.theta_grid(flavor, 0.5, s, a), 1.0)
        assert rel(fn(LatticeParam(0.5, 1.0), a), fd) < 1e-6


@given(st.floats(0.02, 0.48), st.floats(0.75, 3), st.floats(0.3, 4))
def test_nested_and_generic_x_derivatives_agree(x, y, alpha):
    L = LatticeParam(x, y)
    a = D.dtheta_c_dx(L, alpha)
    b = D.dtheta_dx(L, alpha, "centered")
    assert abs(a - b) < 1e-10 * max(abs(a), 1e-300) + 1e-290


def test_dy_zero_at_half():
    # critical point of the factorised product
    assert abs(D.dtheta_c_dy(LatticeParam(0.5, 0.5), 1.3, guard=True)) < 1e-13


def test_derivative_guards():
    with pytest.raises(DomainViolation):
        D.dtheta_c_dx(LatticeParam(0.7, 1.0), 1.0)
    with pytest.raises(DomainViolation):
        D.dtheta_c_dy(LatticeParam(0.3, 1.0), 1.0)
    assert math.isfinite(D.dtheta_c_dy(LatticeParam(0.3, 1.0), 1.0, guard=False))


def test_mirror_symmetry():
    xs = np.linspace(0, 0.5, 11)
    for flavor in ("plain", "centered", "alternating"):
        a = D.theta_grid(flavor, xs, 1.2, 1.5)
        b = D.theta_grid(flavor, -xs, 1.2, 1.5)
        assert np.max(np.abs(a - b) / a) < 1e-14


def test_grid_broadcasts():
    v = D.theta_grid("centered", np.zeros((3, 1)), np.ones((1, 4)), np.array([0.5, 1, 2, 4]))
    assert v.shape == (3, 4)
