import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from brute import square_sum, square_tail_s4
from maxtheta import energy as E
from maxtheta import theta1d as T
from maxtheta.lattice import LatticeParam, hexagonal, sample_reduced, square
from maxtheta.theta2d import theta_alternating, theta_centered, theta_plain
from maxtheta.errors import NonPositiveParameter, NonSummablePotential, PoleOrDivergent

SPLITS = (E.EwaldSplit(0.8), E.EwaldSplit(1.25))


@pytest.fixture(scope="module")
def brute_square_4():
    N = 2000
    alt = square_sum(N, True, 4)
    plain = square_sum(N, False, 4) + square_tail_s4(N)
    return alt, plain


def test_square_s4_against_direct_sums(brute_square_4):
    alt, plain = brute_square_4
    assert abs(E.epstein_pm(square(), 4) - alt) < 1e-8
    assert abs(E.epstein_plain(square(), 4) - plain) < 1e-8
    assert abs(E.energy_pm(square(), E.inverse_power(4)) - alt) < 1e-8


@pytest.mark.parametrize(
    "s,ref", [(1, oracles.ZETA_PM_SQUARE_1), (3, oracles.ZETA_PM_SQUARE_3), (4, oracles.ZETA_PM_SQUARE_4)]
)
def test_square_alternating_closed_forms(s, ref):
    assert abs(E.epstein_pm(square(), s) - ref) < 1e-12


@pytest.mark.parametrize("s,ref", [(4, oracles.ZETA_SQUARE_4), (6, oracles.ZETA_SQUARE_6)])
def test_square_plain_closed_forms(s, ref):
    assert abs(E.epstein_plain(square(), s) - ref) < 1e-12


def test_square_madelung_neutral_windows():
    # boundary weights 1/2 on edges and 1/4 on corners make every window neutral
    N = 200
    k = np.arange(-N, N + 1.0)
    K, L = np.meshgrid(k, k)
    w = np.ones_like(K)
    w[np.abs(K) == N] *= 0.5
    w[np.abs(L) == N] *= 0.5
    r = np.hypot(K, L)
    with np.errstate(divide="ignore"):
        v = np.where(r > 0, (-1.0) ** (np.abs(K) + np.abs(L)) * w / r, 0.0)
    assert abs(math.fsum(v.ravel()) - E.epstein_pm(square(), 1)) < 5e-8


@pytest.mark.parametrize("s", [0.5, 1, 2, 3, 4, 6])
def test_split_independence(s):
    for L in (square(), hexagonal(), LatticeParam(0.2, 1.7)):
        a, b = (E.epstein_pm(L, s, sp) for sp in SPLITS)
        assert abs(a - b) < 1e-10
        if s != 2:
            a, b = (E.epstein_c(L, s, sp) for sp in SPLITS)
            assert abs(a - b) < 1e-10
        if s > 2:
            a, b = (E.epstein_plain(L, s, sp) for sp in SPLITS)
            assert abs(a - b) < 1e-10


@pytest.mark.parametrize("flavor,fn", [("alternating", E.epstein_pm), ("centered", E.epstein_c), ("plain", E.epstein_plain)])
def test_gamma_route_agrees(flavor, fn):
    for L in (square(), LatticeParam(0.35, 1.4)):
        for s in (3.0, 5.0):
            assert abs(E.epstein_gamma_route(L, s, flavor) - fn(L, s)) < 1e-11


def test_gamma_route_low_exponent():
    L = LatticeParam(0.1, 1.2)
    assert abs(E.epstein_gamma_route(L, 1.0, "alternating", E.EwaldSplit(1.3)) - E.epstein_pm(L, 1.0)) < 1e-11


def test_centered_against_direct_sum():
    L = LatticeParam(0.3, 1.2)
    N = 400
    k = np.arange(-N, N + 1.0) + 0.5
    K, Lm = np.meshgrid(k, k)
    q = (K ** 2 + 2 * L.x * K * Lm + (L.x ** 2 + L.y ** 2) * Lm ** 2) / L.y
    direct = math.fsum((q ** -3).ravel())
    # the window misses terms of size about q^-3 beyond |index| ~ N
    assert abs(E.epstein_c(L, 6) - direct) < 1e-7


def test_pole_and_domain_errors():
    with pytest.raises(PoleOrDivergent):
        E.epstein_c(square(), 2)
    with pytest.raises(PoleOrDivergent):
        E.epstein_plain(square(), 2)
    with pytest.raises(NonPositiveParameter):
        E.epstein_pm(square(), 0)
    with pytest.raises(NonSummablePotential):
        E.energy_pm(square(), E.inverse_power(1.5))
    with pytest.raises(PoleOrDivergent):
        E.rocksalt_energy(square(), 4, 6, 1.0)


def test_gaussian_energy_is_punctured_theta():
    L = hexagonal()
    v = E.energy_pm(L, E.gaussian(math.pi))
    assert abs(v - (theta_alternating(L, 1.0) - 1)) < 1e-14
    assert abs(E.energy_c(L, E.gaussian(math.pi)) - theta_centered(L, 1.0)) < 1e-14


def test_measure_is_linear():
    L = LatticeParam(0.2, 1.1)
    f = E.laplace_measure([(1.0, 0.5), (3.0, 2.0)])
    v = 0.5 * E.energy_pm(L, E.gaussian(1.0)) + 2 * E.energy_pm(L, E.gaussian(3.0))
    assert abs(E.energy_pm(L, f) - v) < 1e-14


def test_gaussian_duality_composition():
    L = LatticeParam(0.4, 1.3)
    t = 2.0
    c = E.energy_c(L, E.gaussian(t))
    pm = E.energy_pm(L, E.gaussian(math.pi ** 2 / t))
    assert abs(c - (pm + 1) * math.pi / t) < 1e-13


@pytest.mark.parametrize("s", [3, 4, 6])
def test_hexagonal_beats_square_alternating(s):
    assert E.epstein_pm(hexagonal(), s) >= E.epstein_pm(square(), s)


def test_hexagonal_minimizes_plain_zeta():
    Ls = sample_reduced(np.random.default_rng(5), 50)
    h = E.epstein_plain(hexagonal(), 4)
    assert all(E.epstein_plain(L, 4) >= h - 1e-13 for L in Ls)


def test_alternating_maximality_s3(rng):
    Ls = sample_reduced(rng, 50)
    x = np.array([L.x for L in Ls])
    y = np.array([L.y for L in Ls])
    v = E.epstein_pm((x, y), 3)
    assert np.all(v <= E.epstein_pm(hexagonal(), 3) + 1e-13)


@pytest.mark.parametrize("L", [square(), hexagonal()])
def test_plain_decreasing_in_s(L):
    vals = [E.epstein_plain(L, s) for s in np.linspace(3, 8, 11)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_vectorized_matches_scalar():
    Ls = [LatticeParam(0.1, 1.2), LatticeParam(0.45, 0.95), LatticeParam(0.0, 3.0)]
    xy = (np.array([L.x for L in Ls]), np.array([L.y for L in Ls]))
    v = E.epstein_c(xy, 3.5)
    for i, L in enumerate(Ls):
        assert abs(v[i] - E.epstein_c(L, 3.5)) < 1e-13


def test_rocksalt_composition():
    v = E.rocksalt_energy(square(), 6, 4, 1.0)
    assert abs(v - (oracles.ZETA_SQUARE_6 + oracles.ZETA_PM_SQUARE_4)) < 1e-12
    big = E.rocksalt_energy(square(), 6, 4, 1e12)
    assert abs(big - E.epstein_plain(square(), 6)) < 1e-10


def test_rocksalt_low_density_hexagonal_on_grid():
    xs = np.linspace(0, 0.5, 11)
    ys = np.linspace(math.sqrt(3) / 2, 2, 12)
    X, Y = np.meshgrid(xs, ys)
    keep = X ** 2 + Y ** 2 >= 1 - 1e-12
    X, Y = np.append(X[keep], 0.5), np.append(Y[keep], math.sqrt(3) / 2)
    v = E.rocksalt_energy((X, Y), 6, 4, 1e-4)
    # the grid also contains the hexagonal node, so compare values rather than indices
    assert v.max() <= v[-1] + 1e-9 * abs(v[-1])
    i = np.argmax(v)
    assert abs(X[i] - 0.5) < 1e-12 and abs(Y[i] - math.sqrt(3) / 2) < 1e-12


def test_madelung():
    a, b = (E.madelung_nacl3d(1.0, sp) for sp in SPLITS)
    assert abs(a - b) < 1e-10
    assert abs(a - oracles.MADELUNG_NACL) < 1e-12


def test_madelung_s4_direct():
    N = 120
    m = np.arange(-N, N + 1.0)
    M, P = np.meshgrid(m, m, indexing="ij")
    parts = []
    for a in m:
        r2 = a * a + M * M + P * P
        with np.errstate(divide="ignore"):
            w = np.where(r2 > 0, (-1.0) ** (abs(a) + np.abs(M) + np.abs(P)) / r2 ** 2, 0.0)
        parts.append(math.fsum(w.ravel()))
    assert abs(E.madelung_nacl3d(4.0) - math.fsum(parts)) < 1e-8


def test_cubic_alternating_theta_factorizes():
    m = np.arange(-30, 31.0)
    A, B, C = np.meshgrid(m, m, m, indexing="ij")
    direct = math.fsum(((-1.0) ** (np.abs(A + B + C)) * np.exp(-math.pi * (A * A + B * B + C * C))).ravel())
    assert abs(direct - T.theta4(1.0) ** 3) < 1e-12


@pytest.mark.parametrize("text,kind", [("pow:s=3", "inverse_power"), ("gauss:t=1.5", "gaussian"), ("measure:[(1,0.5),(2,1)]", "laplace_measure")])
def test_parse_potential_roundtrip(text, kind):
    f = E.parse_potential(text)
    assert f.kind == kind
    assert E.parse_potential(str(f)) == f


@pytest.mark.parametrize("bad", ["pow:t=3", "gauss:t=-1", "measure:[(1,-1)]", "coulomb", "measure:[(1,"])
def test_parse_potential_rejects(bad):
    with pytest.raises(ValueError):
        E.parse_potential(bad)


def test_potential_values():
    r = np.array([1.0, 4.0])
    assert np.allclose(E.inverse_power(2)(r), [1.0, 0.25])
    assert np.allclose(E.gaussian(1)(r), np.exp(-r))


@given(st.floats(0.3, 4))
def test_negativity_gaussian(t):
    for L in (square(), hexagonal(), LatticeParam(0.25, 2.0)):
        assert E.energy_pm(L, E.gaussian(t)) < 0


def test_plain_theta_consistency():
    # plain Epstein at large s is dominated by the shortest vectors
    L = square()
    assert abs(E.epstein_plain(L, 40) - 4) < 1e-5
    assert theta_plain(L, 1.0) > 1
