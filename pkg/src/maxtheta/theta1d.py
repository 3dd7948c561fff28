"""One-dimensional theta nulls, shifted/alternating theta functions and the
auxiliary bound functions used for the two-dimensional monotonicity lemmas.

Every evaluator routes through a Poisson/Jacobi identity so that the series
actually summed has Gaussian width ``t >= 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NonPositiveParameter, require_positive
from .series import DEFAULT_BUDGET, SeriesBudget, gauss_series

PI = math.pi
TWO_PI = 2 * math.pi

# |sin| below this switches Q and Q2 to their l'Hopital limits
SINGULAR_GUARD = 1e-8


@dataclass(frozen=True)
class ThetaArg:
    """Shift ``beta`` (stored modulo 1) and width ``t`` of a 1D theta series."""

    beta_raw: float
    t: float
    beta: float = field(init=False)

    def __post_init__(self):
        require_positive(t=self.t)
        object.__setattr__(self, "beta", self.beta_raw - math.floor(self.beta_raw))


def _sign(k: int) -> float:
    return -1.0 if k & 1 else 1.0


# ---------------------------------------------------------------------------
# theta nulls


def _theta2_direct(t, budget=DEFAULT_BUDGET):
    return gauss_series(lambda k, u: 1.0, 0.5, t, budget)


def _theta3_direct(t, budget=DEFAULT_BUDGET):
    return gauss_series(lambda k, u: 1.0, 0.0, t, budget)


def _theta4_direct(t, budget=DEFAULT_BUDGET):
    return gauss_series(lambda k, u: _sign(k), 0.0, t, budget)


def theta2(t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """sum_k exp(-pi t (k+1/2)^2)."""
    require_positive(t=t)
    if t >= 1:
        return _theta2_direct(t, budget)
    return _theta4_direct(1 / t, budget) / math.sqrt(t)


def theta3(t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """sum_k exp(-pi t k^2)."""
    require_positive(t=t)
    if t >= 1:
        return _theta3_direct(t, budget)
    return _theta3_direct(1 / t, budget) / math.sqrt(t)


def theta4(t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """sum_k (-1)^k exp(-pi t k^2)."""
    require_positive(t=t)
    if t >= 1:
        return _theta4_direct(t, budget)
    return _theta2_direct(1 / t, budget) / math.sqrt(t)


def theta4_product(t: float, n_factors: int) -> float:
    """Truncated Jacobi triple product for theta4, an oracle independent of the series."""
    require_positive(t=t)
    if n_factors < 1:
        raise NonPositiveParameter("n_factors must be >= 1")
    out = 1.0
    for k in range(1, n_factors + 1):
        out *= -math.expm1(-2 * PI * k * t) * math.expm1(-(2 * k - 1) * PI * t) ** 2
    return out


def dtheta2_dt(t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Derivative of theta2 with respect to its width."""
    require_positive(t=t)
    if t >= 1:
        return gauss_series(lambda k, u: -PI * u * u, 0.5, t, budget, degree=2, bound=PI)
    s = 1 / t
    th4 = _theta4_direct(s, budget)
    dth4 = gauss_series(lambda k, u: -PI * u * u * _sign(k), 0.0, s, budget, degree=2, bound=PI)
    # theta2(t) = t^{-1/2} theta4(1/t)
    return -0.5 * t**-1.5 * th4 - t**-2.5 * dth4


# ---------------------------------------------------------------------------
# shifted and character thetas; all ``*_direct`` helpers need t >= 1 for speed
# but are valid for any t > 0.


def _vt(beta, t, budget):
    return gauss_series(lambda k, u: 1.0, beta, t, budget)


def _vt_hat(beta, t, budget):
    b = beta - math.floor(beta)
    return gauss_series(lambda k, u: math.cos(TWO_PI * k * b), 0.0, t, budget)


def _vt2(beta, t, budget):
    return gauss_series(lambda k, u: _sign(k), beta, t, budget)


def _vt2_hat(beta, t, budget):
    b = beta - 2 * math.floor(beta / 2)
    return gauss_series(lambda k, u: math.cos(TWO_PI * u * b), 0.5, t, budget)


def vartheta(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """sum_k exp(-pi t (k+beta)^2); even and 1-periodic in beta."""
    require_positive(t=t)
    if t >= 1:
        return _vt(beta, t, budget)
    return _vt_hat(beta, 1 / t, budget) / math.sqrt(t)


def vartheta_hat(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """sum_k exp(-pi t k^2) cos(2 pi k beta)."""
    require_positive(t=t)
    if t >= 1:
        return _vt_hat(beta, t, budget)
    return _vt(beta, 1 / t, budget) / math.sqrt(t)


def vartheta2(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """sum_k (-1)^k exp(-pi t (k+beta)^2)."""
    require_positive(t=t)
    if t >= 1:
        return _vt2(beta, t, budget)
    return _vt2_hat(beta, 1 / t, budget) / math.sqrt(t)


def vartheta2_hat(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """sum_k exp(-pi t (k+1/2)^2) cos(2 pi (k+1/2) beta); 2-periodic in beta."""
    require_positive(t=t)
    if t >= 1:
        return _vt2_hat(beta, t, budget)
    return _vt2(beta, 1 / t, budget) / math.sqrt(t)


# ---------------------------------------------------------------------------
# beta-derivatives


def _d_vt(beta, t, budget):
    return gauss_series(lambda k, u: -TWO_PI * t * u, beta, t, budget, degree=1, bound=TWO_PI * t)


def _d_vt_hat(beta, t, budget):
    b = beta - math.floor(beta)
    return gauss_series(
        lambda k, u: -TWO_PI * k * math.sin(TWO_PI * k * b), 0.0, t, budget, degree=1, bound=TWO_PI
    )


def _d_vt2(beta, t, budget):
    return gauss_series(
        lambda k, u: -TWO_PI * t * u * _sign(k), beta, t, budget, degree=1, bound=TWO_PI * t
    )


def _d_vt2_hat(beta, t, budget):
    b = beta - 2 * math.floor(beta / 2)
    return gauss_series(
        lambda k, u: -TWO_PI * u * math.sin(TWO_PI * u * b), 0.5, t, budget, degree=1, bound=TWO_PI
    )


def _d2_vt(beta, t, budget):
    c = TWO_PI * t
    return gauss_series(lambda k, u: (c * u) ** 2 - c, beta, t, budget, degree=2, bound=c * c + c)


def _d2_vt_hat(beta, t, budget):
    b = beta - math.floor(beta)
    c = 4 * PI * PI
    return gauss_series(
        lambda k, u: -c * k * k * math.cos(TWO_PI * k * b), 0.0, t, budget, degree=2, bound=c
    )


def _d2_vt2(beta, t, budget):
    c = TWO_PI * t
    return gauss_series(
        lambda k, u: ((c * u) ** 2 - c) * _sign(k), beta, t, budget, degree=2, bound=c * c + c
    )


def _d2_vt2_hat(beta, t, budget):
    b = beta - 2 * math.floor(beta / 2)
    c = 4 * PI * PI
    return gauss_series(
        lambda k, u: -c * u * u * math.cos(TWO_PI * u * b), 0.5, t, budget, degree=2, bound=c
    )


def d_vartheta(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """d/dbeta of vartheta; odd and 1-periodic."""
    require_positive(t=t)
    if t >= 1:
        return _d_vt(beta, t, budget)
    return _d_vt_hat(beta, 1 / t, budget) / math.sqrt(t)


def d_vartheta_hat(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    require_positive(t=t)
    if t >= 1:
        return _d_vt_hat(beta, t, budget)
    return _d_vt(beta, 1 / t, budget) / math.sqrt(t)


def d_vartheta2(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    require_positive(t=t)
    if t >= 1:
        return _d_vt2(beta, t, budget)
    return _d_vt2_hat(beta, 1 / t, budget) / math.sqrt(t)


def d_vartheta2_hat(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    require_positive(t=t)
    if t >= 1:
        return _d_vt2_hat(beta, t, budget)
    return _d_vt2(beta, 1 / t, budget) / math.sqrt(t)


def d2_vartheta_hat(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    require_positive(t=t)
    if t >= 1:
        return _d2_vt_hat(beta, t, budget)
    return _d2_vt(beta, 1 / t, budget) / math.sqrt(t)


def d2_vartheta2_hat(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    require_positive(t=t)
    if t >= 1:
        return _d2_vt2_hat(beta, t, budget)
    return _d2_vt2(beta, 1 / t, budget) / math.sqrt(t)


# ---------------------------------------------------------------------------
# auxiliary ratios


def _fold(beta: float) -> float:
    """Map beta to [0, 1/2] using evenness and period 1."""
    b = beta - math.floor(beta)
    return min(b, 1.0 - b)


def Q_factored(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> tuple[float, float]:
    """Return ``(scale, r)`` with ``Q(beta; t) = scale * r``.

    For t < 1 the scale is ``t**-1.5`` and ``r`` is summed on the dual side,
    which keeps comparisons against the bounds free of the rounding in
    ``t**-1.5``. For t >= 1 the scale is 1.
    """
    require_positive(t=t)
    b = _fold(beta)
    s2 = math.sin(TWO_PI * b)
    singular = abs(s2) < SINGULAR_GUARD
    b0 = 0.0 if b < 0.25 else 0.5
    if t >= 1:
        if singular:
            return 1.0, -_d2_vt_hat(b0, t, budget) / (TWO_PI * math.cos(TWO_PI * b0))
        return 1.0, -_d_vt_hat(b, t, budget) / s2
    s = 1 / t
    if singular:
        r = gauss_series(lambda k, u: 1 - TWO_PI * s * u * u, b0, s, budget, degree=2, bound=TWO_PI * s + 1)
        return t**-1.5, r / math.cos(TWO_PI * b0)
    r = gauss_series(lambda k, u: u, b, s, budget, degree=1)
    return t**-1.5, TWO_PI * r / s2


def Q2_factored(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> tuple[float, float]:
    """Same as :func:`Q_factored` for ``Q2``."""
    require_positive(t=t)
    b = _fold(beta)
    s1 = math.sin(PI * b)
    singular = abs(s1) < SINGULAR_GUARD
    if t >= 1:
        if singular:
            return 1.0, -_d2_vt2_hat(0.0, t, budget) / PI
        return 1.0, -_d_vt2_hat(b, t, budget) / s1
    s = 1 / t
    if singular:
        r = gauss_series(
            lambda k, u: (2 - 4 * PI * s * u * u) * _sign(k), 0.0, s, budget, degree=2, bound=4 * PI * s + 2
        )
        return t**-1.5, r
    r = gauss_series(lambda k, u: u * _sign(k), b, s, budget, degree=1)
    return t**-1.5, TWO_PI * r / s1


def Q(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """-(d/dbeta vartheta_hat(beta; t)) / sin(2 pi beta), with its removable
    singularities at half-integers filled in by l'Hopital."""
    scale, r = Q_factored(beta, t, budget)
    return scale * r


def Q2(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """-(d/dbeta vartheta2_hat(beta; t)) / sin(pi beta), continuous at integers."""
    scale, r = Q2_factored(beta, t, budget)
    return scale * r


def sandwich(beta: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> dict:
    """Evaluate both bound sandwiches at (beta, t) in factored form.

    Returns the lower bound, value and upper bound of each ratio, all divided
    by the common scale, plus booleans ``ok`` / ``ok2``.
    """
    scale, r = Q_factored(beta, t, budget)
    scale2, r2 = Q2_factored(beta, t, budget)
    if t < 1:
        lo, hi = math.exp(-PI / (4 * t)), 1.0
        lo2, hi2 = TWO_PI * (1 - 1 / 175) * math.exp(-PI / (4 * t)), PI
    else:
        lo, hi = boundA(t), boundB(t)
        lo2, hi2 = boundA2(t), boundB2(t)
    return {
        "beta": beta, "t": t, "scale": scale,
        "Q": (lo, r, hi), "Q2": (lo2, r2, hi2),
        "ok": lo <= r <= hi, "ok2": lo2 <= r2 <= hi2,
    }


# ---------------------------------------------------------------------------
# bounds; the branch switches at t = 1


def _check_nonneg(t):
    if t < 0 or math.isnan(t):
        raise NonPositiveParameter(f"t must be >= 0, got {t!r}")


def _small_t_gauss(t):
    # t^{-3/2} exp(-pi/(4t)), extended by 0 at t = 0
    return 0.0 if t == 0 else t**-1.5 * math.exp(-PI / (4 * t))


def boundA(t: float) -> float:
    _check_nonneg(t)
    if t < 1:
        return _small_t_gauss(t)
    return (1 - 1 / 3000) * 4 * PI * math.exp(-PI * t)


def boundB(t: float) -> float:
    _check_nonneg(t)
    if t < 1:
        return math.inf if t == 0 else t**-1.5
    return (1 + 1 / 3000) * 4 * PI * math.exp(-PI * t)


def boundA2(t: float) -> float:
    _check_nonneg(t)
    if t < 1:
        return TWO_PI * (1 - 1 / 175) * _small_t_gauss(t)
    return TWO_PI * (1 - 1 / 175) * math.exp(-PI * t / 4)


def boundB2(t: float) -> float:
    _check_nonneg(t)
    if t < 1:
        return math.inf if t == 0 else PI * t**-1.5
    return TWO_PI * (1 + 1 / 55) * math.exp(-PI * t / 4)
