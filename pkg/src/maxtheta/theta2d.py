"""Two-dimensional lattice theta functions.

For a parameter (x, y) and alpha > 0 the Gaussian weight of the index pair
(k, l) is exp(-(pi alpha / y) (k^2 + 2 x k l + (x^2 + y^2) l^2)). The five
flavours are

* plain        sum of the weights,
* centered     indices shifted by (1/2, 1/2),
* alternating  weights signed by (-1)^(k+l),
* shifted      indices shifted by (xi, eta),
* character    weights multiplied by cos(2 pi (k eta - l xi)).

Series are always summed at alpha >= 1; smaller alpha goes through the
Poisson duality shifted <-> character (centered <-> alternating, plain <->
plain) with the factor 1/alpha.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import theta1d
from .errors import BudgetExceeded, DomainViolation, NonPositiveParameter, NotReduced, NotReducedWarning, require_positive
from .lattice import D_TOL, LatticeParam, reduce_param
from .series import DEFAULT_BUDGET, SeriesBudget, gauss_series

Flavor = Literal["plain", "centered", "alternating", "shifted", "character"]
FLAVORS = ("plain", "centered", "alternating", "shifted", "character")

PI = math.pi
SQRT1_2 = math.sqrt(0.5)

# points per chunk in the vectorised kernel
_CHUNK = 4096


@dataclass(frozen=True)
class ThetaQuery:
    L: LatticeParam
    alpha: float
    flavor: Flavor = "plain"
    shift: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        require_positive(alpha=self.alpha)
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.flavor in ("centered", "alternating"):
            object.__setattr__(self, "shift", (0.5, 0.5))
        elif self.flavor == "plain":
            object.__setattr__(self, "shift", (0.0, 0.0))


@dataclass(frozen=True)
class ThetaResult:
    value: float
    L: LatticeParam
    alpha_eff: float
    radius: tuple[int, int]
    reduced_from: LatticeParam | None = None


# ---------------------------------------------------------------------------
# vectorised kernel


def _tail(c, inner_t, K):
    """Bound for the part of the box sum lost beyond |index| >= K in one direction."""
    with np.errstate(over="ignore", divide="ignore"):
        head = 2 * np.exp(-c * K * K) / (-np.expm1(-c * (2 * K + 1)))
    return (1 + 1 / np.sqrt(inner_t)) * head


def _radius(c, inner_t, eps, K0=1):
    K = np.maximum(K0, np.ceil(np.sqrt(np.maximum(np.log(4 * (1 + 1 / np.sqrt(inner_t)) / eps), 1.0) / c)))
    while True:
        bad = _tail(c, inner_t, K) > eps / 2
        if not np.any(bad):
            return K.astype(int)
        K = np.where(bad, K + 1, K)


def _dominant_exponent(x, y, xi, eta):
    """min over the four index pairs nearest the shift of the quadratic form."""
    best = None
    for dk in (-1.0, 0.0):
        for dl in (-1.0, 0.0):
            k, l = dk + xi, dl + eta
            q = (k * k + 2 * x * k * l + (x * x + y * y) * l * l) / y
            best = q if best is None else np.minimum(best, q)
    return best


def _box_sum(x, y, alpha, shift, character, deriv, exclude_origin, budget):
    """Vectorised double series (meant for alpha >= 1).

    x, y and alpha broadcast together. Returns (values, Kk, Kl) with the
    largest truncation radii used in each index direction.
    """
    x, y, alpha = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(alpha, float))
    shape = x.shape
    x, y, alpha = x.ravel(), y.ravel(), alpha.ravel()
    if x.size == 0:
        return np.empty(shape), 0, 0
    xi, eta = shift
    xi -= math.floor(xi)
    eta -= math.floor(eta)
    r2 = x * x + y * y
    c_l = PI * alpha * y
    c_k = PI * alpha * y / r2
    tol = budget.rel_tol * (1e-3 if deriv else 1.0)
    dom = np.exp(-PI * alpha * _dominant_exponent(x, y, xi, eta))
    if exclude_origin:
        dom = np.minimum(dom, np.exp(-PI * alpha * np.minimum(1 / y, y)))
    eps = tol * dom
    extra = 2 if deriv else 0
    Kl = _radius(c_l, alpha / y, eps) + extra
    Kk = _radius(c_k, alpha * r2 / y, eps) + extra
    kmax, lmax = int(Kk.max()), int(Kl.max())
    if (2 * kmax + 1) * (2 * lmax + 1) > budget.max_terms:
        raise BudgetExceeded(f"truncation box {kmax}x{lmax} exceeds max_terms")
    ks = np.arange(-kmax, kmax + 1, dtype=float)
    ls = np.arange(-lmax, lmax + 1, dtype=float)
    kt = (ks + xi)[:, None]
    lt = (ls + eta)[None, :]
    phase = None
    if character is not None:
        cx, ce = character
        phase = np.cos(2 * PI * (ks[:, None] * ce - ls[None, :] * cx))
    mask = None
    if exclude_origin:
        mask = ~((np.abs(kt) < 1e-15) & (np.abs(lt) < 1e-15))
    out = np.empty(x.size)
    for start in range(0, x.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        xs = x[sl][:, None, None]
        ys = y[sl][:, None, None]
        al = alpha[sl][:, None, None]
        qn = kt * kt + 2 * xs * kt * lt + (xs * xs + ys * ys) * lt * lt
        terms = np.exp(-(PI * al / ys) * qn)
        if deriv == "x":
            terms = terms * (-(PI * al / ys) * 2 * (kt * lt + xs * lt * lt))
        elif deriv == "y":
            terms = terms * (PI * al * (qn / (ys * ys) - 2 * lt * lt))
        if phase is not None:
            terms = terms * phase
        if mask is not None:
            terms = terms * mask
        out[sl] = terms.sum(axis=(1, 2))
    return out.reshape(shape), kmax, lmax


def _flavor_args(flavor, shift, dual):
    """(shift, character) for the direct kernel; ``dual`` flips to the Poisson partner."""
    if flavor == "plain":
        return (0.0, 0.0), None
    if flavor == "centered":
        flavor, shift = "shifted", (0.5, 0.5)
    elif flavor == "alternating":
        flavor, shift = "character", (0.5, 0.5)
    if dual:
        flavor = "character" if flavor == "shifted" else "shifted"
    if flavor == "shifted":
        return shift, None
    return (0.0, 0.0), shift


def _evaluate(x, y, alpha, flavor, shift=(0.0, 0.0), deriv=None, exclude_origin=False, budget=DEFAULT_BUDGET):
    x, y, alpha = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(alpha, float))
    if np.any(~(alpha > 0)) or np.any(~(y > 0)):
        raise NonPositiveParameter("alpha and y must be positive")
    if exclude_origin and flavor not in ("plain", "alternating", "character"):
        raise ValueError("exclude_origin only applies to unshifted flavours")
    out = np.empty(x.shape)
    big = alpha >= 1
    sh, ch = _flavor_args(flavor, shift, dual=False)
    v1, kk1, kl1 = _box_sum(x[big], y[big], alpha[big], sh, ch, deriv, exclude_origin, budget)
    out[big] = v1
    small = ~big
    sh, ch = _flavor_args(flavor, shift, dual=True)
    v2, kk2, kl2 = _box_sum(x[small], y[small], 1 / alpha[small], sh, ch, deriv, False, budget)
    v2 = v2 / alpha[small]
    if exclude_origin and not deriv:
        v2 = v2 - 1.0
    out[small] = v2
    if out.ndim == 0:
        out = out[()]
    return out, max(kk1, kk2), max(kl1, kl2)


def theta_grid(flavor: Flavor, x, y, alpha, shift=(0.0, 0.0), budget: SeriesBudget = DEFAULT_BUDGET) -> np.ndarray:
    """Evaluate one flavour on broadcast arrays of (x, y, alpha), no reduction performed."""
    return _evaluate(x, y, alpha, flavor, shift, budget=budget)[0]


def evaluate(query: ThetaQuery, budget: SeriesBudget = DEFAULT_BUDGET, reduce: bool = True) -> ThetaResult:
    """Evaluate a query and report the truncation box used.

    Centered queries on a parameter outside D are reduced first (with a
    :class:`NotReducedWarning`) or rejected when ``reduce`` is false.
    """
    L = query.L
    reduced_from = None
    if query.flavor == "centered" and not L.reduced:
        if not reduce:
            raise NotReduced(f"centered theta needs a reduced parameter, got {L}")
        reduced_from, L = L, reduce_param(L)
        warnings.warn(f"parameter {reduced_from} reduced to {L}", NotReducedWarning, stacklevel=3)
    vals, kk, kl = _evaluate(L.x, L.y, query.alpha, query.flavor, query.shift, budget=budget)
    return ThetaResult(float(vals), L, max(query.alpha, 1 / query.alpha), (kk, kl), reduced_from)


def theta_plain(L: LatticeParam, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    return evaluate(ThetaQuery(L, alpha, "plain"), budget).value


def theta_centered(L: LatticeParam, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET, reduce: bool = True) -> float:
    return evaluate(ThetaQuery(L, alpha, "centered"), budget, reduce=reduce).value


def theta_alternating(L: LatticeParam, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    return evaluate(ThetaQuery(L, alpha, "alternating"), budget).value


def theta_shifted(L: LatticeParam, xi: float, eta: float, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    return evaluate(ThetaQuery(L, alpha, "shifted", (xi, eta)), budget).value


def theta_character(L: LatticeParam, xi: float, eta: float, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Real-valued character theta; the imaginary part cancels under (k, l) -> (-k, -l)."""
    return evaluate(ThetaQuery(L, alpha, "character", (xi, eta)), budget).value


def theta_punctured(flavor: Flavor, x, y, alpha, budget: SeriesBudget = DEFAULT_BUDGET):
    """Plain or alternating theta minus its origin term, without cancellation for large alpha."""
    if flavor not in ("plain", "alternating"):
        raise ValueError("only plain and alternating thetas have an origin term")
    return _evaluate(x, y, alpha, flavor, exclude_origin=True, budget=budget)[0]


def theta_c_factorized(y: float, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Centered theta of the lattice (1/2, y) as a product of two theta2 nulls."""
    require_positive(y=y, alpha=alpha)
    return 0.5 * theta1d.theta2(alpha * y, budget) * theta1d.theta2(alpha / (4 * y), budget)


# ---------------------------------------------------------------------------
# derivatives


def _sup_dvartheta(t):
    # sup over beta of |d/dbeta vartheta(beta; t)| (also bounds the alternating one)
    return 2 + 2 * math.sqrt(2 * PI * t / math.e)


def _dc_dx_series(x, y, alpha, budget):
    t = alpha / y
    return gauss_series(
        lambda k, u: u * theta1d.d_vartheta(0.5 + x * u, t, budget),
        0.5, alpha * y, budget, degree=1, bound=_sup_dvartheta(t),
    )


def _dpm_dx_series(x, y, alpha, budget):
    t = alpha / y
    return gauss_series(
        lambda k, u: (-1.0 if k & 1 else 1.0) * u * theta1d.d_vartheta2(x * u, t, budget),
        0.0, alpha * y, budget, degree=1, bound=_sup_dvartheta(t),
    )


def _check_sign_domain(L, guard):
    if guard and not (-D_TOL <= L.x <= 0.5 + D_TOL and L.y >= SQRT1_2 - D_TOL):
        raise DomainViolation(
            f"({L.x}, {L.y}) is outside 0 <= x <= 1/2, y >= 1/sqrt(2); pass guard=False to evaluate anyway"
        )


def dtheta_c_dx(L: LatticeParam, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET, guard: bool = True) -> float:
    """x-derivative of the centered theta, summed as nested 1D series."""
    require_positive(alpha=alpha)
    _check_sign_domain(L, guard)
    if alpha >= 1:
        return _dc_dx_series(L.x, L.y, alpha, budget)
    return _dpm_dx_series(L.x, L.y, 1 / alpha, budget) / alpha


def dtheta_pm_dx(L: LatticeParam, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET, guard: bool = True) -> float:
    """x-derivative of the alternating theta, summed as nested 1D series."""
    require_positive(alpha=alpha)
    _check_sign_domain(L, guard)
    if alpha >= 1:
        return _dpm_dx_series(L.x, L.y, alpha, budget)
    return _dc_dx_series(L.x, L.y, 1 / alpha, budget) / alpha


def _dc_dy_factorized(y, alpha, budget):
    a, b = alpha * y, alpha / (4 * y)
    th2 = theta1d.theta2
    d2 = theta1d.dtheta2_dt
    return 0.5 * (alpha * d2(a, budget) * th2(b, budget) - alpha / (4 * y * y) * th2(a, budget) * d2(b, budget))


def _check_half(L, guard):
    if guard and L.x != 0.5:
        raise DomainViolation(f"y-derivative formula needs x = 1/2 exactly, got x = {L.x}")


def dtheta_c_dy(L: LatticeParam, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET, guard: bool = True) -> float:
    """y-derivative of the centered theta on the line x = 1/2.

    With ``guard=False`` and x != 1/2 the generic double series is used.
    """
    require_positive(alpha=alpha)
    _check_half(L, guard)
    if L.x != 0.5:
        return dtheta_dy(L, alpha, "centered", budget)
    return _dc_dy_factorized(L.y, alpha, budget)


def dtheta_pm_dy(L: LatticeParam, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET, guard: bool = True) -> float:
    """y-derivative of the alternating theta on the line x = 1/2."""
    require_positive(alpha=alpha)
    _check_half(L, guard)
    if L.x != 0.5:
        return dtheta_dy(L, alpha, "alternating", budget)
    return _dc_dy_factorized(L.y, 1 / alpha, budget) / alpha


def dtheta_dx(L: LatticeParam, alpha: float, flavor: Flavor, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Term-wise x-derivative of the double series (any x, y, flavour)."""
    return float(_evaluate(L.x, L.y, alpha, flavor, deriv="x", budget=budget)[0])


def dtheta_dy(L: LatticeParam, alpha: float, flavor: Flavor, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Term-wise y-derivative of the double series (any x, y, flavour)."""
    return float(_evaluate(L.x, L.y, alpha, flavor, deriv="y", budget=budget)[0])


def dtheta_grid(flavor: Flavor, wrt: str, x, y, alpha: float, budget: SeriesBudget = DEFAULT_BUDGET) -> np.ndarray:
    if wrt not in ("x", "y"):
        raise ValueError("wrt must be 'x' or 'y'")
    return _evaluate(x, y, alpha, flavor, deriv=wrt, budget=budget)[0]


def product_ratio(t: float, y: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """theta2(t y) theta2(t / y) / theta2(t)^2; at most 1 with equality only at y = 1."""
    require_positive(t=t, y=y)
    th2 = theta1d.theta2
    return th2(t * y, budget) * th2(t / y, budget) / th2(t, budget) ** 2


__all__ = [
    "FLAVORS", "ThetaQuery", "ThetaResult", "evaluate", "theta_grid", "theta_plain", "theta_centered",
    "theta_alternating", "theta_shifted", "theta_character", "theta_punctured", "theta_c_factorized",
    "dtheta_c_dx", "dtheta_pm_dx", "dtheta_c_dy", "dtheta_pm_dy", "dtheta_dx", "dtheta_dy", "dtheta_grid",
    "product_ratio",
]
