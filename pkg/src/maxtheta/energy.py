"""Lattice energies for completely monotone potentials.

Potentials act on the squared distance r = |v|^2. Every energy is written as
an integral of a theta function against the Laplace measure of the potential.
The integral over the width parameter is split at ``eta``, and the part below
the split is mapped to [1/eta, oo) with the theta duality, so both pieces
decay exponentially. The inverse power r^(-s/2) has Laplace density
u^(s/2-1)/Gamma(s/2), and the analytic continuation to 0 < s <= 2 comes out
of the same formula.
"""
from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import theta1d
from .errors import NonPositiveParameter, NonSummablePotential, PoleOrDivergent, QuadratureFailure
from .lattice import LatticeParam
from .theta2d import theta_grid, theta_punctured

PI = math.pi

_GL_FINE = np.polynomial.legendre.leggauss(24)
_GL_COARSE = np.polynomial.legendre.leggauss(16)


# ---------------------------------------------------------------------------
# potentials


@dataclass(frozen=True)
class Potential:
    """f(r) on squared distance r.

    kind ``inverse_power``: f(r) = r^(-s/2), s the distance exponent.
    kind ``gaussian``: f(r) = exp(-t r).
    kind ``laplace_measure``: f(r) = sum w_i exp(-t_i r).
    """

    kind: str
    s: float | None = None
    t: float | None = None
    nodes: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        if self.kind == "inverse_power":
            if self.s is None or not self.s > 0:
                raise NonPositiveParameter(f"inverse power needs s > 0, got {self.s}")
        elif self.kind == "gaussian":
            if self.t is None or not self.t > 0:
                raise NonPositiveParameter(f"gaussian needs t > 0, got {self.t}")
        elif self.kind == "laplace_measure":
            if not self.nodes:
                raise ValueError("laplace measure needs at least one node")
            for t, w in self.nodes:
                if not t > 0 or w < 0:
                    raise NonPositiveParameter(f"measure node (t={t}, w={w}) needs t > 0 and w >= 0")
        else:
            raise ValueError(f"unknown potential kind {self.kind!r}")

    @property
    def summable(self) -> bool:
        """True when f(r) = O(r^(-1-eps)), so plain 2D lattice sums converge absolutely."""
        return self.kind != "inverse_power" or self.s > 2

    def __call__(self, r):
        r = np.asarray(r, float)
        if self.kind == "inverse_power":
            return r ** (-self.s / 2)
        if self.kind == "gaussian":
            return np.exp(-self.t * r)
        return sum(w * np.exp(-t * r) for t, w in self.nodes)

    def __str__(self):
        if self.kind == "inverse_power":
            return f"pow:s={self.s!r}"
        if self.kind == "gaussian":
            return f"gauss:t={self.t!r}"
        return "measure:[" + ",".join(f"({t!r},{w!r})" for t, w in self.nodes) + "]"


def inverse_power(s: float) -> Potential:
    return Potential("inverse_power", s=float(s))


def gaussian(t: float) -> Potential:
    return Potential("gaussian", t=float(t))


def laplace_measure(nodes) -> Potential:
    return Potential("laplace_measure", nodes=tuple((float(t), float(w)) for t, w in nodes))


_POT_RE = re.compile(r"^\s*(pow|gauss|measure)\s*:\s*(.*)$")


def parse_potential(text: str) -> Potential:
    """Parse "pow:s=3", "gauss:t=1.5" or "measure:[(t,w),...]"."""
    m = _POT_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse potential {text!r}")
    head, body = m.groups()
    if head == "measure":
        try:
            nodes = ast.literal_eval(body)
        except (ValueError, SyntaxError) as exc:
            raise ValueError(f"bad measure list {body!r}") from exc
        return laplace_measure(nodes)
    key = "s" if head == "pow" else "t"
    km = re.fullmatch(rf"\s*{key}\s*=\s*([^\s]+)\s*", body)
    if not km:
        raise ValueError(f"expected {head}:{key}=<number>, got {text!r}")
    value = float(km.group(1))
    return inverse_power(value) if head == "pow" else gaussian(value)


@dataclass(frozen=True)
class EwaldSplit:
    """Split point of the width integral; results do not depend on it."""

    eta: float = 1.0

    def __post_init__(self):
        if not self.eta > 0:
            raise NonPositiveParameter(f"split eta must be positive, got {self.eta}")


DEFAULT_SPLIT = EwaldSplit()


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class _Decay:
    """|g(u)| <= amp * exp(-pi * rate * (u - 1)) for u >= 1."""

    amp: np.ndarray
    rate: np.ndarray


def _tail_integral(p, rate, U):
    """int_U^oo u^p exp(-pi rate (u - 1)) du."""
    c = PI * rate
    return float(mpmath.exp(c) * c ** (-p - 1) * mpmath.gammainc(p + 1, c * U))


def _upper_limit(p, decay: _Decay, start, tol):
    amp = float(np.max(decay.amp))
    rate = float(np.min(decay.rate))
    U = max(2.0, start + 1.0)
    while amp * _tail_integral(p, rate, U) > tol:
        U *= 1.25
    return U, amp * _tail_integral(p, rate, U)


def _gauss_legendre(g, a, b, width=1.0, tol=1e-13):
    """Composite Gauss-Legendre of g over [a, b].

    g takes an array of nodes (last axis) and returns values broadcast over
    any leading lattice axes. The 24-point rule is checked against the
    16-point rule on the same panels.
    """
    n_panels = max(1, math.ceil((b - a) / width))
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    results = []
    for x, w in (_GL_FINE, _GL_COARSE):
        u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        ww = (half[:, None] * w[None, :]).ravel()
        results.append(np.sum(g(u) * ww, axis=-1))
    fine, coarse = results
    err = np.abs(fine - coarse)
    if np.any(err > tol * np.maximum(1.0, np.abs(fine))):
        raise QuadratureFailure(f"quadrature rules disagree by {float(np.max(err)):.3e}")
    return fine, err


def _integral(p, g, decay: _Decay, start, tol=1e-16):
    """int_start^oo u^p g(u) du with an explicit tail bound; returns (value, error bound)."""
    U, tail = _upper_limit(p, decay, start, tol)
    val, err = _gauss_legendre(lambda u: u ** p * g(u), start, U)
    return val, err + tail


# ---------------------------------------------------------------------------
# decay constants of the 2D theta pieces


def _xy(L):
    if isinstance(L, LatticeParam):
        return np.asarray(L.x), np.asarray(L.y)
    x, y = L
    return np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))


def _min_norm(x, y, shift):
    xi, eta = shift
    best = np.full(np.shape(x), np.inf)
    for k in range(-3, 4):
        for l in range(-3, 4):
            if shift == (0.0, 0.0) and k == 0 and l == 0:
                continue
            kk, ll = k + xi, l + eta
            best = np.minimum(best, (kk * kk + 2 * x * kk * ll + (x * x + y * y) * ll * ll) / y)
    return best


def _decays(x, y):
    """Decay data for theta - 1 (plain, alternating) and for the centered theta."""
    punct = _Decay(theta_punctured("plain", x, y, 1.0), _min_norm(x, y, (0.0, 0.0)))
    center = _Decay(theta_grid("centered", x, y, 1.0), _min_norm(x, y, (0.5, 0.5)))
    return punct, center


def _nodes_broadcast(x, y):
    return x[..., None], y[..., None]


def _prefactor(s):
    return PI ** (s / 2) / math.gamma(s / 2)


def _check_s(s):
    if not s > 0:
        raise NonPositiveParameter(f"exponent s must be positive, got {s}")


# ---------------------------------------------------------------------------
# Epstein zetas


def epstein_pm(L, s: float, split: EwaldSplit = DEFAULT_SPLIT):
    """Alternating Epstein zeta sum' (-1)^(k+l) |v|^(-s), continued to 0 < s <= 2.

    ``L`` is a LatticeParam or a pair of broadcastable (x, y) arrays.
    """
    _check_s(s)
    x, y = _xy(L)
    eta = split.eta
    punct, center = _decays(x, y)
    xb, yb = _nodes_broadcast(x, y)
    near, e1 = _integral(s / 2 - 1, lambda u: theta_punctured("alternating", xb, yb, u), punct, eta)
    far, e2 = _integral(-s / 2, lambda u: theta_grid("centered", xb, yb, u), center, 1 / eta)
    out = _prefactor(s) * (near + far - (2 / s) * eta ** (s / 2))
    return _scalar(out, L)


def epstein_c(L, s: float, split: EwaldSplit = DEFAULT_SPLIT):
    """Centered Epstein zeta sum |v + c|^(-s) over the shifted lattice, continued to s != 2."""
    _check_s(s)
    if s == 2:
        raise PoleOrDivergent("centered Epstein zeta has a pole at s = 2")
    x, y = _xy(L)
    eta = split.eta
    punct, center = _decays(x, y)
    xb, yb = _nodes_broadcast(x, y)
    near, _ = _integral(s / 2 - 1, lambda u: theta_grid("centered", xb, yb, u), center, eta)
    far, _ = _integral(-s / 2, lambda u: theta_punctured("alternating", xb, yb, u), punct, 1 / eta)
    out = _prefactor(s) * (near + far + eta ** (s / 2 - 1) / (s / 2 - 1))
    return _scalar(out, L)


def epstein_plain(L, s: float, split: EwaldSplit = DEFAULT_SPLIT):
    """Epstein zeta sum' |v|^(-s) for s > 2."""
    if not s > 2:
        raise PoleOrDivergent(f"plain Epstein zeta needs s > 2, got {s}")
    x, y = _xy(L)
    eta = split.eta
    punct, _ = _decays(x, y)
    xb, yb = _nodes_broadcast(x, y)
    near, _ = _integral(s / 2 - 1, lambda u: theta_punctured("plain", xb, yb, u), punct, eta)
    far, _ = _integral(-s / 2, lambda u: theta_punctured("plain", xb, yb, u), punct, 1 / eta)
    out = _prefactor(s) * (near + far + eta ** (s / 2 - 1) / (s / 2 - 1) - (2 / s) * eta ** (s / 2))
    return _scalar(out, L)


def _scalar(out, L):
    return float(out) if isinstance(L, LatticeParam) or np.ndim(out) == 0 else out


def _lattice_vectors(x, y, shift, qmax):
    """Index pairs (k + xi, l + eta) with q below qmax, and their q values."""
    xi, eta = shift
    lmax = int(math.ceil(math.sqrt(qmax * y) / y)) + 2
    r2 = x * x + y * y
    kmax = int(math.ceil(math.sqrt(qmax * y * r2) / y)) + 2
    k = np.arange(-kmax, kmax + 1)[:, None] + xi
    l = np.arange(-lmax, lmax + 1)[None, :] + eta
    q = (k * k + 2 * x * k * l + r2 * l * l) / y
    keep = (q < qmax) & (q > 0)
    kk, ll = np.broadcast_arrays(k, l)
    return kk[keep], ll[keep], q[keep]


def epstein_gamma_route(L: LatticeParam, s: float, flavor: str = "alternating", split: EwaldSplit = DEFAULT_SPLIT, digits: int = 20) -> float:
    """Per-vector Ewald sum with incomplete gamma functions (cross-check route).

    flavor is "alternating", "centered" or "plain".
    """
    _check_s(s)
    eta = mpmath.mpf(split.eta)
    half = mpmath.mpf(s) / 2
    with mpmath.workdps(digits):
        qcut = 40.0 / (PI * min(split.eta, 1 / split.eta))

        def direct(shift, signed):
            kk, ll, q = _lattice_vectors(L.x, L.y, shift, qcut)
            total = mpmath.mpf(0)
            for k, l, qq in zip(kk, ll, q):
                sign = -1 if signed and (round(k + l) % 2) else 1
                total += sign * (mpmath.pi * qq) ** (-half) * mpmath.gammainc(half, mpmath.pi * eta * qq)
            return total

        def dual(shift, signed):
            kk, ll, q = _lattice_vectors(L.x, L.y, shift, qcut)
            total = mpmath.mpf(0)
            for k, l, qq in zip(kk, ll, q):
                sign = -1 if signed and (round(k + l) % 2) else 1
                total += sign * (mpmath.pi * qq) ** (half - 1) * mpmath.gammainc(1 - half, mpmath.pi * qq / eta)
            return total

        if flavor == "alternating":
            val = direct((0.0, 0.0), True) + dual((0.5, 0.5), False) - eta ** half / half
        elif flavor == "centered":
            if s == 2:
                raise PoleOrDivergent("centered Epstein zeta has a pole at s = 2")
            val = direct((0.5, 0.5), False) + dual((0.0, 0.0), True) + eta ** (half - 1) / (half - 1)
        elif flavor == "plain":
            if not s > 2:
                raise PoleOrDivergent(f"plain Epstein zeta needs s > 2, got {s}")
            val = direct((0.0, 0.0), False) + dual((0.0, 0.0), False) + eta ** (half - 1) / (half - 1) - eta ** half / half
        else:
            raise ValueError(f"unknown flavor {flavor!r}")
        return float(mpmath.pi ** half / mpmath.gamma(half) * val)


# ---------------------------------------------------------------------------
# energies for general potentials


def energy_pm(L, f: Potential, split: EwaldSplit = DEFAULT_SPLIT):
    """Sum over nonzero lattice vectors of (-1)^(k+l) f(|v|^2)."""
    x, y = _xy(L)
    if f.kind == "inverse_power":
        if not f.summable:
            raise NonSummablePotential(f"{f} is not absolutely summable; use epstein_pm for the continued value")
        return epstein_pm(L, f.s, split)
    nodes = ((f.t, 1.0),) if f.kind == "gaussian" else f.nodes
    out = sum(w * theta_punctured("alternating", x, y, t / PI) for t, w in nodes)
    return _scalar(out, L)


def energy_c(L, f: Potential, split: EwaldSplit = DEFAULT_SPLIT):
    """Sum over the lattice shifted by its cell center of f(|v + c|^2)."""
    x, y = _xy(L)
    if f.kind == "inverse_power":
        if not f.summable:
            raise NonSummablePotential(f"{f} is not absolutely summable; use epstein_c for the continued value")
        return epstein_c(L, f.s, split)
    nodes = ((f.t, 1.0),) if f.kind == "gaussian" else f.nodes
    out = sum(w * theta_grid("centered", x, y, t / PI) for t, w in nodes)
    return _scalar(out, L)


def rocksalt_energy(L, p: float, q: float, rho: float, split: EwaldSplit = DEFAULT_SPLIT):
    """zeta(p) + zeta_pm(q) / rho for p > q > 2."""
    if not (p > q > 2):
        raise PoleOrDivergent(f"rock-salt energy needs p > q > 2, got p={p}, q={q}")
    if not rho > 0:
        raise NonPositiveParameter(f"density rho must be positive, got {rho}")
    return epstein_plain(L, p, split) + epstein_pm(L, q, split) / rho


# ---------------------------------------------------------------------------
# three-dimensional rock salt


def _theta_cube_pm_minus_one(u):
    d = theta1d.theta4(u) - 1.0
    return d * (3 + d * (3 + d))


def madelung_nacl3d(s: float = 1.0, split: EwaldSplit = DEFAULT_SPLIT) -> float:
    """sum' (-1)^(m+n+p) (m^2+n^2+p^2)^(-s/2) over the cubic lattice, Ewald-continued.

    The alternating cubic theta is theta4(u)^3 and its dual is theta2(u)^3.
    """
    _check_s(s)
    eta = split.eta
    th3 = theta1d.theta3(1.0)
    th2 = theta1d.theta2(1.0)
    g_near = np.vectorize(_theta_cube_pm_minus_one)
    g_far = np.vectorize(lambda u: theta1d.theta2(u) ** 3)
    near, _ = _integral(s / 2 - 1, g_near, _Decay(np.asarray(th3 ** 3 - 1), np.asarray(1.0)), eta)
    far, _ = _integral((1 - s) / 2, g_far, _Decay(np.asarray(th2 ** 3), np.asarray(0.75)), 1 / eta)
    return float(_prefactor(s) * (near + far - (2 / s) * eta ** (s / 2)))


__all__ = [
    "Potential", "inverse_power", "gaussian", "laplace_measure", "parse_potential", "EwaldSplit",
    "DEFAULT_SPLIT", "epstein_pm", "epstein_c", "epstein_plain", "epstein_gamma_route", "energy_pm",
    "energy_c", "rocksalt_energy", "madelung_nacl3d",
]
