"""Unit-covolume planar lattices indexed by points of the upper half-plane.

A parameter (x, y) stands for the lattice generated by the columns of
y^{-1/2} [[1, x], [0, y]], taken up to rotation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveParameter, NotPositiveDefinite

# membership tolerance for the fundamental domain
D_TOL = 1e-12

SQRT3_2 = math.sqrt(3) / 2


@dataclass(frozen=True)
class LatticeParam:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise NonPositiveParameter(f"dilation y must be positive, got {self.y!r}")

    @property
    def tau(self) -> complex:
        return complex(self.x, self.y)

    @property
    def reduced(self) -> bool:
        """True iff (x, y) lies in the closed fundamental domain D."""
        return abs(self.x) <= 0.5 + D_TOL and self.x * self.x + self.y * self.y >= 1 - D_TOL

    @property
    def in_right_half(self) -> bool:
        return self.reduced and self.x >= -D_TOL

    def basis(self) -> np.ndarray:
        """Generator matrix; its columns v1, v2 span the lattice."""
        return np.array([[1.0, self.x], [0.0, self.y]]) / math.sqrt(self.y)

    def __str__(self):
        return format_param(self)

    @classmethod
    def from_tau(cls, tau: complex) -> "LatticeParam":
        return cls(tau.real, tau.imag)


def hexagonal() -> LatticeParam:
    return LatticeParam(0.5, SQRT3_2)


def square() -> LatticeParam:
    return LatticeParam(0.0, 1.0)


def parse_param(text: str) -> LatticeParam:
    """Parse ``"x+yi"`` or a JSON object ``{"x": .., "y": ..}``."""
    text = text.strip()
    if text.startswith("{"):
        obj = json.loads(text)
        return LatticeParam(float(obj["x"]), float(obj["y"]))
    tau = complex(text.replace(" ", "").replace("i", "j"))
    return LatticeParam(tau.real, tau.imag)


def format_param(L: LatticeParam, precision: int = 12) -> str:
    return f"{L.x:.{precision}g}+{L.y:.{precision}g}i"


def param_to_json(L: LatticeParam) -> dict:
    return {"x": L.x, "y": L.y}


# ---------------------------------------------------------------------------
# quadratic forms


@dataclass(frozen=True)
class QuadraticForm:
    """q(k, l) = a k^2 + b k l + c l^2 with discriminant b^2/4 - ac = -1."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a > 0 and self.a * self.c - self.b * self.b / 4 > 0):
            raise NotPositiveDefinite(f"form {self} is not positive definite")

    @property
    def discriminant(self) -> float:
        return self.b * self.b / 4 - self.a * self.c

    def __call__(self, k, l):
        return self.a * k * k + self.b * k * l + self.c * l * l

    def to_param(self) -> LatticeParam:
        """Inverse of :func:`gram` for a determinant-normalised form."""
        return LatticeParam(self.b / (2 * self.a), 1 / self.a)


def gram(L: LatticeParam) -> QuadraticForm:
    y = L.y
    return QuadraticForm(1 / y, 2 * L.x / y, (L.x * L.x + y * y) / y)


def lambda_min(q: QuadraticForm) -> float:
    """Smallest eigenvalue of the Gram matrix [[a, b/2], [b/2, c]]."""
    mean = (q.a + q.c) / 2
    rad = math.hypot((q.a - q.c) / 2, q.b / 2)
    det = q.a * q.c - q.b * q.b / 4
    if det <= 0:
        raise NotPositiveDefinite(f"form {q} is not positive definite")
    # det / largest eigenvalue avoids cancellation in mean - rad
    return det / (mean + rad)


# ---------------------------------------------------------------------------
# modular reduction

GENERATORS = {
    "S": ((0, -1), (1, 0)),
    "T": ((1, 1), (0, 1)),
    "T^-1": ((1, -1), (0, 1)),
}


def _matmul(A, B):
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


@dataclass(frozen=True)
class UnimodularWord:
    """Generators in order of application and their product ``g_n ... g_1``."""

    letters: tuple[str, ...] = ()
    matrix: tuple[tuple[int, int], tuple[int, int]] = field(default=((1, 0), (0, 1)))

    def then(self, letter: str, power: int = 1) -> "UnimodularWord":
        letters, m = list(self.letters), self.matrix
        for _ in range(power):
            letters.append(letter)
            m = _matmul(GENERATORS[letter], m)
        return UnimodularWord(tuple(letters), m)

    @property
    def determinant(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def act(self, tau: complex) -> complex:
        (a, b), (c, d) = self.matrix
        return (a * tau + b) / (c * tau + d)

    def __str__(self):
        return " ".join(self.letters) if self.letters else "(identity)"


def mobius(matrix, tau: complex) -> complex:
    (a, b), (c, d) = matrix
    return (a * tau + b) / (c * tau + d)


def reduce_to_fundamental(L: LatticeParam, max_steps: int = 10_000) -> tuple[LatticeParam, UnimodularWord]:
    """Move ``L`` into D by translations and inversions.

    Boundary ties go to the x >= 0 side: x = -1/2 is shifted to +1/2 and points
    on the unit circle with x < 0 are inverted.
    """
    tau = L.tau
    word = UnimodularWord()
    for _ in range(max_steps):
        if abs(tau.real) > 0.5 + D_TOL:
            n = math.floor(tau.real + 0.5)
            letter = "T^-1" if n > 0 else "T"
            word = word.then(letter, abs(n))
            tau = complex(tau.real - n, tau.imag)
            continue
        if abs(tau) ** 2 < 1 - D_TOL:
            word = word.then("S")
            tau = -1 / tau
            continue
        break
    else:  # pragma: no cover - the loop is known to terminate
        raise RuntimeError("reduction did not terminate")
    if tau.real < -0.5 + D_TOL:
        word = word.then("T")
        tau = complex(tau.real + 1, tau.imag)
    elif tau.real < -D_TOL and abs(tau) ** 2 < 1 + D_TOL:
        word = word.then("S")
        tau = -1 / tau
    return LatticeParam(tau.real, tau.imag), word


def reduce_param(L: LatticeParam) -> LatticeParam:
    return reduce_to_fundamental(L)[0]


def transformed_form(q: QuadraticForm, matrix) -> QuadraticForm:
    """Form (k, l) -> q(B (k, l)) for an integer matrix B."""
    (p, r), (s, u) = matrix
    a = q(p, s)
    c = q(r, u)
    b = 2 * q.a * p * r + q.b * (p * u + r * s) + 2 * q.c * s * u
    return QuadraticForm(a, b, c)


def dual(L: LatticeParam) -> LatticeParam:
    """Reduced parameter of the dual lattice S^{-T} Z^2 (up to rotation)."""
    S = L.basis()
    Sd = np.linalg.inv(S).T
    G = Sd.T @ Sd
    q = QuadraticForm(G[0, 0], 2 * G[0, 1], G[1, 1])
    return reduce_param(q.to_param())


def adjoint_is_self(L: LatticeParam, tol: float = 1e-9) -> bool:
    """Check that J S^{-T} Z^2 = S Z^2, i.e. S^{-1} J S^{-T} is unimodular."""
    S = L.basis()
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    M = np.linalg.inv(S) @ J @ np.linalg.inv(S).T
    R = np.rint(M)
    return bool(np.all(np.abs(M - R) < tol) and abs(abs(round(np.linalg.det(R))) - 1) == 0)


def sample_reduced(rng: np.random.Generator, n: int, ymax: float = 4.0) -> list[LatticeParam]:
    """Uniform x in [0, 1/2], log-uniform y over [max(sqrt(1-x^2), 1/2), ymax]."""
    out = []
    for _ in range(n):
        x = rng.uniform(0.0, 0.5)
        lo = max(math.sqrt(1 - x * x), 0.5)
        y = math.exp(rng.uniform(math.log(lo), math.log(ymax)))
        out.append(reduce_param(LatticeParam(x, y)))
    return out
