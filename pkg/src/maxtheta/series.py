"""Truncated Gaussian series with certified geometric tails."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import BudgetExceeded


@dataclass(frozen=True)
class SeriesBudget:
    """Relative tolerance and hard cap on the number of summed terms.

    Truncation error is kept below ``rel_tol`` times the dominant term.
    """

    rel_tol: float = 1e-13
    max_terms: int = 10**6

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError("max_terms must be a positive integer")


DEFAULT_BUDGET = SeriesBudget()


def gaussian_tail(U: float, t: float, degree: int = 0) -> float:
    """Bound for sum over |u| >= U (both sides, unit spacing) of |u|^degree exp(-pi t u^2).

    Valid once U >= 1 and U is past the peak of the envelope; returns inf otherwise.
    """
    if U < 1 or U * U < degree / (2 * math.pi * t):
        return math.inf
    head = U**degree * math.exp(-math.pi * t * U * U)
    ratio = ((U + 1) / U) ** degree * math.exp(-math.pi * t * (2 * U + 1))
    if ratio >= 1:
        return math.inf
    return 2 * head / (1 - ratio)


def gauss_series(
    weight: Callable[[int, float], float],
    beta: float,
    t: float,
    budget: SeriesBudget = DEFAULT_BUDGET,
    degree: int = 0,
    bound: float = 1.0,
) -> float:
    """Sum ``weight(k, k+beta) * exp(-pi t (k+beta)^2)`` over all integers k.

    ``|weight(k, u)| <= bound * max(1, |u|)**degree`` must hold; it drives
    the tail certificate. Indices are visited outward from the one closest
    to ``-beta`` and the result is accumulated with ``math.fsum``.
    """
    kc = -math.floor(beta + 0.5)
    ub = kc + beta
    terms: list[float] = []
    max_abs = 0.0
    floor_scale = bound * math.exp(-math.pi * t * ub * ub)
    n = 0
    while True:
        for k in ((kc,) if n == 0 else (kc + n, kc - n)):
            u = k + beta
            v = weight(k, u) * math.exp(-math.pi * t * u * u)
            terms.append(v)
            max_abs = max(max_abs, abs(v))
        n += 1
        # every index not yet visited has |u| >= n - 1/2
        tail = bound * gaussian_tail(n - 0.5, t, degree)
        scale = max(max_abs, floor_scale)
        if tail <= budget.rel_tol * scale:
            return math.fsum(terms)
        if len(terms) >= budget.max_terms:
            raise BudgetExceeded(
                f"series (t={t}) not converged after {len(terms)} terms"
            )


def positive_series(term: Callable[[int], float], start: int, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Sum a positive, eventually super-geometrically decaying series from ``start``.

    Stops once a term is below ``rel_tol * 1e-3`` of the partial sum and the
    ratio of consecutive terms certifies the remainder. Used for the
    one-sided proof constants.
    """
    terms: list[float] = []
    k = start
    prev = None
    while True:
        v = term(k)
        terms.append(v)
        total = math.fsum(terms)
        if prev is not None and prev > 0:
            ratio = v / prev
            if ratio < 0.5 and v * ratio / (1 - ratio) <= budget.rel_tol * 1e-3 * total:
                return total
        if len(terms) >= budget.max_terms:
            raise BudgetExceeded("positive series did not converge")
        prev = v
        k += 1
