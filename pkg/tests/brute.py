"""Direct lattice sums used as independent oracles."""
import math

import numpy as np


def square_sum(N, signed, s, chunk=200):
    """sum' over |k|, |l| <= N of (+-1)^(k+l) |v|^-s on Z^2, accumulated block by block."""
    k = np.arange(-N, N + 1.0)
    parts = []
    for i in range(0, k.size, chunk):
        l = k[i:i + chunk, None]
        r2 = k[None, :] ** 2 + l ** 2
        with np.errstate(divide="ignore"):
            w = np.where(r2 > 0, r2 ** (-s / 2), 0.0)
        if signed:
            w = w * (-1.0) ** (np.abs(k[None, :]) + np.abs(l))
        parts.append(math.fsum(w.ravel()))
    return math.fsum(parts)


def square_tail_s4(N):
    """Continuum estimate of sum |v|^-4 outside the square of half side N + 1/2."""
    return (math.pi / 2 + 1) / (N + 0.5) ** 2
