"""Centered and alternating lattice theta functions, their bounds and energies."""
from .errors import MaxThetaError
from .lattice import LatticeParam, QuadraticForm, hexagonal, reduce_to_fundamental, square
from .series import DEFAULT_BUDGET, SeriesBudget
from .theta2d import theta_alternating, theta_centered, theta_character, theta_plain, theta_shifted

__version__ = "0.1.0"

__all__ = [
    "MaxThetaError", "LatticeParam", "QuadraticForm", "hexagonal", "square", "reduce_to_fundamental",
    "SeriesBudget", "DEFAULT_BUDGET", "theta_plain", "theta_centered", "theta_alternating",
    "theta_shifted", "theta_character",
]
