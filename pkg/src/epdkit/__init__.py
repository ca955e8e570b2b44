"""Normalized Bessel functions of complex order, their zeros, the
Euler-Poisson-Darboux propagator on periodic grids, two-snapshot
reconstruction and Liouville-type numbers built from zero ratios."""

__version__ = "0.1.0"

from .bessel import BesselEvaluator, gamma_scaled_j, j, j_asymptotic, j_derivative, j_series
from .epd import EpdMultiplier, propagate
from .errors import (BracketError, DomainError, EpdError, IncompatibleError, PoleError,
                     RegimeError)
from .grid import GridFunction
from .liouville import generalized_lattice, theta, theta_chain
from .snapshot import SnapshotProblem, make_problem, reconstruct
from .zeros import ZeroLattice, complex_zeros, real_zeros, zero_lattice

__all__ = [
    "BesselEvaluator", "BracketError", "DomainError", "EpdError", "EpdMultiplier",
    "GridFunction", "IncompatibleError", "PoleError", "RegimeError", "SnapshotProblem",
    "ZeroLattice", "complex_zeros", "gamma_scaled_j", "generalized_lattice", "j",
    "j_asymptotic", "j_derivative", "j_series", "make_problem", "propagate", "real_zeros",
    "reconstruct", "theta", "theta_chain", "zero_lattice",
]
