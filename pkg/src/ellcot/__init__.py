"""Elliptic generalizations of cotangent Dirichlet series and Dedekind-Rademacher sums."""
from .numeric import (CapacityError, DomainError, EllcotError, PoleError, RadiusError, RangeError,
                      SeriesResult, TruncationPolicy, precision_mode, set_precision)
from .quadratic import QuadraticNumber, pell_4, pell_alpha
from .modular import CharMatrix, CharVector, UnimodularMatrix
from .thetakron import ModularParameter, elliptic_bernoulli, kronecker_F, theta
from .series import berndt_rhs, cot_dirichlet, elliptic_gen_cot, gen_cot
from .ellsums import edr_sum, hat_r, hat_s, r_poly, taylor00
from .verify import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DomainError", "EllcotError", "PoleError", "RadiusError", "RangeError",
    "SeriesResult", "TruncationPolicy", "precision_mode", "set_precision",
    "QuadraticNumber", "pell_4", "pell_alpha",
    "CharMatrix", "CharVector", "UnimodularMatrix",
    "ModularParameter", "elliptic_bernoulli", "kronecker_F", "theta",
    "berndt_rhs", "cot_dirichlet", "elliptic_gen_cot", "gen_cot",
    "edr_sum", "hat_r", "hat_s", "r_poly", "taylor00",
    "VerificationReport",
]
