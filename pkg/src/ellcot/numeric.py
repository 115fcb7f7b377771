"""Numeric substrate: e(z), angle reductions, zeta values and series bookkeeping.

Precision is a process-wide setting read from ``ELLCOT_PRECISION``
(``double`` or ``extended``) at import time.  Extended mode routes the scalar
special functions through an mpmath context with 113-bit mantissas.
"""
from __future__ import annotations

import cmath
import json
import math
import os
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath

INT_TOL = 1e-9
POLE_CUTOFF = 1e-8
EXTENDED_BITS = 113

# private context so that we never disturb the caller's mpmath.mp settings
MP = mpmath.MPContext()
MP.prec = EXTENDED_BITS


class EllcotError(Exception):
    """Base class of all library errors."""


class DomainError(EllcotError, ValueError):
    pass


class PoleError(EllcotError, ZeroDivisionError):
    pass


class RangeError(EllcotError, OverflowError):
    pass


class RadiusError(EllcotError, ValueError):
    pass


class CapacityError(EllcotError):
    pass


def _read_mode():
    mode = os.environ.get("ELLCOT_PRECISION", "double").strip().lower()
    if mode not in ("double", "extended"):
        raise DomainError(f"ELLCOT_PRECISION must be 'double' or 'extended', got {mode!r}")
    return mode


_MODE = _read_mode()
_mode_listeners = []


def precision_mode():
    return _MODE


def extended():
    return _MODE == "extended"


def set_precision(mode):
    """Switch the global precision mode.

    Meant for start-up code and tests; every registered cache is cleared so
    that no table computed in the old mode survives.
    """
    global _MODE
    if mode not in ("double", "extended"):
        raise DomainError(f"unknown precision mode {mode!r}")
    _MODE = mode
    for fn in _mode_listeners:
        fn()


def on_mode_change(fn):
    _mode_listeners.append(fn)
    return fn


# ---------------------------------------------------------------- scalars

def to_complex(z):
    """Coerce numbers (including mpmath ones) to a Python complex."""
    if isinstance(z, complex):
        return z
    if isinstance(z, (mpmath.mpc, mpmath.mpf)) or hasattr(z, "imag"):
        return complex(float(z.real), float(z.imag))
    return complex(z)


def check_finite(z, what="value"):
    c = to_complex(z)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise RangeError(f"non-finite {what}: {z!r}")
    return z


def cexp2pii(z):
    """e(z) = exp(2 pi i z)."""
    if extended():
        return MP.expjpi(2 * MP.mpc(z))
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise RangeError(f"e(z) needs finite z, got {z!r}")
    if -2 * math.pi * z.imag > 709.0:
        raise RangeError(f"e(z) overflows for Im z = {z.imag}")
    # reduce the real part so large real arguments keep full phase accuracy
    re = z.real - math.floor(z.real)
    return cmath.exp(2j * math.pi * complex(re, z.imag))


def angle_split(x):
    """Return ([[x]], <<x>>) with x = [[x]] + <<x>> and -1/2 < <<x>> <= 1/2."""
    n = math.ceil(x - Fraction(1, 2)) if isinstance(x, Fraction) else math.ceil(x - 0.5)
    return int(n), x - n


def is_integral(x, tol=INT_TOL):
    return abs(x - round(x)) <= tol


def frac_parts(x, tol=INT_TOL):
    """Return (<x>, {x}, chi(x)) with 0 < <x> <= 1 and 0 <= {x} < 1."""
    if is_integral(x, tol):
        return (1.0, 0.0, 1)
    f = x - math.floor(x)
    return (f, f, 0)


def reduce_unit(x, tol=INT_TOL):
    """{x} in [0,1), snapped to 0 when x is within ``tol`` of an integer."""
    if is_integral(x, tol):
        return 0.0
    f = x - math.floor(x)
    return 0.0 if f >= 1.0 else f


def riemann_zeta(s):
    """zeta(s) for integers s >= 2."""
    if int(s) != s or s < 2:
        raise DomainError(f"riemann_zeta needs an integer s >= 2, got {s!r}")
    if extended():
        return MP.zeta(int(s))
    return float(mpmath.zeta(int(s)))


def rel_residual(lhs, rhs):
    """|lhs - rhs| / max(|lhs|, |rhs|, 1)."""
    a, b = to_complex(lhs), to_complex(rhs)
    return abs(a - b) / max(abs(a), abs(b), 1.0)


# ------------------------------------------------------------- bookkeeping

@dataclass(frozen=True)
class TruncationPolicy:
    max_index: int = 400
    tail_tol: float = 1e-17
    theta_terms: int = 8

    def __post_init__(self):
        if int(self.max_index) != self.max_index or self.max_index < 1:
            raise DomainError("max_index must be a positive integer")
        if not self.tail_tol > 0:
            raise DomainError("tail_tol must be positive")
        if int(self.theta_terms) != self.theta_terms or self.theta_terms < 1:
            raise DomainError("theta_terms must be a positive integer")

    def with_(self, **kw):
        return replace(self, **kw)

    @classmethod
    def from_mapping(cls, data, base=None):
        base = base or cls()
        known = {k: data[k] for k in ("max_index", "tail_tol", "theta_terms") if k in data}
        extra = set(data) - set(known)
        if extra:
            raise DomainError(f"unknown policy keys: {sorted(extra)}")
        return replace(base, **known)

    @classmethod
    def from_json(cls, path, base=None):
        with open(path) as fh:
            return cls.from_mapping(json.load(fh), base)


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    est_tail: float
    terms_used: int

    def __post_init__(self):
        if not self.est_tail >= 0:
            raise DomainError("est_tail must be non-negative")
