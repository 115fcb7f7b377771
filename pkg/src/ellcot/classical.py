"""Classical objects reached in the tau -> i*infinity limit.

Bernoulli numbers and polynomials, periodic Bernoulli functions, Clausen
functions, generalized Dedekind-Rademacher sums and the cotangent sum.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import numeric
from .numeric import INT_TOL, CapacityError, DomainError, MP

BERNOULLI_TABLE_MAX = 64
_BERN_INTERNAL_MAX = 200  # the Laurent series of F needs high orders internally


@lru_cache(maxsize=None)
def _bernoulli_list(upto):
    b = [Fraction(1)]
    for m in range(1, upto + 1):
        # sum_{j=0}^{m} C(m+1, j) B_j = 0
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * b[j]
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli_number(k):
    """Exact B_k (B_1 = -1/2) for 0 <= k <= 64."""
    if k < 0:
        raise DomainError("k must be non-negative")
    if k > BERNOULLI_TABLE_MAX:
        raise CapacityError(f"Bernoulli table stops at {BERNOULLI_TABLE_MAX}")
    return _bernoulli_list(BERNOULLI_TABLE_MAX)[k]


def bernoulli_float(k):
    """Float B_k for the internal range used by series coefficients."""
    return float(_bernoulli_list(_BERN_INTERNAL_MAX)[k])


@lru_cache(maxsize=None)
def binom_bernoulli_table(M):
    """Array T[m, k] = C(m, k) B_k for 0 <= k <= m <= M."""
    b = _bernoulli_list(max(M, 1))
    t = np.zeros((M + 1, M + 1))
    for m in range(M + 1):
        for k in range(m + 1):
            t[m, k] = float(math.comb(m, k) * b[k])
    return t


def bernoulli_poly(m, x):
    """B_m(x) = sum_k C(m,k) B_k x^(m-k); exact for Fraction/int input."""
    b = _bernoulli_list(max(m, 1))
    if isinstance(x, (Fraction, int)):
        return sum(math.comb(m, k) * b[k] * Fraction(x) ** (m - k) for k in range(m + 1))
    # Horner, highest power first
    acc = 0.0
    for k in range(m + 1):
        acc = acc * x + float(math.comb(m, k) * b[k])
    return acc


def periodic_bernoulli(m, x, tol=INT_TOL):
    """B~_m(x) = B_m({x}), with B~_1 = 0 at integers."""
    if m == 0:
        return Fraction(1) if isinstance(x, (Fraction, int)) else 1.0
    if isinstance(x, (Fraction, int)):
        f = Fraction(x) - math.floor(Fraction(x))
        if m == 1 and f == 0:
            return Fraction(0)
        return bernoulli_poly(m, f)
    if m == 1 and numeric.is_integral(x, tol):
        return 0.0
    return bernoulli_poly(m, numeric.reduce_unit(x, tol))


def clausen(l, x):
    """Cl_l(x): sum sin(2 pi m x)/m^l for even l, sum cos(2 pi m x)/m^l for odd l."""
    if int(l) != l or l < 2:
        raise DomainError("clausen needs an integer l >= 2")
    if isinstance(x, Fraction):
        x = x - math.floor(x)
    else:
        x = numeric.reduce_unit(float(x), 0.0)
    ctx = MP if numeric.extended() else mpmath.mp
    with ctx.workprec(ctx.prec + 20):
        xm = ctx.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else ctx.mpf(x)
        val = ctx.polylog(int(l), ctx.expjpi(2 * xm))
    part = val.imag if l % 2 == 0 else val.real
    return +part if numeric.extended() else float(part)


def _rational_parts(r):
    from .modular import rational_parts
    return rational_parts(r)


def gen_dr_sum(m, n, r, x, y, tol=INT_TOL):
    """S_{m,n}(r,x,y) = sum_{j mod d} B~_m((j+y)/d) B~_n(n(r)(j+y)/d - x)."""
    num, den = _rational_parts(r)
    exact = all(isinstance(v, (Fraction, int)) for v in (x, y))
    acc = Fraction(0) if exact else 0.0
    for j in range(den):
        u = Fraction(j + y, den) if exact else (j + y) / den
        acc += periodic_bernoulli(m, u, tol) * periodic_bernoulli(n, num * u - x, tol)
    return acc


def cotangent_sum(r, x, y, tol=INT_TOL):
    """(1/d) sum' cot(pi (j+y)/d) cot(pi (n(r)(j+y)/d - x)); integral arguments skipped."""
    num, den = _rational_parts(r)
    acc = 0.0
    for j in range(den):
        u = (j + y) / den
        v = num * u - x
        if numeric.is_integral(u, tol) or numeric.is_integral(v, tol):
            continue
        acc += 1.0 / (math.tan(math.pi * u) * math.tan(math.pi * v))
    return acc / den


def dedekind_s1(q):
    """Textbook closed form s(1, q) = (q-1)(q-2)/(12 q)."""
    return Fraction((q - 1) * (q - 2), 12 * q)
