"""Exact arithmetic in real quadratic fields Q(sqrt D).

Also Pell-type +-4 units, exact continued fractions and effective
badly-approximable constants for quadratic irrationals.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .numeric import CapacityError, DomainError


def _squarefree(D):
    if D < 2:
        return False
    f = 2
    while f * f <= D:
        if D % (f * f) == 0:
            return False
        f += 1
    return True


class QuadraticNumber:
    """The number (p + q sqrt D)/den with integers p, q and den >= 1."""

    __slots__ = ("p", "q", "D", "den")

    def __init__(self, p, q, D, den=1):
        p, q, D, den = int(p), int(q), int(D), int(den)
        if not _squarefree(D):
            raise DomainError(f"D must be squarefree and > 1, got {D}")
        if den == 0:
            raise DomainError("zero denominator")
        if den < 0:
            p, q, den = -p, -q, -den
        g = math.gcd(math.gcd(p, q), den)
        self.p, self.q, self.D, self.den = p // g, q // g, D, den // g

    @classmethod
    def parse(cls, text):
        """Parse the CLI form "p,q,D,den"."""
        try:
            p, q, D, den = (int(t) for t in text.split(","))
        except ValueError as exc:
            raise DomainError(f"expected p,q,D,den integers, got {text!r}") from exc
        return cls(p, q, D, den)

    @classmethod
    def sqrt(cls, D):
        return cls(0, 1, D, 1)

    @classmethod
    def golden(cls):
        return cls(1, 1, 5, 2)

    # -- coercion ----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, QuadraticNumber):
            if other.D != self.D:
                raise DomainError(f"mixed fields Q(sqrt {self.D}) and Q(sqrt {other.D})")
            return other
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return QuadraticNumber(f.numerator, 0, self.D, f.denominator)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.p * o.den + o.p * self.den, self.q * o.den + o.q * self.den,
                               self.D, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.p, -self.q, self.D, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.p * o.p + self.q * o.q * self.D, self.p * o.q + self.q * o.p,
                               self.D, self.den * o.den)

    __rmul__ = __mul__

    def conj(self):
        return QuadraticNumber(self.p, -self.q, self.D, self.den)

    def norm(self):
        return Fraction(self.p * self.p - self.q * self.q * self.D, self.den * self.den)

    def trace(self):
        return Fraction(2 * self.p, self.den)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise DomainError("division by zero in quadratic field")
        c = self.conj()
        return QuadraticNumber(c.p * n.denominator, c.q * n.denominator, self.D, c.den * n.numerator)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        e = int(e)
        base = self if e >= 0 else self.inverse()
        out = QuadraticNumber(1, 0, self.D, 1)
        for _ in range(abs(e)):
            out = out * base
        return out

    # -- predicates and comparison -------------------------------------------
    def is_rational(self):
        return self.q == 0

    def sign(self):
        """Exact sign of p + q sqrt D."""
        p, q = self.p, self.q
        sp, sq = (p > 0) - (p < 0), (q > 0) - (q < 0)
        if sq == 0 or sp == sq:
            return sp or sq
        if sp == 0:
            return sq
        # opposite signs: the larger of p^2 and q^2 D wins
        return sp if p * p > q * q * self.D else sq

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, float) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return (self.p, self.q, self.den) == (o.p, o.q, o.den)

    def __hash__(self):
        return hash((self.p, self.q, self.D, self.den))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def floor(self):
        guess = math.floor(self.to_float())
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    # -- conversion -------------------------------------------------------------
    def to_fraction_approx(self, bits=200):
        """Rational within 2^-bits / den of the value (used for rounding)."""
        scale = 1 << bits
        s = math.isqrt(self.q * self.q * self.D * scale * scale)
        s = s if self.q >= 0 else -s
        return Fraction(self.p * scale + s, self.den * scale)

    def to_float(self):
        if self.q == 0:
            return float(Fraction(self.p, self.den))
        return float(self.to_fraction_approx())

    __float__ = to_float

    def to_mp(self, ctx):
        return (ctx.mpf(self.p) + self.q * ctx.sqrt(self.D)) / self.den

    def __repr__(self):
        return f"QuadraticNumber({self.p}, {self.q}, {self.D}, {self.den})"

    def __str__(self):
        return f"({self.p}{self.q:+d}*sqrt({self.D}))/{self.den}"


def as_quadratic(alpha):
    if isinstance(alpha, QuadraticNumber):
        return alpha
    if isinstance(alpha, str):
        return QuadraticNumber.parse(alpha)
    if isinstance(alpha, (tuple, list)) and len(alpha) == 4:
        return QuadraticNumber(*alpha)
    raise DomainError(f"cannot interpret {alpha!r} as a quadratic number")


def require_irrational(alpha):
    alpha = as_quadratic(alpha)
    if alpha.is_rational():
        raise DomainError("alpha must be irrational")
    return alpha


def pell_4(c, cap=10**6):
    """Smallest b >= 1 (then smallest a > 0) with a^2 - c b^2 = +-4."""
    if not _squarefree(int(c)):
        raise DomainError(f"c must be squarefree and > 1, got {c}")
    for b in range(1, cap + 1):
        for eps in (-1, 1):
            t = c * b * b + 4 * eps
            if t > 0:
                a = math.isqrt(t)
                if a * a == t:
                    return a, b, eps
    raise CapacityError(f"no +-4 Pell solution with b <= {cap}")


def pell_alpha(c, cap=10**6):
    """(alpha, eps) with alpha = (a + b sqrt c)/2 from :func:`pell_4`."""
    a, b, eps = pell_4(c, cap)
    return QuadraticNumber(a, b, c, 2), eps


def cf_expansion(alpha, count):
    """First ``count`` partial quotients of alpha, computed exactly."""
    x = require_irrational(alpha)
    out = []
    for _ in range(count):
        a = x.floor()
        out.append(a)
        x = (x - a).inverse()
    return out


def cf_period(alpha, limit=10000):
    """(preperiod, period) partial quotients of a quadratic irrational."""
    x = require_irrational(alpha)
    seen = {}
    quots = []
    while len(quots) < limit:
        key = (x.p, x.q, x.den)
        if key in seen:
            start = seen[key]
            return quots[:start], quots[start:]
        seen[key] = len(quots)
        a = x.floor()
        quots.append(a)
        x = (x - a).inverse()
    raise CapacityError("continued fraction period not found")


def approx_constant(alpha):
    """Effective C with |alpha l + k| > 1/(C |l|) for all integers k and l != 0.

    Convergents satisfy |q alpha - p| > 1/((a_{n+1} + 2) q); best
    approximation covers every other l, and we double the constant.
    """
    pre, per = cf_period(alpha)
    tail = (pre + per)[1:] or per
    return 2.0 * (max(tail + per) + 2)


def scan_approx(alpha, lmax):
    """min over 1 <= l <= lmax of |alpha l + k| * l with k the nearest integer."""
    ls = np.arange(1, lmax + 1)
    _, frac = split_multiples(alpha, ls)
    return float(np.min(np.abs(frac) * ls))


def split_multiples(alpha, n):
    """Return ([[n alpha]], <<n alpha>>) for an integer array n, accurate to ~1e-16.

    alpha - floor(alpha) is split as hi + lo with hi carrying 26 bits, so
    n * hi is exact for |n| < 2^27 and the fractional part keeps full
    absolute accuracy even where n alpha is large.
    """
    alpha = as_quadratic(alpha)
    n = np.asarray(n, dtype=np.int64)
    if np.any(np.abs(n) >= 2**27):
        raise CapacityError("multiples beyond 2^27 are not supported")
    ip = alpha.floor()
    beta = alpha - ip
    hi = Fraction(round(beta.to_fraction_approx() * 2**26), 2**26)
    lo = float((beta - hi).to_fraction_approx())
    t = n.astype(np.float64) * float(hi)
    rt = np.round(t)
    f = (t - rt) + n.astype(np.float64) * lo
    # centre into (-1/2, 1/2]
    k = np.ceil(f - 0.5)
    f = f - k
    nearest = n * ip + rt.astype(np.int64) + k.astype(np.int64)
    return nearest, f
