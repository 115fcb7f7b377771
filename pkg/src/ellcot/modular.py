"""SL2(Z) matrices, their actions, and character vectors/matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import numeric
from .numeric import INT_TOL, DomainError, PoleError
from .quadratic import QuadraticNumber


# ------------------------------------------------------------ characters

@dataclass(frozen=True)
class CharVector:
    """x = (x', x); ``xp`` is the primed component."""

    xp: float
    x: float

    def __add__(self, other):
        return CharVector(self.xp + other.xp, self.x + other.x)

    def __sub__(self, other):
        return CharVector(self.xp - other.xp, self.x - other.x)

    def __neg__(self):
        return CharVector(-self.xp, -self.x)

    def scale(self, k):
        return CharVector(k * self.xp, k * self.x)

    def is_integral(self, tol=INT_TOL):
        return numeric.is_integral(self.xp, tol) and numeric.is_integral(self.x, tol)

    def dot(self, other):
        return self.xp * other.xp + self.x * other.x

    def as_tuple(self):
        return (self.xp, self.x)


def as_charvector(v):
    if isinstance(v, CharVector):
        return v
    xp, x = v
    return CharVector(xp, x)


@dataclass(frozen=True)
class CharMatrix:
    """M = (x; y) with rows x = (x', x) and y = (y', y)."""

    row_x: CharVector
    row_y: CharVector

    @classmethod
    def of(cls, xp, x, yp, y):
        return cls(CharVector(xp, x), CharVector(yp, y))

    @classmethod
    def parse(cls, text):
        try:
            vals = [float(t) for t in text.split(",")]
        except ValueError as exc:
            raise DomainError(f"expected x',x,y',y reals, got {text!r}") from exc
        if len(vals) != 4:
            raise DomainError(f"expected four entries x',x,y',y, got {text!r}")
        return cls.of(*vals)

    def __neg__(self):
        return CharMatrix(-self.row_x, -self.row_y)

    def as_tuple(self):
        return self.row_x.as_tuple() + self.row_y.as_tuple()


# -------------------------------------------------------------- matrices

@dataclass(frozen=True)
class UnimodularMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for v in (self.a, self.b, self.c, self.d):
            if int(v) != v:
                raise DomainError("matrix entries must be integers")
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError(f"determinant of {self.as_tuple()} is not 1")

    @classmethod
    def parse(cls, text):
        try:
            a, b, c, d = (int(t) for t in text.split(","))
        except ValueError as exc:
            raise DomainError(f"expected a,b,c,d integers, got {text!r}") from exc
        return cls(a, b, c, d)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o):
        return UnimodularMatrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                                self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self):
        return UnimodularMatrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def j(self, z):
        return self.c * z + self.d


I = UnimodularMatrix(1, 0, 0, 1)
T = UnimodularMatrix(1, 1, 0, 1)
T_INV = UnimodularMatrix(1, -1, 0, 1)
S = UnimodularMatrix(0, -1, 1, 0)
GENERATORS = {"T": T, "Tinv": T_INV, "S": S}


def _is_zero(v):
    if isinstance(v, QuadraticNumber):
        return v.sign() == 0
    return v == 0


def mobius_with_factor(V, z):
    """((a z + b)/(c z + d), c z + d); exact for Fraction and QuadraticNumber z."""
    jz = V.c * z + V.d
    if _is_zero(jz):
        raise PoleError(f"j(V; z) = 0 for V = {V.as_tuple()}")
    if isinstance(z, complex) or isinstance(z, float):
        if abs(jz) < numeric.POLE_CUTOFF:
            raise PoleError("j(V; z) vanishes numerically")
        return (V.a * z + V.b) / jz, jz
    if isinstance(z, int):
        z = Fraction(z)
    return (V.a * z + V.b) / jz, jz


def rational_parts(r):
    """(n(r), d(r)) with r = n/d, gcd 1 and d >= 1; 0 -> (0, 1)."""
    f = r if isinstance(r, Fraction) else Fraction(r)
    return f.numerator, f.denominator


def as_rational(r):
    if isinstance(r, Fraction):
        return r
    if isinstance(r, str):
        try:
            return Fraction(r.strip())
        except ValueError as exc:
            raise DomainError(f"cannot parse rational {r!r}") from exc
    if isinstance(r, float):
        raise DomainError("pass rationals as Fraction or 'n/d' strings, not floats")
    return Fraction(r)


def act_rational(V, r):
    """(n(Vr), d(Vr), sgn j(V;r)) with (n, d)(Vr) = sgn(j) V (n(r), d(r))^T."""
    n, d = rational_parts(as_rational(r))
    jr = Fraction(V.c * n + V.d * d, d)
    if jr == 0:
        raise PoleError(f"j(V; r) = 0 for V = {V.as_tuple()}, r = {n}/{d}")
    sg = 1 if jr > 0 else -1
    n2, d2 = sg * (V.a * n + V.b * d), sg * (V.c * n + V.d * d)
    assert d2 >= 1 and math.gcd(n2, d2) == 1
    return n2, d2, sg


def act_char(V, M):
    """V M = (a x + b y; c x + d y)."""
    x, y = M.row_x, M.row_y
    return CharMatrix(x.scale(V.a) + y.scale(V.b), x.scale(V.c) + y.scale(V.d))


def admissible(V, M, tol=INT_TOL):
    """Membership in the set where y and c x + d y avoid Z^2."""
    y = M.row_y
    w = M.row_x.scale(V.c) + y.scale(V.d)
    return int(not y.is_integral(tol) and not w.is_integral(tol))


def admissible_r(r, M, tol=INT_TOL):
    """Membership in the set where x and d(r) x - n(r) y avoid Z^2."""
    n, d = rational_parts(as_rational(r))
    w = M.row_x.scale(d) - M.row_y.scale(n)
    return int(not M.row_x.is_integral(tol) and not w.is_integral(tol))


def recompose(word):
    out = I
    for g in word:
        out = out @ GENERATORS[g]
    return out


def decompose_generators(V):
    """Word over {T, Tinv, S}, listed left to right, whose product is V.

    Euclid on the first column: V = T^q S V' with V' having a smaller lower
    left entry; a final -I is written as S S.
    """
    word = []
    cur = V
    while cur.c != 0:
        q = cur.a // cur.c  # |a - q c| < |c| for either sign of c
        word.extend(["T"] * q if q >= 0 else ["Tinv"] * (-q))
        cur = UnimodularMatrix(cur.a - q * cur.c, cur.b - q * cur.d, cur.c, cur.d)
        # cur = S (S^-1 cur); S^-1 = (0, 1; -1, 0)
        word.append("S")
        cur = UnimodularMatrix(cur.c, cur.d, -cur.a, -cur.b)
    if cur.a == -1:
        word.extend(["S", "S"])
        cur = -cur
    b = cur.b
    word.extend(["T"] * b if b >= 0 else ["Tinv"] * (-b))
    return word
