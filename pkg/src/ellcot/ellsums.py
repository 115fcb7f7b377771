"""Elliptic Dedekind-Rademacher sums, the R_V polynomials and their two-variable lifts."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _dd, numeric
from .classical import cotangent_sum, gen_dr_sum
from .modular import (CharMatrix, CharVector, admissible, as_rational,
                      rational_parts)
from .numeric import MP, DomainError, PoleError, RadiusError
from .thetakron import (ModularParameter, _bern_J, as_modular, elliptic_bernoulli,
                        elliptic_bernoulli_batch, kronecker_F_deriv_reduced)

TWO_PI_I = 2j * math.pi


def _check_proviso(m, n, num, den, M):
    if m in (1, 2) or n in (1, 2):
        w = M.row_y.scale(num) - M.row_x.scale(den)
        if M.row_y.is_integral() or w.is_integral():
            raise DomainError("B_1 and B_2 need y and n(r) y - d(r) x outside Z^2")


def _edr_points(num, den, M):
    yp, y, xp, x = (float(v) for v in (M.row_y.xp, M.row_y.x, M.row_x.xp, M.row_x.x))
    jp, j = np.meshgrid(np.arange(den), np.arange(den), indexing="ij")
    up = (jp.ravel() + yp) / den
    u = (j.ravel() + y) / den
    return up, u, num * up - xp, num * u - x


def _hp(hp):
    return numeric.extended() if hp is None else bool(hp)


@lru_cache(maxsize=8)
def _bt_dd(L):
    return _dd.binom_bernoulli_dd(L)


def _edr_table_raw(L, num, den, M, tau):
    """d(r) S_{m,n} for m, n <= L as an array of complex double-doubles."""
    ent = [_dd.to_dd(v) for v in (M.row_y.xp, M.row_y.x, M.row_x.xp, M.row_x.x)]
    P = _dd.edr_points(num, den, *[h for pair in ent for h in pair])
    J = _bern_J(L, tau.imag, log_eps=-80.0)
    hi, lo = _bt_dd(L)
    Bu = _dd.ebern_points(P[0], P[1], P[2], P[3], tau.real, tau.imag, L, J, hi, lo)
    Bv = _dd.ebern_points(P[4], P[5], P[6], P[7], tau.real, tau.imag, L, J, hi, lo)
    return _dd.pair_table(Bu, Bv)


def _edr_table_dd(L, num, den, M, tau):
    """S_{m,n} for m, n <= L as mpmath numbers, summed in double-double."""
    T = _edr_table_raw(L, num, den, M, tau)
    return [[_dd.to_mp(MP, T[m, k]) / den for k in range(L + 1)] for m in range(L + 1)]


def bernoulli_hp(m, xv, mp):
    """B_m(x; tau) in double-double, returned as an mpmath number (x may hold Fractions)."""
    mp = as_modular(mp)
    if m in (1, 2) and xv.is_integral():
        raise DomainError(f"B_{m} is discontinuous on Z^2")
    xp, x = _dd.to_dd(xv.xp), _dd.to_dd(xv.x)
    hi, lo = _bt_dd(m)
    J = _bern_J(m, mp.tau.imag, log_eps=-80.0)
    out = _dd.ebern_points(np.array([xp[0]]), np.array([xp[1]]), np.array([x[0]]), np.array([x[1]]),
                           mp.tau.real, mp.tau.imag, m, J, hi, lo)
    return _dd.to_mp(MP, out[0, m])


def edr_sum(m, n, r, M, mp, hp=None):
    """S_{m,n}(r, M; tau) = (1/d) sum_{j', j mod d} B_m((j+y)/d) B_n(n (j+y)/d - x).

    With ``hp`` (default: the extended precision mode) the sum is formed in
    double-double arithmetic and returned as an mpmath number.
    """
    if int(m) != m or int(n) != n or m < 0 or n < 0:
        raise DomainError("m and n must be non-negative integers")
    # r = 0 (n = 0, d = 1) is accepted: R_S and V r = 0 both need it
    r = as_rational(r)
    num, den = rational_parts(r)
    mp = as_modular(mp)
    _check_proviso(m, n, num, den, M)
    if _hp(hp):
        return _dd.to_mp(MP, _edr_table_raw(max(m, n), num, den, M, mp.tau)[m, n]) / den
    up, u, vp, v = _edr_points(num, den, M)
    top = max(m, n)
    Bu = elliptic_bernoulli_batch(top, up, u, mp)[:, m]
    Bv = elliptic_bernoulli_batch(top, vp, v, mp)[:, n]
    return complex(np.sum(Bu * Bv) / den)


def edr_table(L, r, M, mp, hp=None):
    """Matrix T[m, n] = S_{m,n}(r, M; tau) for m, n <= L, sharing one B evaluation."""
    r = as_rational(r)
    num, den = rational_parts(r)
    mp = as_modular(mp)
    _check_proviso(1, 1, num, den, M)
    if _hp(hp):
        return _edr_table_dd(L, num, den, M, mp.tau)
    up, u, vp, v = _edr_points(num, den, M)
    Bu = elliptic_bernoulli_batch(L, up, u, mp)
    Bv = elliptic_bernoulli_batch(L, vp, v, mp)
    return Bu.T @ Bv / den


def edr_degeneration_rhs(m, n, r, M):
    """Classical limit of Re S_{m,n}(r, M; tau) as tau -> i infinity.

    For m = n = 1 with integral x and y both factors keep a cotangent part
    (B_1((u', 0); tau) tends to (i/2) cot(pi u')), which leaves the extra
    term -C(r, x', y')/4.
    """
    r = as_rational(r)
    x, y = M.row_x.x, M.row_y.x
    val = gen_dr_sum(m, n, r, x, y)
    if m == 1 and n == 1 and numeric.is_integral(x) and numeric.is_integral(y):
        val = float(val) - 0.25 * cotangent_sum(r, M.row_x.xp, M.row_y.xp)
    return float(val)


# ----------------------------------------------------------- R_V polynomials

def _positive(V):
    return -V if V.c < 0 else V


@lru_cache(maxsize=512)
def _r_coeffs(V, l, M, tau, hp):
    """[C(l+1, k+1) S_{k+1, l-k}(d/c, (-x; y); tau)] for k = -1..l, c > 0."""
    Mm = CharMatrix(-M.row_x, M.row_y)
    if hp:
        _check_proviso(1, 1, V.d, V.c, Mm)
        T = _edr_table_raw(l + 1, V.d, V.c, Mm, tau)
        return tuple(math.comb(l + 1, k + 1) * _dd.to_mp(MP, T[k + 1, l - k]) / V.c
                     for k in range(-1, l + 1))
    T = edr_table(l + 1, Fraction(V.d, V.c), Mm, ModularParameter(tau), False)
    return tuple(math.comb(l + 1, k + 1) * complex(T[k + 1, l - k]) for k in range(-1, l + 1))


def _mp_number(z):
    if isinstance(z, Fraction):
        return MP.mpf(z.numerator) / z.denominator
    if isinstance(z, int):
        return MP.mpf(z)
    return MP.mpc(z)


def r_poly(V, l, M, z, mp, hp=None):
    """R_V(l, z, M; tau); zero for c = 0 and R_{-V} for c < 0.

    The S-coefficients are cached per (V, l, M, tau), so further values of
    z cost O(l).  With ``hp`` everything is carried in extended precision
    and z may be an mpmath number or a Fraction.
    """
    if int(l) != l or l < 1:
        raise DomainError("l must be a positive integer")
    mp = as_modular(mp)
    if not admissible(V, M):
        raise DomainError("M is not admissible for V (y or c x + d y lies in Z^2)")
    hp = _hp(hp)
    if V.c == 0:
        return MP.mpc(0) if hp else 0j
    V = _positive(V)
    if hp:
        jz = V.c * _mp_number(z) + V.d
        if abs(jz) < numeric.POLE_CUTOFF:
            raise PoleError("j(V; z) = 0")
        coeffs = _r_coeffs(V, int(l), M, mp.tau, True)
        acc = MP.fsum(cf * (-jz) ** k for k, cf in zip(range(-1, l + 1), coeffs))
        return (2j * MP.pi) ** (l + 1) / MP.factorial(l + 1) * acc
    jz = V.c * z + V.d
    jz = complex(jz) if not isinstance(jz, Fraction) else float(jz)
    if abs(jz) < numeric.POLE_CUTOFF:
        raise PoleError("j(V; z) = 0")
    coeffs = _r_coeffs(V, int(l), M, mp.tau, False)
    mj = -jz
    acc = 0j
    # k = -1 carries (-j)^-1
    for k, cf in zip(range(-1, l + 1), coeffs):
        acc += cf * mj ** k
    return TWO_PI_I ** (l + 1) / math.factorial(l + 1) * acc


def r_poly_coefficients(V, l, M, mp, hp=None):
    """Coefficient vector of (-j)^k, k = -1..l, without the (2 pi i)^(l+1)/(l+1)! factor."""
    mp = as_modular(mp)
    if V.c == 0:
        return (0j,) * (l + 2)
    return _r_coeffs(_positive(V), int(l), M, mp.tau, _hp(hp))


# ------------------------------------------------------- two-variable lifts

def _F(k, v, X, mp):
    return kronecker_F_deriv_reduced(k, v, X, mp)


def hat_s(k, lmk, r, M, X, Y, mp):
    """(1/d) sum_{j mod d} F^(k)((j+y)/d; n Y - d X) F^(lmk)(n (j+y)/d - x; -Y).

    ``k`` and ``lmk`` are derivative orders, so hat_s(0, l-1, ...) is S^_{1,l}.
    """
    if min(k, lmk) < 0:
        raise DomainError("derivative orders must be non-negative")
    r = as_rational(r)
    num, den = rational_parts(r)
    mp = as_modular(mp)
    X, Y = complex(X), complex(Y)
    A = num * Y - den * X
    acc = 0j
    for jp in range(den):
        for j in range(den):
            u = CharVector((jp + M.row_y.xp) / den, (j + M.row_y.x) / den)
            v = CharVector(num * u.xp - M.row_x.xp, num * u.x - M.row_x.x)
            acc += _F(k, u, A, mp) * _F(lmk, v, -Y, mp)
    return acc / den


def hat_s_display(k, l, V, M, X, Y, mp):
    """(1/c) sum_{j mod |c|} F^(k)((j+y)/c; -cX - dY) F^(l-1-k)(d (j+y)/c + x; Y), c signed."""
    c, d = V.c, V.d
    if c == 0:
        raise DomainError("needs c != 0")
    mp = as_modular(mp)
    X, Y = complex(X), complex(Y)
    A = -c * X - d * Y
    acc = 0j
    for jp in range(abs(c)):
        for j in range(abs(c)):
            u = CharVector((jp + M.row_y.xp) / c, (j + M.row_y.x) / c)
            v = CharVector(d * u.xp + M.row_x.xp, d * u.x + M.row_x.x)
            acc += _F(k, u, A, mp) * _F(l - 1 - k, v, Y, mp)
    return acc / c


def hat_r(V, l, r, M, X, Y, mp):
    """R^_V(l, r, M; X, Y; tau) as a sum of signed-c lattice averages."""
    if int(l) != l or l < 1:
        raise DomainError("l must be a positive integer")
    if not admissible(V, M):
        raise DomainError("M is not admissible for V")
    if V.c == 0:
        return 0j
    jr = float(V.c * as_rational(r) + V.d)
    acc = 0j
    for k in range(l):
        acc += math.comb(l - 1, k) * (-jr) ** k * hat_s_display(k, l, V, M, X, Y, mp)
    return (-1) ** l * acc


def act_xy(V, X, Y):
    """V (X, Y)^T."""
    return V.a * X + V.b * Y, V.c * X + V.d * Y


# ----------------------------------------------------------- Taylor extraction

def taylor00(f, radius, npts=32, radius_y=None):
    """Coefficient of X^0 Y^0 of f by discrete Cauchy integrals on two circles."""
    if radius <= 0:
        raise RadiusError("radius must be positive")
    ry = radius if radius_y is None else radius_y
    w = np.exp(2j * math.pi * (np.arange(npts) + 0.5) / npts)
    acc = 0j
    for a in w:
        for b in w:
            try:
                acc += f(radius * a, ry * b)
            except PoleError as exc:
                raise PoleError(f"sample hit a pole: {exc}") from exc
    return acc / (npts * npts)


def hat_radii(r, mp):
    """(rho_X, rho_Y) keeping S^_{1,l}(r, M; X, Y) free of poles off X, Y = 0."""
    num, den = rational_parts(as_rational(r))
    rho = as_modular(mp).rho
    rx = rho / (3.0 * den)
    ry = min(rho / 3.0, den * rx / (3.0 * abs(num))) if num else rho / 3.0
    return rx, ry


def lemma3a_sides(l, r, M, mp, npts=32):
    """(C_X0 C_Y0 S^_{1,l}, (2 pi i)^2 [S_{1,l}/l - r^l B_{l+1}(y)/(l(l+1))])."""
    mp = as_modular(mp)
    r = as_rational(r)
    rx, ry = hat_radii(r, mp)
    lhs = taylor00(lambda X, Y: hat_s(0, l - 1, r, M, X, Y, mp), rx, npts, ry)
    rhs = TWO_PI_I ** 2 * (edr_sum(1, l, r, M, mp) / l
                           - float(r) ** l * elliptic_bernoulli(l + 1, M.row_y, mp) / (l * (l + 1)))
    return lhs, rhs


@numeric.on_mode_change
def _clear():
    _r_coeffs.cache_clear()
    _bt_dd.cache_clear()
