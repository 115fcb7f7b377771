"""Jacobi theta, the Kronecker function F, its derivatives and elliptic Bernoulli functions.

Conventions: e(z) = exp(2 pi i z), q = e(tau), and

    theta(x; tau) = sum_m e((m + 1/2)^2 tau / 2 + (m + 1/2)(x + 1/2)).

Pairing m with -1-m gives the sine series used throughout,
theta(x) = -2 sum_{k>=0} (-1)^k q^(kappa^2/2) sin(2 pi kappa x) with kappa = k + 1/2,
which evaluates small arguments without cancellation.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from . import _kernels, numeric
from .classical import binom_bernoulli_table, bernoulli_number
from .modular import CharVector, as_charvector
from .numeric import (
    MP, POLE_CUTOFF, DomainError, PoleError, RadiusError, RangeError, SeriesResult, TruncationPolicy,
)

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi
_MAX_EXPONENT = 690.0


def _nterms(imtau, kappa_star, digits_exp=45.0):
    """Terms of the sine series needed when |Im x| <= kappa_star * Im tau."""
    return int(math.ceil(kappa_star + math.sqrt(digits_exp / (math.pi * imtau)))) + 2


class ModularParameter:
    """tau in the upper half plane with cached q-data."""

    def __init__(self, tau, theta_terms=8):
        tau = complex(tau)
        if not tau.imag > 0:
            raise DomainError(f"Im tau must be positive, got {tau}")
        if math.pi * tau.imag > 600:
            raise RangeError("Im tau too large for double precision theta values")
        self.tau = tau
        self.theta_terms = int(theta_terms)
        self.q = cmath.exp(TWO_PI_I * tau)
        self.q8 = cmath.exp(TWO_PI_I * tau / 8)
        # coefficients good for |Im x| <= 2 Im tau, the range met after reduction
        self.nterms = max(self.theta_terms, _nterms(tau.imag, 2.0))
        self.kap, self.coef = _kernels.theta_coeffs(tau, self.nterms)
        self.dtheta0 = complex(-2.0 * np.sum(self.coef * TWO_PI * self.kap))
        self.rho = _lattice_min(tau)

    @classmethod
    def parse(cls, text, theta_terms=8):
        try:
            re_, im_ = (float(t) for t in text.split(","))
        except ValueError as exc:
            raise DomainError(f"expected re,im for tau, got {text!r}") from exc
        return cls(complex(re_, im_), theta_terms)

    def __repr__(self):
        return f"ModularParameter({self.tau!r})"

    def __eq__(self, other):
        return isinstance(other, ModularParameter) and other.tau == self.tau

    def __hash__(self):
        return hash(self.tau)


def as_modular(tau):
    if isinstance(tau, ModularParameter):
        return tau
    return ModularParameter(tau)


def _lattice_min(tau):
    """Length of the shortest nonzero vector of Z + tau Z."""
    best = math.inf
    bound = int(math.ceil(2.0 + 2.0 / tau.imag))
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if a or b:
                best = min(best, abs(a * tau + b))
    return best


# ------------------------------------------------------------------ theta

def theta(x, mp, policy=None):
    """theta(x; tau) from the sine series, truncated adaptively."""
    mp = as_modular(mp)
    policy = policy or TruncationPolicy()
    if numeric.extended():
        return _theta_mp(x, mp, 0)
    x = complex(x)
    imtau = mp.tau.imag
    kstar = abs(x.imag) / imtau
    if math.pi * imtau * kstar * kstar > _MAX_EXPONENT:
        raise RangeError(f"theta argument Im x = {x.imag} out of range")
    K = max(policy.theta_terms, _nterms(imtau, kstar))
    while True:
        kap, lc = _kernels.theta_logcoeffs(mp.tau, K)
        w = 1j * TWO_PI * kap * x
        terms = np.exp(lc + w) - np.exp(lc - w)
        val = 1j * np.sum(terms)
        if abs(terms[-1]) <= policy.tail_tol * max(abs(val), 1e-300) or K > 400:
            return complex(val)
        K *= 2


def _theta_mp(x, mp, order):
    """order-th derivative of theta at x in extended precision."""
    x = MP.mpc(x)
    tau = MP.mpc(mp.tau)
    imtau = float(tau.imag)
    K = _nterms(imtau, abs(float(x.imag)) / imtau, digits_exp=95.0)
    acc = MP.mpc(0)
    for k in range(K):
        kap = MP.mpf(k) + MP.mpf(1) / 2
        c = (-1) ** k * MP.expjpi(tau * kap * kap)
        w = 2 * MP.pi * kap
        ph = w * x + order * MP.pi / 2
        acc += c * w ** order * MP.sin(ph)
    return -2 * acc


def theta_prime0(mp):
    """theta'(0; tau) from the differentiated series."""
    mp = as_modular(mp)
    if numeric.extended():
        return _theta_mp(0, mp, 1)
    return mp.dtheta0


def theta_product(x, mp, terms=60):
    """Triple product form, used as an independent check."""
    mp = as_modular(mp)
    q = mp.q
    ex, emx = cmath.exp(TWO_PI_I * x), cmath.exp(-TWO_PI_I * x)
    val = 1j * mp.q8 * (cmath.exp(1j * math.pi * x) - cmath.exp(-1j * math.pi * x))
    qm = 1.0 + 0j
    for _ in range(terms):
        qm *= q
        val *= (1 - emx * qm) * (1 - ex * qm) * (1 - qm)
    return val


def _theta_taylor(u, mp, order):
    """[theta^(j)(u)/j! for j <= order] in double precision."""
    imtau = mp.tau.imag
    K = _nterms(imtau, abs(u.imag) / imtau)
    kap, c = _kernels.theta_coeffs(mp.tau, K)
    w = TWO_PI * kap
    s, co = np.sin(w * u), np.cos(w * u)
    cyc = (s, co, -s, -co)
    out = np.empty(order + 1, dtype=np.complex128)
    wp = np.ones_like(w)
    fact = 1.0
    for j in range(order + 1):
        if j:
            wp = wp * w
            fact *= j
        out[j] = -2.0 * np.sum(c * wp * cyc[j % 4]) / fact
    return out


# ------------------------------------------------------------ F function

def _reduce_char(xv):
    xv = as_charvector(xv)
    zp, z = numeric.reduce_unit(xv.xp), numeric.reduce_unit(xv.x)
    return zp, z, (zp == 0.0 and z == 0.0)


def reduce_cell(X, mp):
    """X = a' tau + a + X0 with X0 = r' tau + r, -1/2 < r', r <= 1/2."""
    X = complex(X)
    ap, _ = numeric.angle_split(X.imag / mp.tau.imag)
    a, _ = numeric.angle_split((X - ap * mp.tau).real)
    return X - ap * mp.tau - a, ap, a


def _nearest_lattice(X0, mp):
    best = (abs(X0), 0, 0)
    for ap in (-1, 0, 1):
        for a in (-1, 0, 1):
            d = abs(X0 - ap * mp.tau - a)
            if d < best[0]:
                best = (d, ap, a)
    _, ap, a = best
    return X0 - ap * mp.tau - a, ap, a


def _F_core(zp, z, X0, mp):
    A = -zp + z * mp.tau
    tA = theta(A, mp)
    return cmath.exp(TWO_PI_I * z * X0) * mp.dtheta0 * theta(A + X0, mp) / (tA * theta(X0, mp))


def kronecker_F(xv, X, mp):
    """F(x; X; tau) = e(xX) theta'(0) theta(-x'+x tau+X) / (theta(-x'+x tau) theta(X))."""
    mp = as_modular(mp)
    zp, z, flat = _reduce_char(xv)
    if flat:
        raise DomainError("F is undefined for characters in Z^2")
    if numeric.extended():
        return _kronecker_F_mp(zp, z, X, mp)
    X0, ap, a = reduce_cell(X, mp)
    if abs(X0) < POLE_CUTOFF:
        raise PoleError(f"X = {X} lies on the period lattice")
    return cmath.exp(TWO_PI_I * (z * a + zp * ap)) * _F_core(zp, z, X0, mp)


def _kronecker_F_mp(zp, z, X, mp):
    X = MP.mpc(X)
    tau = MP.mpc(mp.tau)
    ap = int(MP.nint(X.imag / tau.imag))
    a = int(MP.nint((X - ap * tau).real))
    X0 = X - ap * tau - a
    if abs(X0) < POLE_CUTOFF:
        raise PoleError(f"X = {X} lies on the period lattice")
    A = -MP.mpf(zp) + MP.mpf(z) * tau
    val = (MP.expjpi(2 * MP.mpf(z) * X0) * _theta_mp(0, mp, 1) * _theta_mp(A + X0, mp, 0)
           / (_theta_mp(A, mp, 0) * _theta_mp(X0, mp, 0)))
    return MP.expjpi(2 * (MP.mpf(z) * a + MP.mpf(zp) * ap)) * val


# ------------------------------------------------- elliptic Bernoulli B_m

_ORDER_CAP = 100


def _bern_J(M, imtau, log_eps=-50.0):
    """Number of q-terms so that (J+1)^(M-1) |q|^(J-1) < exp(log_eps)."""
    lq = -TWO_PI * imtau
    J = 2
    while (max(M - 1, 0)) * math.log(J + 1) + (J - 1) * lq > log_eps:
        J += 1
    return J


def elliptic_bernoulli_batch(M, xp, x, mp):
    """Array B[i, m] = B_m((xp[i], x[i]); tau) for m <= M (double precision).

    Columns 1 and 2 are NaN at points of Z^2, where those functions jump.
    """
    mp = as_modular(mp)
    xp = np.asarray(xp, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    zp = xp - np.floor(xp)
    z = x - np.floor(x)
    tol = numeric.INT_TOL
    zp = np.where((zp < tol) | (zp > 1 - tol), 0.0, zp)
    z = np.where((z < tol) | (z > 1 - tol), 0.0, z)
    flat = (zp == 0.0) & (z == 0.0)
    J = _bern_J(M, mp.tau.imag)
    out = _kernels.ebern(zp, z, flat, mp.tau, M, J, binom_bernoulli_table(M))
    if np.any(flat) and M >= 1:
        out[flat, 1:min(M, 2) + 1] = np.nan
    return out


def elliptic_bernoulli_all(M, xv, mp):
    """[B_0, ..., B_M](x; tau) at one character vector."""
    mp = as_modular(mp)
    xv = as_charvector(xv)
    if numeric.extended():
        return [_ebern_mp(m, xv, mp) for m in range(M + 1)]
    return elliptic_bernoulli_batch(M, [xv.xp], [xv.x], mp)[0]


def elliptic_bernoulli(m, xv, mp):
    """B_m(x; tau) from its q-expansion after reducing x into [0, 1)."""
    if int(m) != m or m < 0:
        raise DomainError("m must be a non-negative integer")
    mp = as_modular(mp)
    xv = as_charvector(xv)
    _, _, flat = _reduce_char(xv)
    if flat and m in (1, 2):
        raise DomainError(f"B_{m} is discontinuous on Z^2")
    if numeric.extended():
        return _ebern_mp(m, xv, mp)
    return complex(elliptic_bernoulli_batch(m, [xv.xp], [xv.x], mp)[0, m])


def _ebern_mp(m, xv, mp):
    zp, z, flat = _reduce_char(xv)
    if flat and m in (1, 2):
        raise DomainError(f"B_{m} is discontinuous on Z^2")
    if m == 0:
        return MP.mpc(1)
    tau = MP.mpc(mp.tau)
    x, xp = MP.mpf(z), MP.mpf(zp)
    q = MP.expjpi(2 * tau)
    E1, E2 = MP.expjpi(-2 * x * tau), MP.expjpi(2 * x * tau)
    g1, g2 = MP.expjpi(-2 * xp), MP.expjpi(2 * xp)
    br = MP.mpc(0)
    J = _bern_J(m, mp.tau.imag) * 2
    qj = MP.mpc(1)
    for j in range(1, J + 1):
        qj *= q
        br += (x - j) ** (m - 1) * E1 * qj / (g1 - E1 * qj)
        br -= (x + j) ** (m - 1) * E2 * qj / (g2 - E2 * qj)
    if not flat:
        t = g1 * E2 / (g1 * E2 - 1)
        br += (x ** (m - 1) if m > 1 else 1) * t
    poly = sum(MP.binomial(m, k) * MP.mpf(bernoulli_number(k).numerator) / bernoulli_number(k).denominator
               * x ** (m - k) for k in range(m + 1))
    return m * br + poly


# ------------------------------------------------------- F derivatives

def kronecker_F_deriv(n, xv, X, mp, policy=None):
    """(2 pi i)^-n d^n F / dX^n from the Laurent series at X = 0.

    Requires |X| below the shortest period length.
    """
    mp = as_modular(mp)
    policy = policy or TruncationPolicy()
    if int(n) != n or n < 0:
        raise DomainError("n must be a non-negative integer")
    zp, z, flat = _reduce_char(xv)
    if flat:
        raise DomainError("F is undefined for characters in Z^2")
    X = complex(X)
    r = abs(X)
    if r >= mp.rho:
        raise RadiusError(f"|X| = {r} outside the Laurent radius {mp.rho}")
    if r < POLE_CUTOFF:
        raise PoleError("X too close to the pole at 0")
    ratio = r / mp.rho
    need = int(math.ceil(math.log(policy.tail_tol) / math.log(ratio))) + 8
    M = min(n + 1 + need, _ORDER_CAP)
    B = elliptic_bernoulli_all(M, CharVector(zp, z), mp)
    if numeric.extended():
        return _laurent_mp(n, X, B, M)
    sing = (-1) ** n * math.factorial(n) / (TWO_PI_I ** n * X ** (n + 1))
    acc = 0j
    tpi_pow = TWO_PI_I
    xpow = 1.0 + 0j
    mfact = 1.0
    last = 0.0
    for m in range(0, M - n):
        if m:
            tpi_pow *= TWO_PI_I
            xpow *= X
            mfact *= m
        term = B[m + n + 1] * tpi_pow / ((m + n + 1) * mfact) * xpow
        acc += term
        last = abs(term)
    if last > 1e3 * policy.tail_tol * max(abs(acc + sing), 1.0) and M == _ORDER_CAP:
        raise RadiusError(f"Laurent series too slow at |X|/rho = {ratio:.3f}")
    return sing + acc


def _laurent_mp(n, X, B, M):
    X = MP.mpc(X)
    tpi = 2j * MP.pi
    acc = (-1) ** n * MP.factorial(n) / (tpi ** n * X ** (n + 1))
    for m in range(0, M - n):
        acc += B[m + n + 1] * tpi ** (m + 1) / ((m + n + 1) * MP.factorial(m)) * X ** m
    return acc


def _F_deriv_theta(n, zp, z, X, mp):
    """(2 pi i)^-n F^(n) from Taylor series of the theta quotient at X."""
    A = -zp + z * mp.tau
    N = _theta_taylor(A + X, mp, n)
    D = _theta_taylor(X, mp, n)
    R = np.empty(n + 1, dtype=np.complex128)
    for j in range(n + 1):
        acc = N[j]
        for i in range(1, j + 1):
            acc -= D[i] * R[j - i]
        R[j] = acc / D[0]
    E = np.empty(n + 1, dtype=np.complex128)
    base = cmath.exp(TWO_PI_I * z * X)
    f = 1.0
    for j in range(n + 1):
        if j:
            f *= j
        E[j] = base * (TWO_PI_I * z) ** j / f
    coeff = sum(E[i] * R[n - i] for i in range(n + 1))
    return coeff * math.factorial(n) / TWO_PI_I ** n * mp.dtheta0 / theta(A, mp)


def kronecker_F_deriv_reduced(n, xv, X, mp):
    """F^(n) at any X off the lattice.

    X is moved next to its nearest lattice point with the quasi-periodicity
    phases; close to that point the Laurent series is used, elsewhere the
    Taylor expansion of the theta quotient.
    """
    mp = as_modular(mp)
    zp, z, flat = _reduce_char(xv)
    if flat:
        raise DomainError("F is undefined for characters in Z^2")
    if n == 0 and numeric.extended():
        return kronecker_F(xv, X, mp)
    X0, ap, a = reduce_cell(X, mp)
    X1, bp, b = _nearest_lattice(X0, mp)
    ap, a = ap + bp, a + b
    if abs(X1) < POLE_CUTOFF:
        raise PoleError(f"X = {X} lies on the period lattice")
    phase = cmath.exp(TWO_PI_I * (z * a + zp * ap))
    if n == 0:
        return phase * _F_core(zp, z, X1, mp)
    if abs(X1) <= 0.5 * mp.rho or numeric.extended():
        return phase * kronecker_F_deriv(n, CharVector(zp, z), X1, mp)
    return phase * _F_deriv_theta(n, zp, z, X1, mp)


# ------------------------------------------------ Eisenstein oracle

def eisenstein_bernoulli_oracle(k, xv, mp, cutoff):
    """-k!/(2 pi i)^k sum' e(m'x' + m x)/(tau m' + m)^k over a square window."""
    if int(k) != k or k < 3:
        raise DomainError("the lattice sum needs k >= 3")
    mp = as_modular(mp)
    xv = as_charvector(xv)
    shells = _kernels.eis_shells(mp.tau, k, xv.xp, xv.x, int(cutoff))
    total = np.sum(shells)
    pref = -math.factorial(k) / TWO_PI_I ** k
    tail = abs(pref) * 8.0 / (k - 2) * float(cutoff) ** (2 - k) / min(1.0, mp.rho) ** k
    return SeriesResult(complex(pref * total), tail, (2 * int(cutoff) + 1) ** 2 - 1)


@numeric.on_mode_change
def _clear():
    binom_bernoulli_table.cache_clear()


__all__ = [
    "ModularParameter", "CharVector", "theta", "theta_prime0", "theta_product", "kronecker_F",
    "kronecker_F_deriv", "kronecker_F_deriv_reduced", "elliptic_bernoulli", "elliptic_bernoulli_all",
    "elliptic_bernoulli_batch", "eisenstein_bernoulli_oracle", "reduce_cell",
]
