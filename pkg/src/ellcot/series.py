"""Cotangent-type Dirichlet series and their elliptic generalization."""
from __future__ import annotations

import math

import numpy as np

from . import _kernels, numeric
from .classical import bernoulli_number, clausen
from .numeric import MP, POLE_CUTOFF, DomainError, PoleError, SeriesResult, TruncationPolicy
from .quadratic import QuadraticNumber, approx_constant, require_irrational, split_multiples
from .thetakron import ModularParameter, _nterms, as_modular, kronecker_F, theta

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi


def _int_s(s, lo, what="s"):
    if int(s) != s or s < lo:
        raise DomainError(f"{what} must be an integer >= {lo}, got {s!r}")
    return int(s)


def _e(x):
    return np.exp(1j * TWO_PI * x)


# ------------------------------------------------------- classical series

def cot_dirichlet(s, alpha, policy=None):
    """xi(s, alpha) = sum_{n <= N} cot(pi n alpha) / n^s."""
    s = _int_s(s, 2)
    alpha = require_irrational(alpha)
    policy = policy or TruncationPolicy()
    N = policy.max_index
    n = np.arange(1, N + 1)
    _, f = split_multiples(alpha, n)
    val = _kernels.cot_sum(f, n, s)
    C = approx_constant(alpha)
    # |cot(pi f)| <= 1/(pi |f|) <= C n / pi
    tail = math.inf if s == 2 else C / math.pi * N ** (2 - s) / (s - 2)
    return SeriesResult(complex(val), tail, N)


def _berndt_raw(l, alpha, eps):
    total = QuadraticNumber(0, 0, alpha.D)
    for k in range(l + 1):
        bb = bernoulli_number(2 * k) * bernoulli_number(2 * l - 2 * k)
        if bb:
            total = total + (alpha ** (2 * k - 1)) * (math.comb(2 * l, 2 * k) * bb)
    denom = 1 - eps * alpha ** (2 * l - 2)
    if denom.sign() == 0:
        raise DomainError("1 - eps alpha^(2l-2) vanishes")
    ratio = total / denom
    if numeric.extended():
        pref = (-1) ** (l - 1) * (2 * MP.pi) ** (2 * l - 1) / MP.factorial(2 * l)
        return pref * ratio.to_mp(MP)
    pref = (-1) ** (l - 1) * TWO_PI ** (2 * l - 1) / math.factorial(2 * l)
    return pref * ratio.to_float()


def berndt_rhs(l, alpha, eps):
    """Closed-form xi(2l-1, alpha) for alpha = (a + b sqrt c)/2 with a^2 - c b^2 = 4 eps."""
    l = _int_s(l, 2, "l")
    alpha = require_irrational(alpha)
    if eps not in (1, -1):
        raise DomainError("eps must be +1 or -1")
    if 2 % alpha.den != 0 or alpha.norm() != eps:
        raise DomainError(f"{alpha} is not (a + b sqrt c)/2 with norm {eps}")
    return _berndt_raw(l, alpha, eps)


def _frac_phase(alpha, n, c):
    """e(c n alpha) computed from the accurate split of n alpha."""
    k, f = split_multiples(alpha, n)
    ck = c * k.astype(np.float64)
    return _e((ck - np.round(ck)) + c * f), f


def arakawa_H(alpha, s, x, y, policy=None):
    """H(alpha, s, x, y) for integers s < -1, both sub-series summed to N."""
    if int(s) != s or s >= -1:
        raise DomainError("H is only summed for integer s <= -2")
    s = int(s)
    alpha = require_irrational(alpha)
    policy = policy or TruncationPolicy()
    N = policy.max_index
    n = np.arange(1, N + 1)
    ax, _, _ = numeric.frac_parts(x)
    amx, _, _ = numeric.frac_parts(-x)
    ph1, f = _frac_phase(alpha, n, ax)
    ph2, _ = _frac_phase(alpha, n, amx)
    den = 1.0 - _e(f)
    w = n.astype(np.float64) ** (1 - s)
    yn = np.mod(n * y, 1.0)
    first = np.sum(_e(yn) / w * ph1 / den)
    second = np.sum(_e(-yn) / w * ph2 / den)
    val = first + (-1) ** s * second
    C = approx_constant(alpha)
    # |1 - e(f)| >= 4 |f| > 4/(C n)
    tail = C / 2.0 * N ** (s + 1) / (-s - 1)
    return SeriesResult(complex(val), tail, 2 * N)


def gen_cot_two_sided(s, alpha, x, y, policy=None):
    """sum_{0 < |m| <= N} e(m x)/m^s e(alpha m <-y>)/(e(alpha m) - 1), for y not in Z."""
    s = _int_s(s, 3)
    alpha = require_irrational(alpha)
    policy = policy or TruncationPolicy()
    if numeric.is_integral(y):
        raise DomainError("the two-sided form needs y outside Z")
    N = policy.max_index
    m = np.concatenate([np.arange(-N, 0), np.arange(1, N + 1)])
    a, _, _ = numeric.frac_parts(-y)
    ph, f = _frac_phase(alpha, m, a)
    xm = np.mod(m * x, 1.0)
    terms = _e(xm) / m.astype(np.float64) ** s * ph / (_e(f) - 1.0)
    C = approx_constant(alpha)
    tail = C / 2.0 * N ** (2 - s) / (s - 2)
    return SeriesResult(complex(np.sum(terms)), tail, 2 * N)


def gen_cot(s, alpha, x, y, policy=None, path="auto"):
    """Generalized cotangent series; ``path`` is "H", "two_sided" or "auto"."""
    s = _int_s(s, 3)
    if path == "auto":
        path = "H" if numeric.is_integral(y) else "two_sided"
    if path == "two_sided":
        return gen_cot_two_sided(s, alpha, x, y, policy)
    if path != "H":
        raise DomainError(f"unknown path {path!r}")
    h = arakawa_H(alpha, 1 - s, -y, x, policy)
    return SeriesResult(-h.value, h.est_tail, h.terms_used)


def cot_dirichlet_via_gen_cot(s, alpha, policy=None):
    """xi(s, alpha) = -2i (zeta(s)/2 - gen_cot(s, alpha, 0, 1)/(1 - e(-s/2))), odd s."""
    s = _int_s(s, 3)
    if s % 2 == 0:
        raise DomainError("the relation with zeta needs odd s (the series at (0, 1) vanishes for even s)")
    g = gen_cot(s, alpha, 0.0, 1.0, policy, path="H")
    val = -2j * (numeric.riemann_zeta(s) / 2 - g.value / 2)
    return SeriesResult(complex(val), 2 * g.est_tail, g.terms_used)


# ---------------------------------------------------- elliptic series

def _cell_constant(zp, z, mp, samples=64):
    """max |X F(z; X)| on the boundary of the reduced cell."""
    t = (np.arange(samples) + 0.5) / samples - 0.5
    pts = [complex(0.5 * mp.tau + u) for u in t] + [complex(-0.5 * mp.tau + u) for u in t]
    pts += [complex(u * mp.tau + 0.5) for u in t] + [complex(u * mp.tau - 0.5) for u in t]
    return max(abs(X * kronecker_F((zp, z), X, mp)) for X in pts)


def _c_tau(tau):
    """min |tau r' + r| over max(|r'|, |r|) = 1."""
    best = math.inf
    for sp in (-1.0, 1.0):
        r = min(1.0, max(-1.0, -sp * tau.real))
        best = min(best, abs(sp * tau + r))
    for sr in (-1.0, 1.0):
        rp = min(1.0, max(-1.0, -sr * tau.real / abs(tau) ** 2))
        best = min(best, abs(rp * tau + sr))
    return best


def elliptic_gen_cot_shells(l, alpha, M, mp, policy=None):
    """Per-shell sums of the elliptic series; shell n collects max(|m'|,|m|) = n."""
    l = _int_s(l, 3, "l")
    alpha = require_irrational(alpha)
    mp = as_modular(mp)
    policy = policy or TruncationPolicy()
    zp, z = numeric.reduce_unit(-M.row_y.xp), numeric.reduce_unit(-M.row_y.x)
    if zp == 0.0 and z == 0.0:
        raise DomainError("the series needs y outside Z^2")
    N = policy.max_index
    idx = np.arange(-N, N + 1)
    kint, rho = split_multiples(alpha, idx)
    near = np.abs(rho[idx != 0])
    if near.size and near.min() < POLE_CUTOFF:
        raise PoleError("alpha m is numerically integral; the F-argument hits the lattice")
    K = max(policy.theta_terms, _nterms(mp.tau.imag, 1.6))
    kap, lc = _kernels.theta_logcoeffs(mp.tau, K)
    A = -zp + z * mp.tau
    shells = _kernels.xi_shells(mp.tau, l, M.row_x.xp, M.row_x.x, zp, z,
                                rho.astype(np.float64), kint.astype(np.float64), kap, lc, A)
    return shells * (mp.dtheta0 / theta(A, mp)), (zp, z)


def elliptic_gen_cot(l, alpha, M, mp, policy=None):
    """Elliptic generalized cotangent series over the square window max(|m'|,|m|) <= N."""
    policy = policy or TruncationPolicy()
    mp = as_modular(mp)
    shells, (zp, z) = elliptic_gen_cot_shells(l, alpha, M, mp, policy)
    N = policy.max_index
    val = complex(np.sum(shells))
    if l >= 4:
        CF = _cell_constant(zp, z, mp)
        Ca = approx_constant(require_irrational(alpha))
        ct = _c_tau(mp.tau)
        # shell n: 8n terms, |tau m'+m| >= ct n, |reduced X| >= ct/(Ca n)
        tail = 8.0 * CF * Ca * ct ** (-l - 1) * N ** (3 - l) / (l - 3)
    else:
        tail = 2.0 * abs(complex(np.sum(shells[N // 2 + 1:])))
    return SeriesResult(val, float(tail), (2 * N + 1) ** 2 - 1)


def degeneration_rhs(l, alpha, M, policy=None):
    """(l+1)!/(2 pi i)^l (gen_cot(l, alpha, x, y) - psi chi(y) Cl_l(x)), psi = 1 or i."""
    l = _int_s(l, 3, "l")
    if M.row_y.is_integral():
        raise DomainError("needs y outside Z^2")
    x, y = M.row_x.x, M.row_y.x
    g = gen_cot(l, alpha, x, y, policy).value
    _, _, chi = numeric.frac_parts(y)
    psi = 1.0 if l % 2 == 1 else 1j
    return math.factorial(l + 1) / TWO_PI_I ** l * (g - psi * chi * clausen(l, x))


def degeneration_lhs(l, alpha, M, im_tau, policy=None):
    """Re((l+1)!/(2 pi i)^(l+1) elliptic_gen_cot(l, alpha, M; i im_tau))."""
    mp = ModularParameter(1j * im_tau)
    v = elliptic_gen_cot(l, alpha, M, mp, policy)
    return (math.factorial(l + 1) / TWO_PI_I ** (l + 1) * v.value).real, v
