"""Hot loops of the package, each in a numba flavour and a numpy flavour.

The loop versions are plain Python compiled with ``numba.njit``; the numpy
versions are vectorised rewrites of the same arithmetic.  ``ELLCOT_NUMBA``
picks which one the public dispatchers call.  All kernels work in double
precision and return per-shell partial sums where a lattice is involved so
that the summation order is fixed.
"""
import math

import numpy as np

from . import _backend
from ._backend import njit

TWO_PI = 2.0 * math.pi


# ------------------------------------------------------------------ theta

def theta_coeffs(tau, nterms):
    """kappa_k = k + 1/2 and c_k = (-1)^k q^(kappa_k^2 / 2), k < nterms."""
    kap = np.arange(nterms, dtype=np.float64) + 0.5
    sign = np.where(np.arange(nterms) % 2 == 0, 1.0, -1.0)
    c = sign * np.exp(1j * math.pi * complex(tau) * kap * kap)
    return kap, c


def theta_logcoeffs(tau, nterms):
    """kappa_k and log c_k = i pi tau kappa_k^2 + i pi k.

    Kernels form c_k sin(w) as (e^(lc + iw) - e^(lc - iw)) / 2i.  For large
    Im w the factor sin(w) alone overflows while c_k underflows to zero;
    the combined exponent stays in range.
    """
    kap = np.arange(nterms, dtype=np.float64) + 0.5
    lc = 1j * math.pi * (complex(tau) * kap * kap + np.arange(nterms))
    return kap, lc


def _theta_loop(x, kap, lc):
    out = np.empty(x.shape[0], dtype=np.complex128)
    for i in range(x.shape[0]):
        acc = 0j
        for k in range(kap.shape[0]):
            w = 1j * TWO_PI * kap[k] * x[i]
            acc += np.exp(lc[k] + w) - np.exp(lc[k] - w)
        out[i] = 1j * acc
    return out


def _theta_numpy(x, kap, lc):
    w = 1j * TWO_PI * np.multiply.outer(x, kap)
    return 1j * np.sum(np.exp(lc + w) - np.exp(lc - w), axis=1)


# ------------------------------------------------------------ cot series

def _cot_sum_loop(frac, n, s):
    acc = 0.0
    comp = 0.0
    for i in range(frac.shape[0]):
        t = math.cos(math.pi * frac[i]) / math.sin(math.pi * frac[i]) / n[i] ** s
        # Neumaier summation keeps the long tail honest
        tot = acc + t
        if abs(acc) >= abs(t):
            comp += (acc - tot) + t
        else:
            comp += (t - tot) + acc
        acc = tot
    return acc + comp


def _cot_sum_numpy(frac, n, s):
    terms = np.cos(np.pi * frac) / np.sin(np.pi * frac) / n.astype(np.float64) ** s
    return float(np.sum(terms))


# ------------------------------------------------------- elliptic xi sum

def _xi_shells_loop(tau, l, xp, x, zp, z, rho, kint, kap, lc, A):
    """Per-shell sums of e(m'x'+mx) (tau m'+m)^-l e(zX) theta(A+X)/theta(X).

    X = tau rho[m'] + rho[m] is the reduced F-argument; the phase
    e(z' [[alpha m']] + z [[alpha m]]) from the reduction is included.
    """
    size = rho.shape[0]
    N = (size - 1) // 2
    K = kap.shape[0]
    shells = np.zeros(N + 1, dtype=np.complex128)
    sQ = np.empty((size, K))
    cQ = np.empty((size, K))
    col = np.empty(size, dtype=np.complex128)
    for j in range(size):
        m = j - N
        for k in range(K):
            sQ[j, k] = math.sin(TWO_PI * kap[k] * rho[j])
            cQ[j, k] = math.cos(TWO_PI * kap[k] * rho[j])
        col[j] = np.exp(1j * TWO_PI * (m * x + z * kint[j] + z * rho[j]))
    sP = np.empty(K, dtype=np.complex128)
    cP = np.empty(K, dtype=np.complex128)
    sP0 = np.empty(K, dtype=np.complex128)
    cP0 = np.empty(K, dtype=np.complex128)
    for i in range(size):
        mp_ = i - N
        tr = tau * rho[i]
        row = np.exp(1j * TWO_PI * (mp_ * xp + zp * kint[i] + z * tr))
        for k in range(K):
            ep = np.exp(lc[k] + 1j * TWO_PI * kap[k] * (A + tr))
            em = np.exp(lc[k] - 1j * TWO_PI * kap[k] * (A + tr))
            sP[k] = (ep - em) / 2j
            cP[k] = (ep + em) / 2
            ep = np.exp(lc[k] + 1j * TWO_PI * kap[k] * tr)
            em = np.exp(lc[k] - 1j * TWO_PI * kap[k] * tr)
            sP0[k] = (ep - em) / 2j
            cP0[k] = (ep + em) / 2
        for j in range(size):
            m = j - N
            if mp_ == 0 and m == 0:
                continue
            num = 0j
            den = 0j
            for k in range(K):
                num += sP[k] * cQ[j, k] + cP[k] * sQ[j, k]
                den += sP0[k] * cQ[j, k] + cP0[k] * sQ[j, k]
            w = tau * mp_ + m
            sh = max(abs(mp_), abs(m))
            shells[sh] += row * col[j] * num / den / w ** l
    return shells


def _csin_ccos(lc, phase):
    ep = np.exp(lc + 1j * phase)
    em = np.exp(lc - 1j * phase)
    return (ep - em) / 2j, (ep + em) / 2


def _xi_shells_numpy(tau, l, xp, x, zp, z, rho, kint, kap, lc, A):
    size = rho.shape[0]
    N = (size - 1) // 2
    idx = np.arange(-N, N + 1)
    ph_q = TWO_PI * np.multiply.outer(rho, kap)
    sQ, cQ = np.sin(ph_q), np.cos(ph_q)
    col = np.exp(1j * TWO_PI * (idx * x + z * kint + z * rho))
    tr = tau * rho
    row = np.exp(1j * TWO_PI * (idx * xp + zp * kint + z * tr))
    ph_p = TWO_PI * np.multiply.outer(A + tr, kap)
    ph_p0 = TWO_PI * np.multiply.outer(tr, kap)
    sp, cp = _csin_ccos(lc, ph_p)
    sp0, cp0 = _csin_ccos(lc, ph_p0)
    num = sp @ cQ.T + cp @ sQ.T
    den = sp0 @ cQ.T + cp0 @ sQ.T
    w = tau * idx[:, None] + idx[None, :]
    den[N, N] = 1.0
    w[N, N] = 1.0
    terms = (row[:, None] * col[None, :]) * num / den / w ** l
    terms[N, N] = 0.0
    sh = np.maximum(np.abs(idx)[:, None], np.abs(idx)[None, :]).ravel()
    re = np.bincount(sh, weights=terms.real.ravel(), minlength=N + 1)
    im = np.bincount(sh, weights=terms.imag.ravel(), minlength=N + 1)
    return re + 1j * im


# ------------------------------------------------- Eisenstein lattice sum

def _eis_shells_loop(tau, k, xp, x, N):
    shells = np.zeros(N + 1, dtype=np.complex128)
    for mp_ in range(-N, N + 1):
        for m in range(-N, N + 1):
            if mp_ == 0 and m == 0:
                continue
            w = tau * mp_ + m
            sh = max(abs(mp_), abs(m))
            shells[sh] += np.exp(1j * TWO_PI * (mp_ * xp + m * x)) / w ** k
    return shells


def _eis_shells_numpy(tau, k, xp, x, N):
    idx = np.arange(-N, N + 1)
    w = tau * idx[:, None] + idx[None, :]
    w[N, N] = 1.0
    ph = np.exp(1j * TWO_PI * np.add.outer(idx * xp, idx * x))
    terms = ph / w ** k
    terms[N, N] = 0.0
    sh = np.maximum(np.abs(idx)[:, None], np.abs(idx)[None, :]).ravel()
    re = np.bincount(sh, weights=terms.real.ravel(), minlength=N + 1)
    im = np.bincount(sh, weights=terms.imag.ravel(), minlength=N + 1)
    return re + 1j * im


# ------------------------------------------- elliptic Bernoulli functions

def _ebern_loop(xp, x, flat, tau, M, J, btab):
    """B_0..B_M at each point (xp[i], x[i]); x already reduced to [0, 1).

    ``flat[i]`` marks points of Z^2, where the third bracket term is dropped.
    ``btab[m, k]`` = binom(m, k) B_k gives the classical polynomial part.
    """
    npts = x.shape[0]
    out = np.zeros((npts, M + 1), dtype=np.complex128)
    q = np.exp(1j * TWO_PI * tau)
    for i in range(npts):
        xi = x[i]
        E2 = np.exp(1j * TWO_PI * xi * tau)
        g1 = np.exp(-1j * TWO_PI * xp[i])
        g2 = np.exp(1j * TWO_PI * xp[i])
        br = np.zeros(M + 1, dtype=np.complex128)
        # start the recurrences at q^(1 -+ x): q^-x alone overflows for large Im tau
        e1 = np.exp(1j * TWO_PI * (1.0 - xi) * tau)
        e2 = np.exp(1j * TWO_PI * (1.0 + xi) * tau)
        for j in range(1, J + 1):
            if j > 1:
                e1 = e1 * q
                e2 = e2 * q
            a = e1 / (g1 - e1)
            b = e2 / (g2 - e2)
            p1 = 1.0
            p2 = 1.0
            for m in range(1, M + 1):
                br[m] += p1 * a - p2 * b
                p1 *= xi - j
                p2 *= xi + j
        if not flat[i]:
            t = g1 * E2 / (g1 * E2 - 1.0)
            p = 1.0
            for m in range(1, M + 1):
                br[m] += p * t
                p *= xi
        out[i, 0] = 1.0
        for m in range(1, M + 1):
            poly = 0.0
            pw = 1.0
            for kk in range(m, -1, -1):
                poly += btab[m, kk] * pw
                pw *= xi
            out[i, m] = m * br[m] + poly
    return out


def _ebern_numpy(xp, x, flat, tau, M, J, btab):
    npts = x.shape[0]
    out = np.zeros((npts, M + 1), dtype=np.complex128)
    out[:, 0] = 1.0
    if M == 0:
        return out
    j = np.arange(1, J + 1)
    E2 = np.exp(1j * TWO_PI * x * tau)[:, None]
    g1 = np.exp(-1j * TWO_PI * xp)[:, None]
    g2 = np.exp(1j * TWO_PI * xp)[:, None]
    e1 = np.exp(1j * TWO_PI * tau * (j[None, :] - x[:, None]))
    e2 = np.exp(1j * TWO_PI * tau * (j[None, :] + x[:, None]))
    a = e1 / (g1 - e1)
    b = e2 / (g2 - e2)
    den = (g1 * E2 - 1.0)[:, 0]
    # flat points (x in Z^2) drop this term; keep their denominator away from 0
    t = np.where(flat, 0.0, (g1 * E2)[:, 0] / np.where(flat, 1.0, den))
    base1 = x[:, None] - j
    base2 = x[:, None] + j
    p1 = np.ones_like(base1)
    p2 = np.ones_like(base2)
    pt = np.ones_like(x)
    xpow = np.ones((npts, M + 1))
    for m in range(1, M + 1):
        xpow[:, m] = xpow[:, m - 1] * x
    for m in range(1, M + 1):
        br = np.sum(p1 * a, axis=1) - np.sum(p2 * b, axis=1) + pt * t
        poly = xpow[:, m::-1] @ btab[m, : m + 1]
        out[:, m] = m * br + poly
        p1 = p1 * base1
        p2 = p2 * base2
        pt = pt * x
    return out


# ---------------------------------------------------------- compilation

if _backend.HAVE_NUMBA:
    _theta_nb = njit(_theta_loop)
    _cot_sum_nb = njit(_cot_sum_loop)
    _xi_shells_nb = njit(_xi_shells_loop)
    _eis_shells_nb = njit(_eis_shells_loop)
    _ebern_nb = njit(_ebern_loop)
else:  # pragma: no cover
    _theta_nb = _cot_sum_nb = _xi_shells_nb = _eis_shells_nb = _ebern_nb = None

IMPLS = {
    "theta": {"numba": _theta_nb, "numpy": _theta_numpy},
    "cot_sum": {"numba": _cot_sum_nb, "numpy": _cot_sum_numpy},
    "xi_shells": {"numba": _xi_shells_nb, "numpy": _xi_shells_numpy},
    "eis_shells": {"numba": _eis_shells_nb, "numpy": _eis_shells_numpy},
    "ebern": {"numba": _ebern_nb, "numpy": _ebern_numpy},
}


def get(name, backend=None):
    backend = backend or _backend.backend_name()
    fn = IMPLS[name][backend]
    if fn is None:
        raise RuntimeError(f"kernel {name!r} has no {backend} implementation here")
    return fn


def theta_values(x, kap, lc, backend=None):
    x = np.ascontiguousarray(x, dtype=np.complex128)
    return get("theta", backend)(x, kap, lc)


def cot_sum(frac, n, s, backend=None):
    return get("cot_sum", backend)(
        np.ascontiguousarray(frac, dtype=np.float64), np.ascontiguousarray(n, dtype=np.float64), float(s)
    )


def xi_shells(tau, l, xp, x, zp, z, rho, kint, kap, lc, A, backend=None):
    return get("xi_shells", backend)(
        complex(tau), int(l), float(xp), float(x), float(zp), float(z),
        np.ascontiguousarray(rho, dtype=np.float64), np.ascontiguousarray(kint, dtype=np.float64),
        kap, lc, complex(A),
    )


def eis_shells(tau, k, xp, x, N, backend=None):
    return get("eis_shells", backend)(complex(tau), int(k), float(xp), float(x), int(N))


def ebern(xp, x, flat, tau, M, J, btab, backend=None):
    return get("ebern", backend)(
        np.ascontiguousarray(xp, dtype=np.float64), np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(flat, dtype=np.bool_), complex(tau), int(M), int(J),
        np.ascontiguousarray(btab, dtype=np.float64),
    )
