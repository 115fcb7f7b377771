"""Double-double arithmetic (about 106 bits) for the exact-identity checks.

Finite sums such as the R_V polynomials reach 1e13 in size while the
identities between them hold to the last digit, so plain doubles cannot
show a residual of 1e-10.  A number is a pair (hi, lo) with |lo| below half
an ulp of hi; a complex number is a 4-tuple (re_hi, re_lo, im_hi, im_lo).
The elliptic Bernoulli kernel below mirrors ``_kernels._ebern_loop``.
"""
import math
from fractions import Fraction

import numpy as np

from ._backend import njit

_SPLITTER = 134217729.0  # 2^27 + 1
_LN2 = (0.6931471805599453, 2.3190468138462996e-17)
_TWO_PI = (6.283185307179586, 2.4492935982947064e-16)


def to_dd(f):
    """Nearest double-double to a Fraction (or int)."""
    f = Fraction(f)
    hi = float(f)
    return hi, float(f - Fraction(hi))


def _inv_fact_table(n):
    pairs = [to_dd(Fraction(1, math.factorial(k))) for k in range(n)]
    return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])


_IF_HI, _IF_LO = _inv_fact_table(32)


@njit
def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit
def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


@njit
def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


@njit
def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@njit
def add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e += t
    s, e = quick_two_sum(s, e)
    e += f
    return quick_two_sum(s, e)


@njit
def mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e += ah * bl + al * bh
    return quick_two_sum(p, e)


@njit
def mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e += al * b
    return quick_two_sum(p, e)


@njit
def div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = mul_d(bh, bl, q1)
    rh, rl = add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = mul_d(bh, bl, q2)
    rh, rl = add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return add(q1, q2, q3, 0.0)


# complex numbers as 4-tuples

@njit
def cadd(a, b):
    rh, rl = add(a[0], a[1], b[0], b[1])
    ih, il = add(a[2], a[3], b[2], b[3])
    return (rh, rl, ih, il)


@njit
def csub(a, b):
    return cadd(a, (-b[0], -b[1], -b[2], -b[3]))


@njit
def cmul(a, b):
    p1 = mul(a[0], a[1], b[0], b[1])
    p2 = mul(a[2], a[3], b[2], b[3])
    p3 = mul(a[0], a[1], b[2], b[3])
    p4 = mul(a[2], a[3], b[0], b[1])
    rh, rl = add(p1[0], p1[1], -p2[0], -p2[1])
    ih, il = add(p3[0], p3[1], p4[0], p4[1])
    return (rh, rl, ih, il)


@njit
def cscale(a, sh, sl):
    rh, rl = mul(a[0], a[1], sh, sl)
    ih, il = mul(a[2], a[3], sh, sl)
    return (rh, rl, ih, il)


@njit
def cdiv(a, b):
    n1 = mul(b[0], b[1], b[0], b[1])
    n2 = mul(b[2], b[3], b[2], b[3])
    nh, nl = add(n1[0], n1[1], n2[0], n2[1])
    num = cmul(a, (b[0], b[1], -b[2], -b[3]))
    rh, rl = div(num[0], num[1], nh, nl)
    ih, il = div(num[2], num[3], nh, nl)
    return (rh, rl, ih, il)


@njit
def exp_real(ah, al):
    """exp of a double-double; 0 below the double range."""
    if ah < -740.0:
        return 0.0, 0.0
    k = math.floor(ah / _LN2[0] + 0.5)
    ph, pl = mul_d(_LN2[0], _LN2[1], k)
    rh, rl = add(ah, al, -ph, -pl)
    rh, rl = rh / 1024.0, rl / 1024.0
    # expm1 by Taylor, then (1 + s)^2 - 1 = 2 s + s^2 ten times
    sh, sl = 0.0, 0.0
    th, tl = 1.0, 0.0
    for n in range(1, 20):
        th, tl = mul(th, tl, rh, rl)
        uh, ul = mul(th, tl, _IF_HI[n], _IF_LO[n])
        sh, sl = add(sh, sl, uh, ul)
    for _ in range(10):
        qh, ql = mul(sh, sl, sh, sl)
        sh, sl = add(2.0 * sh, 2.0 * sl, qh, ql)
    eh, el = add(1.0, 0.0, sh, sl)
    scale = 2.0 ** k
    return eh * scale, el * scale


@njit
def expi_2pi(th, tl):
    """e(t) = exp(2 pi i t) for a real double-double t."""
    n = math.floor(th + 0.5)
    th, tl = add(th, tl, -n, 0.0)
    ah, al = mul(th, tl, _TWO_PI[0], _TWO_PI[1])
    ah, al = ah / 256.0, al / 256.0
    a2h, a2l = mul(ah, al, ah, al)
    # cos - 1 and sin by Taylor on |a| < 0.0123
    ch, cl = 0.0, 0.0
    sh, sl = ah, al
    ph, pl = 1.0, 0.0
    sign = -1.0
    for k in range(1, 12):
        ph, pl = mul(ph, pl, a2h, a2l)
        uh, ul = mul(ph, pl, _IF_HI[2 * k], _IF_LO[2 * k])
        ch, cl = add(ch, cl, sign * uh, sign * ul)
        vh, vl = mul(ph, pl, ah, al)
        vh, vl = mul(vh, vl, _IF_HI[2 * k + 1], _IF_LO[2 * k + 1])
        sh, sl = add(sh, sl, sign * vh, sign * vl)
        sign = -sign
    # (1 + c + i s)^2 = 1 + (2c + c^2 - s^2) + i (2 s (1 + c)), eight times
    for _ in range(8):
        c2h, c2l = mul(ch, cl, ch, cl)
        s2h, s2l = mul(sh, sl, sh, sl)
        nh, nl = add(2.0 * ch, 2.0 * cl, c2h, c2l)
        nh, nl = add(nh, nl, -s2h, -s2l)
        oh, ol = add(1.0, 0.0, ch, cl)
        sh, sl = mul(2.0 * sh, 2.0 * sl, oh, ol)
        ch, cl = nh, nl
    rh, rl = add(1.0, 0.0, ch, cl)
    return (rh, rl, sh, sl)


@njit
def cexp2pii(w):
    """e(w) = exp(2 pi i w) for a complex double-double w."""
    mh, ml = mul(w[2], w[3], -_TWO_PI[0], -_TWO_PI[1])
    eh, el = exp_real(mh, ml)
    return cscale(expi_2pi(w[0], w[1]), eh, el)


@njit
def frac_unit(h, l):
    """h + l reduced into [0, 1)."""
    f = math.floor(h)
    h, l = add(h, l, -f, 0.0)
    if h < 0.0 or (h == 0.0 and l < 0.0):
        h, l = add(h, l, 1.0, 0.0)
    if h >= 1.0:
        h, l = add(h, l, -1.0, 0.0)
    return h, l


@njit
def ebern_points(uph, upl, uh, ul, tre, tim, M, J, bt_hi, bt_lo):
    """B_0..B_M at points (up, u), given unreduced as double-doubles.

    Returns an array of shape (npts, M + 1, 4) of complex double-doubles.
    """
    npts = uh.shape[0]
    out = np.zeros((npts, M + 1, 4))
    q = cexp2pii((tre, 0.0, tim, 0.0))
    for i in range(npts):
        xph, xpl = frac_unit(uph[i], upl[i])
        xh, xl = frac_unit(uh[i], ul[i])
        flat = xph == 0.0 and xpl == 0.0 and xh == 0.0 and xl == 0.0
        a1h, a1l = mul_d(xh, xl, tre)
        b1h, b1l = mul_d(xh, xl, tim)
        E2 = cexp2pii((a1h, a1l, b1h, b1l))
        g1 = cexp2pii((-xph, -xpl, 0.0, 0.0))
        g2 = cexp2pii((xph, xpl, 0.0, 0.0))
        br = np.zeros((M + 1, 4))
        # start the recurrences at q^(1 -+ x): q^-x alone overflows for large Im tau
        rh, rl = add(tre, 0.0, -a1h, -a1l)
        ih, il = add(tim, 0.0, -b1h, -b1l)
        e1 = cexp2pii((rh, rl, ih, il))
        rh, rl = add(tre, 0.0, a1h, a1l)
        ih, il = add(tim, 0.0, b1h, b1l)
        e2 = cexp2pii((rh, rl, ih, il))
        for j in range(1, J + 1):
            if j > 1:
                e1 = cmul(e1, q)
                e2 = cmul(e2, q)
            a = cdiv(e1, csub(g1, e1))
            b = cdiv(e2, csub(g2, e2))
            p1h, p1l = 1.0, 0.0
            p2h, p2l = 1.0, 0.0
            d1h, d1l = add(xh, xl, -float(j), 0.0)
            d2h, d2l = add(xh, xl, float(j), 0.0)
            for m in range(1, M + 1):
                t = csub(cscale(a, p1h, p1l), cscale(b, p2h, p2l))
                cur = cadd((br[m, 0], br[m, 1], br[m, 2], br[m, 3]), t)
                br[m, 0], br[m, 1], br[m, 2], br[m, 3] = cur
                p1h, p1l = mul(p1h, p1l, d1h, d1l)
                p2h, p2l = mul(p2h, p2l, d2h, d2l)
        if not flat:
            ge = cmul(g1, E2)
            tt = cdiv(ge, csub(ge, (1.0, 0.0, 0.0, 0.0)))
            ph, pl = 1.0, 0.0
            for m in range(1, M + 1):
                cur = cadd((br[m, 0], br[m, 1], br[m, 2], br[m, 3]), cscale(tt, ph, pl))
                br[m, 0], br[m, 1], br[m, 2], br[m, 3] = cur
                ph, pl = mul(ph, pl, xh, xl)
        out[i, 0, 0] = 1.0
        for m in range(1, M + 1):
            polyh, polyl = 0.0, 0.0
            pwh, pwl = 1.0, 0.0
            for kk in range(m, -1, -1):
                th, tl = mul(bt_hi[m, kk], bt_lo[m, kk], pwh, pwl)
                polyh, polyl = add(polyh, polyl, th, tl)
                pwh, pwl = mul(pwh, pwl, xh, xl)
            v = cscale((br[m, 0], br[m, 1], br[m, 2], br[m, 3]), float(m), 0.0)
            v = cadd(v, (polyh, polyl, 0.0, 0.0))
            out[i, m, 0], out[i, m, 1], out[i, m, 2], out[i, m, 3] = v
    return out


@njit
def pair_table(Bu, Bv):
    """T[m, n] = sum_i Bu[i, m] Bv[i, n] in double-double."""
    npts, L1 = Bu.shape[0], Bu.shape[1]
    out = np.zeros((L1, L1, 4))
    for m in range(L1):
        for n in range(L1):
            acc = (0.0, 0.0, 0.0, 0.0)
            for i in range(npts):
                acc = cadd(acc, cmul((Bu[i, m, 0], Bu[i, m, 1], Bu[i, m, 2], Bu[i, m, 3]),
                                     (Bv[i, n, 0], Bv[i, n, 1], Bv[i, n, 2], Bv[i, n, 3])))
            out[m, n, 0], out[m, n, 1], out[m, n, 2], out[m, n, 3] = acc
    return out


def binom_bernoulli_dd(M):
    """Double-double version of binom(m, k) B_k."""
    from .classical import bernoulli_number
    hi = np.zeros((M + 1, M + 1))
    lo = np.zeros((M + 1, M + 1))
    for m in range(M + 1):
        for k in range(m + 1):
            hi[m, k], lo[m, k] = to_dd(math.comb(m, k) * bernoulli_number(k))
    return hi, lo


def to_mp(ctx, v):
    """Complex double-double (4 floats) to an mpmath complex in ``ctx``."""
    return ctx.mpc(ctx.mpf(v[0]) + ctx.mpf(v[1]), ctx.mpf(v[2]) + ctx.mpf(v[3]))


@njit
def edr_points(num, den, yph, ypl, yh, yl, xph, xpl, xh, xl):
    """u = (j + y)/d and v = n u - x over (j', j) mod d, as double-doubles."""
    n2 = den * den
    out = np.zeros((8, n2))
    i = 0
    for jp in range(den):
        for j in range(den):
            aph, apl = add(float(jp), 0.0, yph, ypl)
            aph, apl = div(aph, apl, float(den), 0.0)
            ah, al = add(float(j), 0.0, yh, yl)
            ah, al = div(ah, al, float(den), 0.0)
            bph, bpl = mul_d(aph, apl, float(num))
            bph, bpl = add(bph, bpl, -xph, -xpl)
            bh, bl = mul_d(ah, al, float(num))
            bh, bl = add(bh, bl, -xh, -xl)
            out[0, i], out[1, i], out[2, i], out[3, i] = aph, apl, ah, al
            out[4, i], out[5, i], out[6, i], out[7, i] = bph, bpl, bh, bl
            i += 1
    return out
