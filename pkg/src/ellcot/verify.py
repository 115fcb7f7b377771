"""Identity checks that return structured, JSON-serialisable reports."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import numeric, series
from .ellsums import act_xy, bernoulli_hp, edr_degeneration_rhs, edr_sum, hat_r, hat_s, r_poly
from .modular import (CharMatrix, UnimodularMatrix, act_char, act_rational, admissible,
                      admissible_r, as_rational, mobius_with_factor, rational_parts)
from .numeric import MP, DomainError, PoleError, TruncationPolicy
from .quadratic import as_quadratic, pell_alpha, require_irrational
from .thetakron import ModularParameter, as_modular

CRITERIA = ("abs", "rel", "either")


@dataclass
class VerificationReport:
    identity_id: str
    params: dict
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    tolerance: float
    passed: int
    terms_used: int = 0
    elapsed_ms: int = 0
    expect: int = field(default=1, repr=False)

    def to_dict(self):
        return {
            "identity_id": self.identity_id,
            "params": {str(k): str(v) for k, v in self.params.items()},
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "terms_used": self.terms_used,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @property
    def as_expected(self):
        return self.passed == self.expect

    def summary(self):
        tag = "PASS" if self.passed else "FAIL"
        if self.expect == 0:
            tag += " (negative control, expected FAIL)"
        return (f"{tag} {self.identity_id}: abs={self.abs_residual:.3e} rel={self.rel_residual:.3e} "
                f"tol={self.tolerance:.1e} terms={self.terms_used} {self.elapsed_ms} ms")


def _c(z):
    return numeric.to_complex(z)


def make_report(identity_id, params, lhs, rhs, tol, criterion, terms, t0, diff=None):
    """Build a report; ``diff`` overrides lhs - rhs when it is known more accurately."""
    if criterion not in CRITERIA:
        raise DomainError(f"criterion must be one of {CRITERIA}")
    d = (lhs - rhs) if diff is None else diff
    a = float(abs(d))
    denom = max(float(abs(lhs)), float(abs(rhs)), 1.0)
    rel = a / denom
    ok = {"abs": a <= tol, "rel": rel <= tol, "either": a <= tol or rel <= tol}[criterion]
    params = dict(params, criterion=criterion)
    return VerificationReport(identity_id, params, _c(lhs), _c(rhs), a, rel, float(tol), int(ok),
                              int(terms), int(round((time.perf_counter() - t0) * 1000)))


def _exact_charmat(M):
    """Copy of M with Fraction entries, so integer matrix actions stay exact."""
    return CharMatrix.of(*(Fraction(v) for v in M.as_tuple()))


def _mp_num(r):
    r = Fraction(r)
    return MP.mpf(r.numerator) / r.denominator


# ------------------------------------------------------------------ checks

def check_transform(V, l, alpha, M, mp, policy=None, tol=None, criterion="rel", rhs_matrix=None):
    """xi(l, alpha, M) - j(V; alpha)^(l-1) xi(l, V alpha, V M) against R_V(l, alpha, M).

    ``rhs_matrix`` replaces V inside R_V only; it exists for falsification runs.
    """
    t0 = time.perf_counter()
    policy = policy or TruncationPolicy()
    alpha = require_irrational(alpha)
    mp = as_modular(mp)
    if not admissible(V, M):
        raise DomainError("M is not admissible for V: y or c x + d y lies in Z^2")
    if tol is None:
        tol = 1e-3 if l == 3 else 1e-4
    Va, j = mobius_with_factor(V, alpha)
    VM = act_char(V, M)
    a = series.elliptic_gen_cot(l, alpha, M, mp, policy)
    b = series.elliptic_gen_cot(l, Va, VM, mp, policy)
    lhs = a.value - j.to_float() ** (l - 1) * b.value
    W = V if rhs_matrix is None else rhs_matrix
    rhs = r_poly(W, l, M, alpha.to_float(), mp)
    params = {"V": V.as_tuple(), "rhs_matrix": W.as_tuple(), "l": l, "alpha": alpha, "M": M.as_tuple(), "tau": mp.tau,
              "max_index": policy.max_index, "est_tail": a.est_tail + abs(j.to_float()) ** (l - 1) * b.est_tail}
    return make_report("transform", params, lhs, rhs, tol, criterion, a.terms_used + b.terms_used, t0)


def check_cocycle(V1, V2, l, z, M, mp, tol=1e-10, criterion="abs", product=None):
    """R_{V1}(z, M) + j(V1; z)^(l-1) R_{V2}(V1 z, V1 M) against R_{V2 V1}(z, M).

    The three polynomials reach 1e13 for modest matrices, so the whole
    computation runs in double-double with exactly represented inputs.
    ``product`` replaces V2 V1 on the right (falsification runs).
    """
    t0 = time.perf_counter()
    mp = as_modular(mp)
    V = V2 @ V1 if product is None else product
    if not (admissible(V, M) and admissible(V1, M)):
        raise DomainError("M must lie in M2(V2 V1) and M2(V1)")
    Mx = _exact_charmat(M)
    zz = MP.mpc(complex(z))
    j1 = V1.c * zz + V1.d
    if V1.c != 0 and abs(j1) < numeric.POLE_CUTOFF:
        raise PoleError("j(V1; z) = 0")
    z1 = (V1.a * zz + V1.b) / j1
    a = r_poly(V1, l, Mx, zz, mp, hp=True)
    b = j1 ** (l - 1) * r_poly(V2, l, act_char(V1, Mx), z1, mp, hp=True)
    c = r_poly(V, l, Mx, zz, mp, hp=True)
    params = {"V1": V1.as_tuple(), "V2": V2.as_tuple(), "product": V.as_tuple(), "l": l, "z": complex(z), "M": M.as_tuple(), "tau": mp.tau}
    return make_report("cocycle", params, a + b, c, tol, criterion, 0, t0)


def reciprocity_sides(V, l, r, M, mp, rhs_matrix=None):
    """Both sides of the reciprocity law for S_{1,l}, in double-double precision."""
    r = as_rational(r)
    jr = V.c * r + V.d
    if jr == 0:
        raise PoleError("j(V; r) = 0")
    if not (admissible(V, M) and admissible_r(r, M)):
        raise DomainError("M must lie in M2(V) and M2(r)")
    Mx = _exact_charmat(M)
    num, den = rational_parts(r)
    n2, d2, _ = act_rational(V, r)
    jj = _mp_num(jr)
    lhs = edr_sum(1, l, r, Mx, mp, hp=True) - jj ** (l - 1) * edr_sum(1, l, Fraction(n2, d2), act_char(V, Mx), mp, hp=True)
    w = Mx.row_x.scale(den) - Mx.row_y.scale(num)
    tpi = 2j * MP.pi
    W = V if rhs_matrix is None else rhs_matrix
    rhs = ((-1) ** l * MP.factorial(l) / tpi ** (l + 1) * r_poly(W, l, Mx, r, mp, hp=True)
           - (-1) ** l * MP.mpf(l) / (l + 1) * (V.c / jj) * bernoulli_hp(l + 1, w, mp) / MP.mpf(den) ** (l + 1))
    return lhs, rhs


def check_reciprocity(V, l, r, M, mp, tol=1e-9, criterion="abs", rhs_matrix=None):
    """Reciprocity of S_{1,l} under V, with its R_V and B_{l+1} corrections."""
    t0 = time.perf_counter()
    mp = as_modular(mp)
    lhs, rhs = reciprocity_sides(V, l, r, M, mp, rhs_matrix)
    params = {"V": V.as_tuple(), "rhs_matrix": (rhs_matrix or V).as_tuple(), "l": l, "r": as_rational(r), "M": M.as_tuple(), "tau": mp.tau}
    return make_report("reciprocity", params, lhs, rhs, tol, criterion, 0, t0)


def hat_sides(V, l, r, M, X, Y, mp, rhs_matrix=None):
    r = as_rational(r)
    jr = V.c * r + V.d
    if jr <= 0:
        raise DomainError("the two-variable identity is stated for j(V; r) > 0")
    if not (admissible(V, M) and admissible_r(r, M)):
        raise DomainError("M must lie in M2(V) and M2(r)")
    n2, d2, _ = act_rational(V, r)
    X0, Y0 = act_xy(V, complex(X), complex(Y))
    lhs = (hat_s(0, l - 1, r, M, X, Y, mp)
           - float(jr) ** (l - 1) * hat_s(0, l - 1, Fraction(n2, d2), act_char(V, M), X0, Y0, mp))
    return lhs, hat_r(V if rhs_matrix is None else rhs_matrix, l, r, M, X, Y, mp)


def check_hat(V, l, r, M, X, Y, mp, tol=1e-8, criterion="abs", rhs_matrix=None):
    """Two-variable transformation law of S^_{1,l} (needs j(V; r) > 0)."""
    t0 = time.perf_counter()
    mp = as_modular(mp)
    lhs, rhs = hat_sides(V, l, r, M, X, Y, mp, rhs_matrix)
    per = hat_periodicity_residual(l, r, M, X, Y, mp)
    params = {"V": V.as_tuple(), "rhs_matrix": (rhs_matrix or V).as_tuple(), "l": l, "r": as_rational(r),
              "M": M.as_tuple(), "X": complex(X),
              "Y": complex(Y), "tau": mp.tau, "periodicity_residual": per}
    rep = make_report("hat", params, lhs, rhs, tol, criterion, 0, t0)
    if per > tol:
        rep.passed = 0
    return rep


def hat_periodicity_residual(l, r, M, X, Y, mp):
    """Largest relative defect of the four lattice quasi-periodicities of S^_{1,l} in X and Y."""
    mp = as_modular(mp)
    tau = mp.tau
    s = hat_s(0, l - 1, r, M, X, Y, mp)
    e = numeric.cexp2pii
    pairs = [((X + 1, Y), e(-M.row_y.x)), ((X + tau, Y), e(-M.row_y.xp)),
             ((X, Y + 1), e(M.row_x.x)), ((X, Y + tau), e(M.row_x.xp))]
    worst = 0.0
    for (X1, Y1), ph in pairs:
        worst = max(worst, abs(hat_s(0, l - 1, r, M, X1, Y1, mp) - ph * s))
    return worst / max(1.0, abs(s))


def check_berndt(l, c_disc=None, policy=None, tol=1e-8, alpha=None, eps=None, criterion="rel"):
    """cot_dirichlet(2l-1, alpha) against the closed form.

    alpha comes from the +-4 Pell solution for ``c_disc`` unless given.
    Passing ``eps`` forces that sign without checking it (negative control).
    """
    t0 = time.perf_counter()
    policy = policy or TruncationPolicy()
    if alpha is None:
        if c_disc is None:
            raise DomainError("give c_disc or alpha")
        alpha, eps0 = pell_alpha(c_disc)
    else:
        alpha = require_irrational(alpha)
        nrm = alpha.norm()
        if nrm not in (1, -1):
            raise DomainError(f"alpha has norm {nrm}, not +-1")
        eps0 = int(nrm)
    if eps is None:
        rhs = series.berndt_rhs(l, alpha, eps0)
    else:
        rhs = series._berndt_raw(l, alpha, eps)
    lhs = series.cot_dirichlet(2 * l - 1, alpha, policy)
    params = {"l": l, "alpha": alpha, "eps": eps0 if eps is None else eps, "N": policy.max_index,
              "est_tail": lhs.est_tail}
    if c_disc is not None:
        params["c"] = c_disc
    return make_report("berndt", params, lhs.value, _c(rhs), tol, criterion, lhs.terms_used, t0)


def check_degeneration(l, alpha, M, im_tau=8.0, policy=None, tol=1e-6, criterion="abs",
                       series_terms=100000):
    """Re of the normalised elliptic series at tau = i im_tau against its classical limit."""
    t0 = time.perf_counter()
    policy = policy or TruncationPolicy()
    alpha = require_irrational(alpha)
    lhs, v = series.degeneration_lhs(l, alpha, M, im_tau, policy)
    rhs = series.degeneration_rhs(l, alpha, M, policy.with_(max_index=series_terms))
    params = {"l": l, "alpha": alpha, "M": M.as_tuple(), "im_tau": im_tau, "max_index": policy.max_index}
    return make_report("degeneration", params, lhs, rhs, tol, criterion, v.terms_used, t0)


def check_degeneration_edr(m, n, r, M, im_tau=8.0, tol=1e-8, criterion="abs"):
    """Re S_{m,n}(r, M; i im_tau) against the classical Dedekind-Rademacher limit."""
    t0 = time.perf_counter()
    r = as_rational(r)
    mp = ModularParameter(1j * im_tau)
    lhs = _c(edr_sum(m, n, r, M, mp)).real
    rhs = edr_degeneration_rhs(m, n, r, M)
    params = {"m": m, "n": n, "r": r, "M": M.as_tuple(), "im_tau": im_tau}
    return make_report("degeneration_edr", params, lhs, rhs, tol, criterion, 0, t0)


# ------------------------------------------------------------------ suite

def _negative(report):
    report.expect = 0
    return report


def _rejected(fn, identity_id):
    """Negative control for inputs that must be refused with a domain error."""
    t0 = time.perf_counter()
    try:
        fn()
    except DomainError as exc:
        rep = make_report(identity_id, {"rejected": exc}, 0, 0, 0.0, "abs", 0, t0)
        rep.passed = 0
    else:
        rep = make_report(identity_id, {"rejected": "no"}, 0, 0, 0.0, "abs", 0, t0)
    rep.expect = 0
    return rep


def _suite_entries():
    from .modular import S, T
    r2 = as_quadratic("0,1,2,1")
    phi = as_quadratic("1,1,5,2")
    M = CharMatrix.of(0.21, 0.37, 0.13, 0.58)
    mp1 = ModularParameter(1j)
    mp2 = ModularParameter(0.1 + 1.2j)
    pol = TruncationPolicy(max_index=400)
    return [
        ("berndt c=5 l=3", lambda: check_berndt(3, 5, TruncationPolicy(max_index=100000))),
        ("berndt c=2 l=2", lambda: check_berndt(2, 2, TruncationPolicy(max_index=1000000), tol=1e-3)),
        ("berndt c=5 l=2 wrong eps", lambda: _negative(
            check_berndt(2, 5, TruncationPolicy(max_index=1000000), tol=1e-3, eps=1))),
        ("transform T", lambda: check_transform(T, 4, r2, M, mp1, pol, tol=1e-10)),
        ("transform S l=4", lambda: check_transform(S, 4, r2, M, mp1, pol)),
        ("transform S l=4, R from S T", lambda: _negative(
            check_transform(S, 4, r2, M, mp1, pol, rhs_matrix=S @ T))),
        ("matrix with det 2", lambda: _rejected(lambda: UnimodularMatrix(1, 1, 1, 3), "transform")),
        ("M with y in Z^2", lambda: _rejected(
            lambda: check_transform(S, 4, r2, CharMatrix.of(0.21, 0.37, 1.0, 0.0), mp1, pol), "transform")),
        ("cocycle T,S", lambda: check_cocycle(T, S, 5, 0.3 + 0.7j, M, mp2)),
        ("cocycle T,S with product V1 V2", lambda: _negative(
            check_cocycle(T, S, 5, 0.3 + 0.7j, M, mp2, product=T @ S))),
        ("reciprocity", lambda: check_reciprocity(UnimodularMatrix(1, 0, 1, 1), 3, Fraction(2, 3), M, mp2)),
        ("reciprocity, R from (1,0;2,1)", lambda: _negative(check_reciprocity(
            UnimodularMatrix(1, 0, 1, 1), 3, Fraction(2, 3), M, mp2, rhs_matrix=UnimodularMatrix(1, 0, 2, 1)))),
        ("hat", lambda: check_hat(S, 2, Fraction(1, 2), M, 0.11 + 0.07j, -0.05 + 0.13j, mp2)),
        ("hat, R from S T", lambda: _negative(
            check_hat(S, 2, Fraction(1, 2), M, 0.11 + 0.07j, -0.05 + 0.13j, mp2, rhs_matrix=S @ T))),
        ("degeneration i", lambda: check_degeneration(5, r2, CharMatrix.of(0.0, 0.3, 0.0, 0.4), 8.0, pol)),
        ("degeneration ii generic", lambda: check_degeneration_edr(2, 2, Fraction(3), CharMatrix.of(0.25, 0.0, 0.4, 0.5))),
        ("degeneration ii correction", lambda: check_degeneration_edr(1, 1, Fraction(1, 2), CharMatrix.of(0.3, 0.0, 0.45, 0.0))),
        ("degeneration ii without correction", lambda: _negative(
            make_report("degeneration_edr", {"note": "classical sum alone"},
                        _c(edr_sum(1, 1, Fraction(1, 2), CharMatrix.of(0.3, 0.0, 0.45, 0.0), ModularParameter(8j))).real,
                        0.0, 1e-8, "abs", 0, time.perf_counter()))),
        ("phi transform (2,1;1,1)", lambda: check_transform(UnimodularMatrix(2, 1, 1, 1), 5, phi, M, mp2, pol, tol=1e-6)),
    ]


def run_suite(names=None):
    """Run the default suite in declaration order; returns (reports, all_as_expected)."""
    reports = []
    for name, fn in _suite_entries():
        if names and name not in names:
            continue
        rep = fn()
        rep.params["case"] = name
        reports.append(rep)
    return reports, all(r.as_expected for r in reports)
