import cmath
import math

import numpy as np
import pytest

from ellcot.classical import bernoulli_poly
from ellcot.modular import CharVector
from ellcot.numeric import DomainError, PoleError, RadiusError, RangeError
from ellcot.thetakron import (ModularParameter, eisenstein_bernoulli_oracle, elliptic_bernoulli,
                              kronecker_F, kronecker_F_deriv, kronecker_F_deriv_reduced, theta,
                              theta_prime0, theta_product)

TWO_PI_I = 2j * math.pi


def e(x):
    return cmath.exp(TWO_PI_I * x)


# values from an independent 25-digit mpmath evaluation of the theta series,
# and B_m from contour integrals of that theta quotient
THETA_03_I = -0.737197163718681598
DTHETA0_I = -2.848694603987787316
F_REF = 7.5181201545871854 - 3.0874830793235414j
B_REF = [0.11265892893441968 + 0.10295754587284074j, -0.096976250782989993 - 0.038029235309032396j,
         -0.021776777700683493 + 0.063835840539374932j, 0.012810713451964642 - 0.0023292206276299349j]


def test_modular_parameter_validation():
    with pytest.raises(DomainError):
        ModularParameter(1 - 1j)
    with pytest.raises(DomainError):
        ModularParameter(0.5)


def test_theta_values(mp_i):
    assert theta(0, mp_i) == 0
    assert theta(0.3, mp_i) == pytest.approx(THETA_03_I, abs=1e-15)
    assert abs(theta(0.3, mp_i) - theta_product(0.3, mp_i)) < 1e-12


def test_theta_prime0(mp_i):
    d = theta_prime0(mp_i)
    assert d != 0
    assert d == pytest.approx(DTHETA0_I, rel=1e-14)
    q = mp_i.q
    prod = np.prod([(1 - q ** m) ** 3 for m in range(1, 40)])
    # the sum normalisation carries a minus sign relative to 2 pi q^(1/8) prod (1-q^m)^3
    assert d == pytest.approx(-2 * math.pi * mp_i.q8 * prod, rel=1e-14)
    shifted = theta_prime0(ModularParameter(1 + 1j))
    assert shifted == pytest.approx(e(1 / 8) * d, rel=1e-14)


@pytest.mark.parametrize("imtau,imx", [(12.0, 18.0), (16.0, 30.0), (30.0, 55.0)])
def test_theta_large_im_tau(imtau, imx):
    # plain c_k sin(w) would give 0 * inf here
    import mpmath
    mp = ModularParameter(imtau * 1j)
    x = 0.3 + imx * 1j
    ref = -complex(mpmath.jtheta(1, mpmath.pi * mpmath.mpc(x), mpmath.exp(1j * mpmath.pi * mpmath.mpc(mp.tau))))
    val = theta(x, mp)
    assert abs(val - ref) <= 1e-12 * abs(ref)


def test_theta_range_error(mp_i):
    with pytest.raises(RangeError):
        theta(500j, mp_i)


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.1j])
def test_theta_quasi_periodicity(tau, rng):
    mp = ModularParameter(tau)
    for _ in range(50):
        x = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))
        t = theta(x, mp)
        scale = max(1.0, abs(t))
        assert abs(theta(-x, mp) + t) <= 1e-12 * scale
        assert abs(theta(x + 1, mp) + t) <= 1e-12 * scale
        assert abs(theta(x + tau, mp) + e(-tau / 2 - x) * t) <= 1e-11 * scale


def test_kronecker_F_value(mp_i):
    assert kronecker_F((0.2, 0.6), 0.1 + 0.05j, mp_i) == pytest.approx(F_REF, rel=1e-13)


def test_kronecker_F_errors(mp_i):
    with pytest.raises(DomainError):
        kronecker_F((1.0, 0.0), 0.3, mp_i)
    with pytest.raises(PoleError):
        kronecker_F((0.2, 0.6), 1j + 1, mp_i)


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.1j])
def test_kronecker_F_properties(tau, rng):
    mp = ModularParameter(tau)
    for _ in range(100):
        v = CharVector(rng.random(), rng.random())
        X = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))
        if abs(X) < 0.05:
            continue
        f = kronecker_F(v, X, mp)
        assert abs(kronecker_F(v, X + 1, mp) - e(v.x) * f) < 1e-11 * max(1, abs(f))
        assert abs(kronecker_F(v, X + tau, mp) - e(v.xp) * f) < 1e-11 * max(1, abs(f))
        assert abs(kronecker_F(CharVector(-v.xp, -v.x), -X, mp) + f) < 1e-11 * max(1, abs(f))
        assert abs(kronecker_F(CharVector(v.xp + 3, v.x - 2), X, mp) - f) < 1e-11 * max(1, abs(f))


def test_kronecker_F_residue(mp_gen):
    v = (0.31, 0.77)
    r3 = 1e-3 * kronecker_F(v, 1e-3, mp_gen)
    r4 = 1e-4 * kronecker_F(v, 1e-4, mp_gen)
    # X F = 1 + O(X): Richardson step removes the linear term
    assert abs((10 * r4 - r3) / 9 - 1) < 1e-6


def test_F_deriv_matches_F(mp_gen, rng):
    for _ in range(30):
        v = CharVector(rng.random(), rng.random())
        X = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        f = kronecker_F(v, X, mp_gen)
        assert abs(kronecker_F_deriv(0, v, X, mp_gen) - f) < 1e-10 * max(1, abs(f))


def test_F_deriv_finite_difference(mp_gen, rng):
    h = 1e-5
    for _ in range(20):
        v = CharVector(rng.random(), rng.random())
        X = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        if abs(X) < 0.1:
            continue
        fd = (kronecker_F(v, X + h, mp_gen) - kronecker_F(v, X - h, mp_gen)) / (2 * h) / TWO_PI_I
        d1 = kronecker_F_deriv(1, v, X, mp_gen)
        assert abs(d1 - fd) <= 1e-6 * max(1, abs(d1))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_F_deriv_singular_part(n, mp_i):
    X = 1e-4
    lead = (-1) ** n * math.factorial(n) / TWO_PI_I ** n
    val = X ** (n + 1) * kronecker_F_deriv(n, (0.3, 0.6), X, mp_i)
    assert abs(val - lead) < 1e-3 * abs(lead)


def test_F_deriv_radius(mp_i):
    with pytest.raises(RadiusError):
        kronecker_F_deriv(1, (0.3, 0.6), 1.2, mp_i)
    with pytest.raises(DomainError):
        kronecker_F_deriv(1, (0, 0), 0.2, mp_i)


def test_F_deriv_reduced_far_from_origin(mp_gen, rng):
    tau = mp_gen.tau
    for _ in range(30):
        v = CharVector(rng.random(), rng.random())
        X = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        if abs(X) < 0.05:
            continue
        n = rng.randint(0, 3)
        near = kronecker_F_deriv(n, v, X, mp_gen)
        far = kronecker_F_deriv_reduced(n, v, X + 2 * tau - 3, mp_gen)
        assert abs(far - e(2 * v.xp - 3 * v.x) * near) < 1e-10 * max(1, abs(near))


def test_elliptic_bernoulli_values(mp_i):
    assert elliptic_bernoulli(0, (0.3, 0.2), mp_i) == 1
    assert abs(elliptic_bernoulli(1, (0, 0.5), mp_i)) < 1e-15
    for m, ref in enumerate(B_REF, start=1):
        assert elliptic_bernoulli(m, (0.2, 0.6), mp_i) == pytest.approx(ref, rel=1e-13)
    with pytest.raises(DomainError):
        elliptic_bernoulli(2, (1.0, 0.0), mp_i)


def test_elliptic_bernoulli_degenerates():
    # at tau = 8i the leading q-correction is about 3e-10, so compare at 1e-8
    val = elliptic_bernoulli(3, (0.2, 0.6), ModularParameter(8j))
    assert abs(val - bernoulli_poly(3, 0.6)) < 1e-8
    assert abs(val - bernoulli_poly(3, 0.6)) > 1e-11
    # the q-correction vanishes with Im tau
    val = elliptic_bernoulli(3, (0.2, 0.6), ModularParameter(20j))
    assert abs(val - bernoulli_poly(3, 0.6)) < 1e-15


@pytest.mark.parametrize("m", range(0, 9))
def test_elliptic_bernoulli_parity_periodicity(m, mp_gen, rng):
    for _ in range(10):
        v = CharVector(rng.uniform(-2, 2), rng.uniform(-2, 2))
        b = elliptic_bernoulli(m, v, mp_gen)
        assert abs(elliptic_bernoulli(m, CharVector(-v.xp, -v.x), mp_gen) - (-1) ** m * b) < 1e-11 * max(1, abs(b))
        assert abs(elliptic_bernoulli(m, CharVector(v.xp + 2, v.x - 1), mp_gen) - b) < 1e-11 * max(1, abs(b))


def _cauchy_coeffs(v, mp, radius=0.1, npts=64):
    w = np.exp(TWO_PI_I * (np.arange(npts) + 0.5) / npts)
    vals = np.array([radius * z * kronecker_F(v, radius * z, mp) for z in w])
    # X F(X) = sum B_m (2 pi i)^m X^m / m!
    return [np.mean(vals * w ** (-m)) / radius ** m * math.factorial(m) / TWO_PI_I ** m for m in range(7)]


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.1j])
def test_elliptic_bernoulli_cauchy(tau, rng):
    mp = ModularParameter(tau)
    for _ in range(5):
        v = CharVector(rng.random(), rng.random())
        coeffs = _cauchy_coeffs(v, mp)
        for m in range(7):
            b = elliptic_bernoulli(m, v, mp)
            assert abs(coeffs[m] - b) <= 1e-8 * max(abs(b), 1e-3)


def test_eisenstein_oracle(mp_i):
    b4 = elliptic_bernoulli(4, (0, 0), mp_i)
    assert abs(eisenstein_bernoulli_oracle(4, (0, 0), mp_i, 200).value - b4) < 1e-6
    b3 = elliptic_bernoulli(3, (0.3, 0.7), mp_i)
    assert abs(eisenstein_bernoulli_oracle(3, (0.3, 0.7), mp_i, 400).value - b3) < 1e-4
    with pytest.raises(DomainError):
        eisenstein_bernoulli_oracle(2, (0.3, 0.7), mp_i, 10)


def test_eisenstein_oracle_converges(mp_gen):
    v = (0.3, 0.7)
    b = elliptic_bernoulli(4, v, mp_gen)
    errs = [abs(eisenstein_bernoulli_oracle(4, v, mp_gen, N).value - b) for N in (50, 100, 200, 400)]
    assert all(a > b_ for a, b_ in zip(errs, errs[1:]))


@pytest.mark.parametrize("x", [0.29, 0.97])
def test_elliptic_bernoulli_large_im_tau(x):
    # q^-x alone is e^(2 pi x Im tau), beyond double range here
    mp = ModularParameter(128j)
    # the leading correction is q^min(x, 1 - x)
    corr = math.exp(-2 * math.pi * 128 * min(x, 1 - x))
    for m in range(1, 5):
        b = elliptic_bernoulli(m, (0.065, x), mp)
        assert abs(b - bernoulli_poly(m, x)) <= 10 * m * corr + 1e-14
