import math
from fractions import Fraction

import pytest

from ellcot.classical import (bernoulli_number, bernoulli_poly, clausen, cotangent_sum, dedekind_s1,
                              gen_dr_sum, periodic_bernoulli)
from ellcot.numeric import CapacityError, riemann_zeta


def test_bernoulli_numbers():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(12) == Fraction(-691, 2730)
    assert all(bernoulli_number(k) == 0 for k in range(3, 65, 2))
    with pytest.raises(CapacityError):
        bernoulli_number(65)


def test_bernoulli_poly():
    assert bernoulli_poly(1, Fraction(1, 2)) == 0
    assert periodic_bernoulli(1, 0.5) == 0
    assert bernoulli_poly(2, 0) == Fraction(1, 6)
    x = 0.25
    assert periodic_bernoulli(3, 2.25) == pytest.approx(x ** 3 - 1.5 * x ** 2 + 0.5 * x, abs=1e-16)
    assert periodic_bernoulli(1, 3.0) == 0.0
    assert periodic_bernoulli(1, Fraction(-2)) == 0


@pytest.mark.parametrize("c", [2, 3, 5])
@pytest.mark.parametrize("m", range(0, 7))
def test_raabe(c, m, rng):
    for _ in range(20):
        y = rng.uniform(-3, 3)
        lhs = sum(periodic_bernoulli(m, (j + y) / c) for j in range(c))
        assert lhs == pytest.approx(c ** (1 - m) * periodic_bernoulli(m, y), abs=1e-12)


def test_clausen_values():
    assert clausen(3, 0) == pytest.approx(riemann_zeta(3), rel=1e-14)
    assert clausen(2, 0) == 0
    assert clausen(3, 0.5) == pytest.approx(-0.75 * riemann_zeta(3), rel=1e-14)
    assert clausen(4, Fraction(3, 10)) == clausen(4, Fraction(13, 10))
    assert clausen(5, 0.375) == clausen(5, 1.375)
    brute = math.fsum(math.sin(2 * math.pi * m * 0.3) / m ** 4 for m in range(1, 200000))
    assert clausen(4, 0.3) == pytest.approx(brute, abs=1e-14)


def _dr_brute(m, n, r, x, y):
    d, num = r.denominator, r.numerator
    return sum(periodic_bernoulli(m, (j + y) / d) * periodic_bernoulli(n, num * (j + y) / d - x) for j in range(d))


@pytest.mark.parametrize("m,n,r,x,y", [(1, 1, Fraction(1, 3), 0.2, 0.4), (2, 0, Fraction(2, 5), 0.1, 0.7),
                                       (3, 2, Fraction(-7, 4), 0.33, 0.61)])
def test_gen_dr_sum(m, n, r, x, y):
    assert gen_dr_sum(m, n, r, x, y) == pytest.approx(_dr_brute(m, n, r, x, y), abs=1e-15)


def test_gen_dr_sum_single_term():
    r = Fraction(3)
    assert gen_dr_sum(2, 3, r, 0.2, 0.45) == pytest.approx(
        periodic_bernoulli(2, 0.45) * periodic_bernoulli(3, 3 * 0.45 - 0.2), abs=1e-16)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_dedekind_sum(q):
    # sum_j B~1(j/q) B~1(j/q) = s(1, q)
    assert gen_dr_sum(1, 1, Fraction(1, q), Fraction(0), Fraction(0)) == dedekind_s1(q)


def test_cotangent_sum():
    # y = x = 0, r = 1/2: the j = 0 term is excluded, j = 1 gives cot(pi/2)^2 = 0
    assert cotangent_sum(Fraction(1, 2), 0.0, 0.0) == pytest.approx(0.0, abs=1e-30)
    r, x, y = Fraction(1, 3), 0.2, 0.4
    brute = sum(1 / (math.tan(math.pi * (j + y) / 3) * math.tan(math.pi * ((j + y) / 3 - x))) for j in range(3)) / 3
    assert cotangent_sum(r, x, y) == pytest.approx(brute, rel=1e-14)
    assert cotangent_sum(r, x, y + 3) == pytest.approx(cotangent_sum(r, x, y), rel=1e-12)
