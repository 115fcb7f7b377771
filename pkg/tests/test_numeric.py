import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ellcot import numeric
from ellcot.classical import bernoulli_number
from ellcot.numeric import (DomainError, RangeError, SeriesResult, TruncationPolicy, angle_split,
                            cexp2pii, frac_parts, riemann_zeta)


def test_cexp2pii_basic():
    assert cexp2pii(0) == 1
    assert abs(cexp2pii(0.5) + 1) < 1e-15
    v = cexp2pii(1j)
    assert abs(v - 1.8674427317079893e-3) < 1e-15
    assert abs(v.imag) < 1e-18


def test_cexp2pii_overflow():
    with pytest.raises(RangeError):
        cexp2pii(-200j)
    with pytest.raises(RangeError):
        cexp2pii(complex("nan"))


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e6, 1e6), st.floats(-2, 2))
def test_cexp2pii_period(re, im):
    z = complex(re, im)
    a, b = cexp2pii(z + 1), cexp2pii(z)
    assert abs(a - b) <= 1e-13 * abs(b)
    assert abs(abs(b) - math.exp(-2 * math.pi * im)) <= 1e-13 * abs(b)


@pytest.mark.parametrize("x,expected", [(0.5, (0, 0.5)), (1.75, (2, -0.25)), (-0.5, (-1, 0.5)), (3.0, (3, 0.0))])
def test_angle_split(x, expected):
    assert angle_split(x) == expected


@settings(max_examples=300, deadline=None)
@given(st.floats(-1e8, 1e8))
def test_angle_split_property(x):
    k, f = angle_split(x)
    assert -0.5 < f <= 0.5
    assert k + f == pytest.approx(x, abs=2 * math.ulp(x) + 1e-300)


@pytest.mark.parametrize("x,expected", [(1, (1, 0, 1)), (0.3, (0.3, 0.3, 0)), (-0.25, (0.75, 0.75, 0)), (0, (1, 0, 1))])
def test_frac_parts(x, expected):
    got = frac_parts(x)
    assert got[2] == expected[2]
    assert got[0] == pytest.approx(expected[0], abs=1e-15)
    assert got[1] == pytest.approx(expected[1], abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.floats(-1e6, 1e6))
def test_frac_parts_property(x):
    ang, fr, chi = frac_parts(x)
    assert 0 < ang <= 1 and 0 <= fr < 1
    assert round(ang - fr) == chi


def test_frac_parts_tolerance():
    assert frac_parts(2 + 1e-11)[2] == 1
    assert frac_parts(2 + 1e-6)[2] == 0


def test_zeta_values():
    assert riemann_zeta(2) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    assert riemann_zeta(4) == pytest.approx(math.pi ** 4 / 90, rel=1e-15)
    # brute force plus Euler-Maclaurin tail
    N = 10 ** 5
    s = math.fsum(1.0 / n ** 3 for n in range(1, N + 1))
    s += 1 / (2 * N ** 2) - 1 / (2 * N ** 3) + 1 / (4 * N ** 4)
    assert riemann_zeta(3) == pytest.approx(s, rel=1e-13)
    with pytest.raises(DomainError):
        riemann_zeta(1)


@pytest.mark.parametrize("k", range(1, 7))
def test_zeta_even_closed_form(k):
    b = abs(bernoulli_number(2 * k))
    closed = (2 * math.pi) ** (2 * k) * float(b) / (2 * math.factorial(2 * k))
    assert riemann_zeta(2 * k) == pytest.approx(closed, rel=1e-12)


def test_policy_validation(tmp_path):
    with pytest.raises(DomainError):
        TruncationPolicy(max_index=0)
    with pytest.raises(DomainError):
        TruncationPolicy(tail_tol=0)
    p = tmp_path / "cfg.json"
    p.write_text('{"max_index": 123}')
    assert TruncationPolicy.from_json(str(p)).max_index == 123
    with pytest.raises(DomainError):
        TruncationPolicy.from_mapping({"bogus": 1})


def test_series_result_rejects_negative_tail():
    with pytest.raises(DomainError):
        SeriesResult(1.0, -1.0, 3)


def test_extended_mode_roundtrip():
    old = numeric.precision_mode()
    try:
        numeric.set_precision("extended")
        v = cexp2pii(mpmath.mpf(1) / 3)
        assert abs(complex(v) - cmath.exp(2j * math.pi / 3)) < 1e-15
        assert numeric.MP.prec >= 100
    finally:
        numeric.set_precision(old)
    with pytest.raises(DomainError):
        numeric.set_precision("quad")
