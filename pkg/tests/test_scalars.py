from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from weylforge.scalars import (
    HUSeries,
    NonInvertibleLeadingTerm,
    parse_fraction,
    series_transcend,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def series(draw, trunc=6):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, trunc - 1), st.integers(-1, 1)), fractions, max_size=5))
    return HUSeries(terms, h_trunc=trunc)


def test_difference_of_squares():
    one, h = HUSeries.const(1, 3), HUSeries.monomial(1, h_trunc=3)
    assert (one + h) * (one - h) == HUSeries({(0, 0): 1, (2, 0): -1}, h_trunc=3)


def test_laurent_cancellation():
    assert HUSeries.monomial(-1) * HUSeries.monomial(1) == HUSeries.const(1)


def test_binomial_with_u():
    s = HUSeries({(0, 0): 1, (-1, 1): 1})
    assert s * s == HUSeries({(0, 0): 1, (-1, 1): 2, (-2, 2): 1})


def test_geometric_inverse():
    got = series_transcend("inv", HUSeries({(0, 0): 1, (1, 0): -1}, h_trunc=4))
    assert got == HUSeries({(k, 0): 1 for k in range(4)}, h_trunc=4)


def test_exp_h():
    got = series_transcend("exp", HUSeries.monomial(1, h_trunc=3))
    assert got == HUSeries({(0, 0): 1, (1, 0): 1, (2, 0): Fraction(1, 2)}, h_trunc=3)


def test_sqrt_matches_sinh_oracle():
    z = sp.Symbol("z")
    target = sp.series((z / 2) / sp.sinh(z / 2), z, 0, 7).removeO()
    coeffs = [Fraction(str(target.coeff(z, k))) for k in range(7)]
    got = series_transcend("sqrt", HUSeries.from_coeffs(coeffs, var="z"))
    assert got.coeffs(5) == [1, 0, Fraction(-1, 48), 0, Fraction(1, 2560)]
    assert got * got == HUSeries.from_coeffs(coeffs, var="z")


def test_inverse_of_exact_polynomial_needs_truncation():
    with pytest.raises(NonInvertibleLeadingTerm):
        series_transcend("inv", HUSeries({(0, 0): 1, (1, 0): 1}))


@given(series(), series())
@settings(max_examples=60, deadline=None)
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(series(), series(), series())
@settings(max_examples=40, deadline=None)
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(series())
@settings(max_examples=40, deadline=None)
def test_json_roundtrip(a):
    assert HUSeries.from_json(a.to_json()) == a


@given(fractions)
def test_fraction_strings(q):
    s = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    assert parse_fraction(s) == q


@given(st.lists(fractions, min_size=1, max_size=6).filter(lambda c: c[0] != 0))
@settings(max_examples=40, deadline=None)
def test_inverse_times_self(coeffs):
    s = HUSeries.from_coeffs(coeffs, var="z")
    assert series_transcend("inv", s) * s == HUSeries.const(1, len(coeffs), var="z")


@given(st.lists(fractions, min_size=2, max_size=6))
@settings(max_examples=30, deadline=None)
def test_log_exp_inverse(coeffs):
    coeffs[0] = Fraction(0)
    s = HUSeries.from_coeffs(coeffs, var="z")
    assert series_transcend("log", series_transcend("exp", s)) == s


def test_unknown_json_field_rejected():
    with pytest.raises(ValueError):
        HUSeries.from_json({"terms": [], "bogus": 1})
