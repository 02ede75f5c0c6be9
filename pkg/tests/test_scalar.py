from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rigidweb.scalar import GR, I, ONE, ZERO, GaussianRational, parse_scalar

from oracles import cinv, cmul

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
scalars = st.builds(GR, fractions, fractions)


def pair(x):
    return (x.re, x.im)


@given(scalars, scalars)
def test_arithmetic_matches_fraction_pairs(a, b):
    assert pair(a + b) == (a.re + b.re, a.im + b.im)
    assert pair(a - b) == (a.re - b.re, a.im - b.im)
    assert pair(a * b) == cmul(pair(a), pair(b))
    if not b.is_zero():
        assert pair(a / b) == cmul(pair(a), cinv(pair(b)))


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    if a:
        assert a * a.inverse() == ONE


@given(scalars)
def test_text_round_trip(a):
    assert parse_scalar(str(a)) == a


@given(scalars)
def test_lowest_terms(a):
    p, q, d = a.triple
    assert d > 0
    from math import gcd

    assert gcd(gcd(p, q), d) == 1


def test_printing():
    assert str(GR(3)) == "3"
    assert str(GR(Fraction(-1, 2))) == "-1/2"
    assert str(GR(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4 i"
    assert str(I) == "0+1 i"


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", GR(3)),
        ("-1/2", GR(Fraction(-1, 2))),
        ("0+1 i", I),
        ("i", I),
        ("-2i", GR(0, -2)),
        ("3/4 i", GR(0, Fraction(3, 4))),
        ("1/2-3/4 i", GR(Fraction(1, 2), Fraction(-3, 4))),
        (7, GR(7)),
    ],
)
def test_parse(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("bad", ["", "1/0", "x", "1+", "1 + 2", "1.5", True])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_i_squared():
    assert I * I == -ONE
    assert I ** -1 == -I
    assert GR(3, 4).norm() == 25
    assert isinstance(GR.coerce(2), GaussianRational)
