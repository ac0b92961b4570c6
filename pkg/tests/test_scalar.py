from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from readop.errors import FormatError
from readop.scalar import ONE, ZERO, Scalar, scalar_sum

fractions = st.fractions(max_denominator=10**6).filter(lambda f: abs(f) < 10**12)
dyadics = st.builds(lambda n, e: Scalar(n) * Scalar.pow2(e), st.integers(-10**6, 10**6), st.integers(-400, 400))


@given(fractions, fractions)
def test_arithmetic_matches_fraction(a, b):
    x, y = Scalar(a), Scalar(b)
    assert (x + y).as_fraction() == a + b
    assert (x - y).as_fraction() == a - b
    assert (x * y).as_fraction() == a * b
    if b:
        assert (x / y).as_fraction() == a / b


@given(fractions, fractions)
def test_ordering_matches_fraction(a, b):
    x, y = Scalar(a), Scalar(b)
    assert (x < y) == (a < b)
    assert (x <= y) == (a <= b)
    assert (x == y) == (a == b)


@given(dyadics)
def test_text_round_trip(x):
    assert Scalar.parse(str(x)) == x
    assert Scalar.parse(repr(x)[len("Scalar('"):-2]) == x


@given(dyadics.filter(bool))
def test_pow2_ceiling_is_tight(x):
    c = abs(x).pow2_ceiling()
    e = c.log2_exact()
    assert abs(x) <= c
    assert abs(x) > Scalar.pow2(e - 1)


def test_huge_exponents_stay_exact():
    big = Scalar.pow2(10**6)
    assert (big * Scalar.pow2(-10**6)) == ONE
    assert big > Scalar.pow2(10**6 - 1)
    assert str(Scalar.pow2(-300)) == "2^-300"


def test_parse_forms():
    assert Scalar.parse("-3/4") == Scalar(Fraction(-3, 4))
    assert Scalar.parse("5*2^-3") == Scalar(Fraction(5, 8))
    assert Scalar.parse("2^7") == 128


@pytest.mark.parametrize("bad", ["", "1.5", "2^", "3/0x", "abc"])
def test_parse_rejects(bad):
    with pytest.raises((FormatError, ValueError)):
        Scalar.parse(bad)


def test_log2_exact_requires_power_of_two():
    assert Scalar(64).log2_exact() == 6
    with pytest.raises(ValueError):
        Scalar(3).log2_exact()


def test_sum_and_zero():
    assert scalar_sum([Scalar(1) / 3] * 3) == ONE
    assert not ZERO
