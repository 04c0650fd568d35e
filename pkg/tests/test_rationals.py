from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sepcheck.rationals import format_rational, integerize, parse_rational, snap, sqrt_upper


@pytest.mark.parametrize(
    "text, value",
    [("3/4", Fraction(3, 4)), ("0.15", Fraction(3, 20)), (2, Fraction(2)), (0.1, Fraction(1, 10))],
)
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", [True, None, float("nan"), "x/y"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(bad)


def test_format_always_has_denominator():
    assert format_rational(3) == "3/1"
    assert format_rational(Fraction(-2, 4)) == "-1/2"


def test_snap_is_exact_binary_value():
    assert snap(0.5) == Fraction(1, 2)
    assert float(snap(0.1)) == 0.1
    with pytest.raises(ValueError):
        snap(float("inf"))


def test_integerize_reduces():
    assert integerize([Fraction(2, 3), Fraction(1, 6), 0]) == [4, 1, 0]
    assert integerize([Fraction(1, 2), Fraction(1, 2)]) == [1, 1]


@given(st.integers(min_value=1, max_value=10**6))
def test_sqrt_upper_bounds(n):
    r = sqrt_upper(n)
    assert r * r >= n
    assert (r - Fraction(1, 10**12)) ** 2 < n or r * r == n


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6))
def test_integerize_is_positive_multiple(values):
    ints = integerize(values)
    nz = next((k for k, v in enumerate(values) if v), None)
    if nz is None:
        assert all(v == 0 for v in ints)
        return
    scale = Fraction(ints[nz]) / values[nz]
    assert scale > 0
    assert all(Fraction(i) == scale * v for i, v in zip(ints, values))
