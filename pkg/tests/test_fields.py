import cmath
from fractions import Fraction

import pytest
from hypothesis import given

from foliate.errors import FieldCannotRepresentRoot
from foliate.fields import APPROX, EXACT, ApproxField, GaussianRational, parse_rational
from strategies import gaussian_rationals


@given(gaussian_rationals(), gaussian_rationals())
def test_field_arithmetic(a, b):
    assert (a + b) - b == a
    if b != 0:
        assert (a / b) * b == a
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))


@given(gaussian_rationals())
def test_string_round_trip(a):
    assert GaussianRational.parse(str(a)) == a


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    for bad in ("1/0", "x", "1.5", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_exact_roots():
    assert EXACT.root(GaussianRational(-4), 2) ** 2 == GaussianRational(-4)
    assert EXACT.root(GaussianRational(0, 2), 2) ** 2 == GaussianRational(0, 2)
    assert EXACT.root(GaussianRational(Fraction(27, 8)), 3) == GaussianRational(Fraction(3, 2))
    with pytest.raises(FieldCannotRepresentRoot):
        EXACT.root(GaussianRational(2), 2)


def test_roots_of_unity():
    assert EXACT.root_of_unity(4) == GaussianRational(0, 1)
    with pytest.raises(FieldCannotRepresentRoot):
        EXACT.root_of_unity(3)
    assert APPROX.root_of_unity(3) == pytest.approx(cmath.exp(2j * cmath.pi / 3))


def test_approx_tolerance():
    f = ApproxField(1e-6)
    assert f.is_zero(1e-7) and not f.is_zero(1e-5)
    with pytest.raises(ValueError):
        ApproxField(0)
