from fractions import Fraction as F
from math import sqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nashgadgets.quadfield import (
    MixedRadicands,
    QuadAlgebraic,
    compare,
    format_number,
    parse_number,
    qsqrt,
    to_float,
)

R6 = QuadAlgebraic(0, 1, 6)


def test_addition_closure():
    assert (3 - R6) + (3 - R6) == QuadAlgebraic(6, -2, 6)


def test_canonical_form_of_one_minus_inverse_root6():
    x = 1 - 1 / R6
    assert x == QuadAlgebraic(1, F(-1, 6), 6)
    assert str(x) == "1 - (1/6)sqrt(6)"


def test_conjugate_product_is_rational():
    p = (3 - R6) * (3 + R6)
    assert p == 3
    assert isinstance(p, F) or p.b == 0


@pytest.mark.parametrize(
    "x, y, want",
    [(3 - R6, F(1, 2), 1), (3 - R6, 3 - R6, 0), (1 - 1 / R6, 1, -1)],
)
def test_compare(x, y, want):
    assert compare(x, y) == want


def test_to_float():
    assert abs(to_float(3 - R6) - 0.5505102572168219) < 1e-15
    assert to_float(F(1, 2)) == 0.5
    assert abs(to_float(1 - 1 / R6) - 0.5917517095361369) < 1e-15


def test_mixed_radicands_rejected():
    with pytest.raises(MixedRadicands):
        R6 + QuadAlgebraic(0, 1, 2)


def test_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        R6 / (R6 - R6)


def test_radicand_is_made_squarefree():
    assert QuadAlgebraic(0, 1, 24) == QuadAlgebraic(0, 2, 6)
    assert QuadAlgebraic(1, 1, 1) == 2
    assert qsqrt(F(1, 2)) == QuadAlgebraic(0, F(1, 2), 2)
    assert qsqrt(F(9, 4)) == F(3, 2)


def test_literals_round_trip():
    for v in (F(-7, 3), F(0), 3 - R6, 1 - 1 / R6):
        text = format_number(v)
        back, pos = parse_number(text.split())
        assert back == v and pos == len(text.split())
    assert format_number(3 - R6) == "alg 3/1 -1/1 6"


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elems = st.builds(lambda a, b: QuadAlgebraic(a, b, 6), rationals, rationals)


@settings(max_examples=80, deadline=None)
@given(elems, elems, elems)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if x != 0:
        assert x * (1 / x) == 1


@settings(max_examples=80, deadline=None)
@given(elems, elems)
def test_compare_agrees_with_floats(x, y):
    fx, fy = to_float(x), to_float(y)
    if abs(fx - fy) > 1e-9:
        assert compare(x, y) == (1 if fx > fy else -1)


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=0, max_value=50, max_denominator=20))
def test_qsqrt_squares_back(r):
    s = qsqrt(r)
    assert s * s == r
    assert abs(to_float(s) - sqrt(float(r))) < 1e-9
