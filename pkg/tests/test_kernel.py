from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaudin_sov.kernel import (
    NotExpandable,
    NotSimplePoles,
    partial_fractions,
    poly_ring,
    ratfunc_eq,
    series_coeff,
)

R = poly_ring(("X", "Y"))
X, Y = R.vars("X", "Y")
T = poly_ring(("t", "a"))
t, a = T.vars("t", "a")

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def test_cancellation_is_exact():
    assert ratfunc_eq((X**2 - 1) / (X - 1), X + 1)


def test_distinct_variables_differ():
    assert not ratfunc_eq(X, Y)
    assert not ratfunc_eq(X, Y, "probabilistic", seed=3)


def test_interpolation_numerator_cfg1():
    u = (1, -1, -1, 1)
    pi = (X - 0) * (X - 1) * (X - 2) * (X - 3)
    s = sum((ui / (X - ai) for ui, ai in zip(u, range(4))), R.zero())
    assert ratfunc_eq(pi * s, 4 * X - 6)


def test_series_coefficients_of_simple_pole():
    assert series_coeff(1 / (t - a), "t", 1) == T.one()
    assert series_coeff(1 / (t - a), "t", 2) == a
    assert series_coeff(4 / (4 * t - 6), "t", 1) == T.one()


def test_series_rejects_polynomial_part():
    with pytest.raises(NotExpandable):
        series_coeff(t**2 / (t - a), "t", 1)
    # with the polynomial part allowed, t^2/(t - a) = t + a + a^2/t + ...
    assert series_coeff(t**2 / (t - a), "t", 1, allow_polynomial_part=True) == a**2


def test_partial_fractions_examples():
    poly, res = partial_fractions(1 / (X * (X - 1)), "X", [0, 1])
    assert poly.is_zero() and res == [R.const(-1), R.one()]
    pi = X * (X - 1) * (X - 2) * (X - 3)
    _, res = partial_fractions((4 * X - 6) / pi, "X", [0, 1, 2, 3])
    assert res == [R.const(c) for c in (1, -1, -1, 1)]


def test_repeated_pole_rejected():
    with pytest.raises(NotSimplePoles):
        partial_fractions(1 / (X * X), "X", [0])


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=4, max_size=4, unique=True))
def test_partial_fraction_round_trip(residues, poles):
    poles = poles[: len(residues)]
    r = sum((c / (X - p) for c, p in zip(residues, poles)), R.zero())
    poly, got = partial_fractions(r, "X", poles)
    assert poly.is_zero()
    assert got == [R.const(c) for c in residues]


@settings(max_examples=30, deadline=None)
@given(small, small, small, st.integers(min_value=1, max_value=4))
def test_series_coefficient_is_linear(c1, c2, pole, k):
    r1 = 1 / (t - pole)
    r2 = t / ((t - pole) * (t - pole - 1))
    lhs = series_coeff(c1 * r1 + c2 * r2, "t", k)
    assert lhs == c1 * series_coeff(r1, "t", k) + c2 * series_coeff(r2, "t", k)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=3, max_size=3), st.integers(0, 10**6))
def test_probabilistic_agrees_with_exact(coeffs, seed):
    c0, c1, c2 = coeffs
    p = c0 + c1 * X + c2 * X * Y
    q = (p * (X + Y + 1)) / (X + Y + 1)
    assert ratfunc_eq(p, q, "probabilistic", seed=seed)
    assert ratfunc_eq(p, q, "probabilistic", seed=seed, modular=True)
    other = p + X * X
    assert ratfunc_eq(p, other) == ratfunc_eq(p, other, "probabilistic", trials=5, seed=seed)


def test_substitution_and_evaluation():
    r = (X**2 + Y) / (X - Y)
    assert r.evaluate({"X": Fraction(2), "Y": Fraction(1)}) == 5
    assert r.subs({"Y": 0}) == X
