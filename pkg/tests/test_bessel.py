import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interband import bessel_addition_check, bessel_j
from oracles import bessel_mp, bessel_series


def test_j0_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0


def test_j1_of_one_against_series():
    assert bessel_j(1, 1.0) == pytest.approx(bessel_series(1, 1.0), abs=1e-15)
    assert bessel_j(1, 1.0) == pytest.approx(0.4400505857449335, abs=1e-15)


def test_negative_order_reflection():
    assert bessel_j(-2, 0.5) == bessel_j(2, 0.5)
    assert bessel_j(-3, 0.5) == -bessel_j(3, 0.5)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 20])
@pytest.mark.parametrize("x", [1e-6, 0.015, 0.3, 1.0, 1.99, 2.0, 2.4048, 3.7, 6.5, 9.99, 10.0])
def test_against_high_precision(n, x):
    assert abs(bessel_j(n, x) - bessel_mp(n, x)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(-20, 20), st.floats(-10, 10, allow_nan=False))
def test_random_orders_and_arguments(n, x):
    assert abs(bessel_j(n, x) - bessel_mp(n, x)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 20), st.floats(0, 10, allow_nan=False))
def test_argument_symmetry(n, x):
    assert abs(bessel_j(n, -x) - (-1) ** n * bessel_j(n, x)) < 1e-13


@pytest.mark.parametrize("x", [0.01, 0.5, 2.0, 4.2, 7.0, 10.0])
def test_normalisation(x):
    n_max = math.ceil(abs(x)) + 25
    total = math.fsum(bessel_j(n, x) ** 2 for n in range(-n_max, n_max + 1))
    assert abs(total - 1.0) < 1e-10


def test_addition_against_series():
    assert abs(bessel_addition_check(1, 0, 0.5, 0.2, 25) - bessel_series(1, 0.3)) < 1e-12
    assert abs(bessel_addition_check(0, 0, 2.0, 1.0, 30) - bessel_series(0, 1.0)) < 1e-12


def test_addition_identity_case():
    assert abs(bessel_addition_check(0, 0, 0.1, 0.1, 20) - 1.0) < 1e-12


@pytest.mark.parametrize(
    "n, n_prime, x, x_prime, l_max",
    [(1, 0, 0.5, 0.2, 25), (0, 0, 2.0, 1.0, 30), (3, -2, 4.0, 1.5, 40), (2, 5, 7.0, 9.5, 50)],
)
def test_addition_theorem(n, n_prime, x, x_prime, l_max):
    value = bessel_addition_check(n, n_prime, x, x_prime, l_max)
    assert abs(value - bessel_mp(n - n_prime, x - x_prime)) < 1e-10
    assert abs(value - bessel_j(n - n_prime, x - x_prime)) < 1e-10


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_non_finite_rejected(bad):
    with pytest.raises(ValueError):
        bessel_j(0, bad)
    with pytest.raises(ValueError):
        bessel_addition_check(0, 0, bad, 0.0, 5)


def test_non_integer_order_rejected():
    with pytest.raises(ValueError):
        bessel_j(0.5, 1.0)
