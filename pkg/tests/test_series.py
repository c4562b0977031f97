import random

import pytest
import sympy

from src.core.series import LaurentSeries, first_discrepancy, invert, monomial_mul, mul
from src.utils.errors import NotAUnit, OutOfRange

q = sympy.symbols("q")


def _series(valuation, coeffs):
    return LaurentSeries(valuation, coeffs)


def test_window_bookkeeping():
    s = _series(-2, [1, 0, 3, 0, 5])
    assert s.valuation == -2
    assert s.order == 3
    assert len(s) == 5
    assert s.coeff(-5) == 0
    assert s.coeff(0) == 3
    with pytest.raises(OutOfRange):
        s.coeff(3)
    assert list(s.items())[0] == (-2, 1)


def test_rendering():
    assert str(LaurentSeries.one(5)) == "1 + O(q^5)"
    assert str(LaurentSeries.monomial(-3, 2, 5)) == "-3*q^2 + O(q^5)"
    assert str(_series(0, [1, 0, -1, 0, 0])) == "1 - q^2 + O(q^5)"
    assert str(LaurentSeries.zero(4)) == "O(q^4)"


def test_monomial_past_order_is_empty_window():
    s = LaurentSeries.monomial(7, 10, 4)
    assert len(s) == 0
    assert s.order == 4


def test_from_terms_drops_unknown_exponents():
    s = LaurentSeries.from_terms({-1: 2, 3: 1, 9: 5}, order=6)
    assert s.valuation == -1
    assert s.coeff(3) == 1
    assert s.order == 6


def test_addition_keeps_shorter_window():
    a = _series(-1, [1, 0, 0])
    b = _series(0, [0, 1, 0, 0])
    total = a + b
    assert total.valuation == -1
    assert total.order == 2
    assert total.coefficients() == [1, 0, 1]
    assert (a - a).is_zero()


def test_geometric_inverse():
    one_minus_q = _series(0, [1, -1, 0, 0, 0, 0])
    inv = invert(one_minus_q)
    assert inv.coefficients() == [1] * 6
    assert mul(one_minus_q, inv) == LaurentSeries.one(6)


def test_inverse_of_laurent_series():
    a = _series(-2, [1, -1, 0, 0])
    inv = a.invert()
    assert inv.valuation == 2
    assert inv.order == 6
    assert inv.coefficients() == [1, 1, 1, 1]


def test_inverse_with_negative_unit():
    a = _series(0, [-1, 1, 0, 0])
    assert invert(a).coefficients() == [-1, -1, -1, -1]


def test_invert_requires_unit():
    with pytest.raises(NotAUnit):
        invert(_series(0, [2, 1, 0]))


def test_multiplication_window():
    a = _series(-1, [1, 1, 1])      # known below q^2
    b = _series(2, [1, 0, 0, 0, 0])  # known below q^7
    prod = a * b
    assert prod.valuation == 1
    assert prod.order == 4
    assert prod.coefficients() == [1, 1, 1]


@pytest.mark.parametrize("seed", range(5))
def test_multiplication_matches_sympy(seed):
    rng = random.Random(seed)
    n = 15
    a = [rng.randint(-9, 9) for _ in range(n)]
    b = [rng.randint(-9, 9) for _ in range(n)]
    expected = sympy.expand(sum(c * q**i for i, c in enumerate(a)) * sum(c * q**i for i, c in enumerate(b)))
    got = mul(_series(0, a), _series(0, b))
    assert got.coefficients() == [int(expected.coeff(q, i)) for i in range(n)]


@pytest.mark.parametrize("seed", range(5))
def test_inverse_round_trip(seed):
    rng = random.Random(100 + seed)
    coeffs = [rng.choice([1, -1])] + [rng.randint(-5, 5) for _ in range(19)]
    a = _series(-3, coeffs)
    assert a * a.invert() == LaurentSeries.one(20)


def test_monomial_mul_shifts_window():
    a = _series(0, [1, 2, 3])
    shifted = monomial_mul(a, -1, -4)
    assert shifted.valuation == -4
    assert shifted.order == -1
    assert shifted.coefficients() == [-1, -2, -3]
    assert a.shift(1, 2).coeff(4) == 3


def test_equality_ignores_padding_below_valuation():
    assert _series(-2, [0, 0, 1, 0]) == LaurentSeries.one(2)


def test_first_discrepancy_reports_both_sides():
    assert first_discrepancy(LaurentSeries.one(5), _series(0, [1, 0, 0, 2])) == (3, 0, 2)
    assert first_discrepancy(LaurentSeries.one(5), LaurentSeries.one(3)) is None


def test_sift_respects_negative_valuation():
    s = _series(-3, list(range(10)))
    assert s.sift(4, 1) == [(-3, 0), (1, 4), (5, 8)]
    assert _series(0, list(range(10))).sift(3, 1) == [(1, 1), (4, 4), (7, 7)]


def test_series_are_immutable():
    s = _series(0, [1, 2])
    with pytest.raises(ValueError):
        s.block[0] = 5


def _random_series(rng, unit=False):
    coeffs = [rng.randint(-20, 20) for _ in range(rng.randint(8, 16))]
    if unit:
        coeffs[0] = rng.choice([1, -1])
    return _series(rng.randint(-4, 4), coeffs)


@pytest.mark.parametrize("seed", range(5))
def test_ring_axioms(seed):
    rng = random.Random(1000 + seed)
    for _ in range(100):
        a, b, c = (_random_series(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == LaurentSeries.zero(a.order, a.valuation)


@pytest.mark.parametrize("seed", range(5))
def test_inverse_law_and_shift_involution(seed):
    rng = random.Random(2000 + seed)
    for _ in range(100):
        a = _random_series(rng, unit=True)
        assert a * a.invert() == LaurentSeries.one(len(a))
        assert a.invert().invert() == a
        sign, e = rng.choice([1, -1]), rng.randint(-6, 6)
        assert monomial_mul(monomial_mul(a, sign, e), sign, -e) == a
