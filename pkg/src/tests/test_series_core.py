"""
Tests for exact polynomials, series and rational functions
"""

import math
import random
from fractions import Fraction

import pytest
import sympy

from analysis.series_core import (
    BISERIES_FIXTURES, BiSeries, IntPoly, IntSeries1D, RationalFn, all_ones, binomial_table,
    biseries_from_product, expand_rational, factorial_rule, fraction_free_det, lacunary_product,
    lacunary_series, poly_gcd, squares_rule, empty_rule,
)
from utils.error_handler import (
    NonUnitConstantTerm, NotDivisible, TruncationTooShort, ValidationError, ZeroDenominator,
)

X = sympy.Symbol("x")


def _sympy_poly(p: IntPoly) -> sympy.Poly:
    return sympy.Poly(list(reversed(p.coeffs)) or [0], X)


# ============= IntPoly =============

def test_intpoly_strips_trailing_zeros():
    p = IntPoly((1, 2, 0, 0))
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert IntPoly((0, 0)).is_zero
    assert IntPoly.zero().degree == float("-inf")


def test_intpoly_accepts_decimal_strings():
    big = "123456789012345678901234567890"
    p = IntPoly((big, "-1"))
    assert p.coeffs == (int(big), -1)


def test_intpoly_rejects_floats():
    with pytest.raises(ValidationError):
        IntPoly((1.5,))


def test_intpoly_arithmetic():
    p = IntPoly((1, 1))
    q = IntPoly((1, -1))
    assert p * q == IntPoly((1, 0, -1))
    assert p + q == IntPoly((2,))
    assert p - p == IntPoly.zero()
    assert p ** 3 == IntPoly((1, 3, 3, 1))
    assert 2 * p == IntPoly((2, 2))
    assert p(2) == 3
    assert IntPoly((0, 0, 3)).derivative() == IntPoly((0, 6))


RING_SAMPLES = [
    IntPoly.zero(),
    IntPoly.one(),
    IntPoly((1, -1)),
    IntPoly((0, 3, 0, -2)),
    IntPoly((-7, 4, 1)),
    IntPoly((10 ** 30, -1)),
]


@pytest.mark.parametrize("p", RING_SAMPLES)
@pytest.mark.parametrize("q", RING_SAMPLES)
def test_intpoly_ring_laws(p, q):
    assert p + q == q + p
    assert p * q == q * p
    for r in RING_SAMPLES:
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
    assert p + IntPoly.zero() == p
    assert p * IntPoly.one() == p
    assert p - p == IntPoly.zero()


def test_exact_div():
    p = IntPoly((1, 0, -1))
    assert p.exact_div(IntPoly((1, 1))) == IntPoly((1, -1))
    with pytest.raises(NotDivisible):
        p.exact_div(IntPoly((2, 1)))
    with pytest.raises(NotDivisible):
        p.exact_div(IntPoly.zero())


def test_primitive_part_has_positive_lead():
    p = IntPoly((4, -6, -2))
    assert p.content() == 2
    assert p.primitive() == IntPoly((-2, 3, 1))


def test_format():
    assert IntPoly((1, -2, 1)).format("z") == "1 - 2*z + z^2"
    assert IntPoly((0, -1)).format("w") == "-w"
    assert str(IntPoly.zero()) == "0"


@pytest.mark.parametrize("seed", range(10))
def test_poly_gcd_matches_sympy(seed):
    rng = random.Random(seed)
    common = IntPoly(tuple(rng.randint(-5, 5) for _ in range(3))) + IntPoly.monomial(3)
    a = common * IntPoly(tuple(rng.randint(-5, 5) for _ in range(3)))
    b = common * IntPoly(tuple(rng.randint(-5, 5) for _ in range(2)))
    if a.is_zero or b.is_zero:
        return
    ours = poly_gcd(a, b)
    theirs = sympy.gcd(_sympy_poly(a), _sympy_poly(b)).primitive()[1]
    if theirs.LC() < 0:
        theirs = -theirs
    assert _sympy_poly(ours) == theirs


# ============= DETERMINANT =============

@pytest.mark.parametrize("size", [1, 2, 3, 5, 7])
def test_fraction_free_det_matches_sympy(size):
    rng = random.Random(size)
    rows = [[rng.randint(-9, 9) for _ in range(size)] for _ in range(size)]
    assert fraction_free_det(rows) == sympy.Matrix(rows).det()


def test_fraction_free_det_needs_row_swap():
    assert fraction_free_det([[0, 1], [1, 0]]) == -1
    assert fraction_free_det([[0, 0], [1, 2]]) == 0
    assert fraction_free_det([]) == 1


def test_fraction_free_det_over_polynomials():
    x = IntPoly.monomial(1)
    one = IntPoly.one()
    det = fraction_free_det([[one, x], [x, one]], zero=IntPoly.zero())
    assert det == IntPoly((1, 0, -1))


def test_fraction_free_det_rejects_non_square():
    with pytest.raises(ValidationError):
        fraction_free_det([[1, 2]])


# ============= SERIES =============

def test_series_truncation_is_hard(geometric):
    assert geometric.coeff(30) == 1
    with pytest.raises(TruncationTooShort):
        geometric.coeff(31)
    assert geometric.truncate(5).coeffs == (1,) * 6


def test_biseries_shape_is_checked():
    with pytest.raises(ValidationError):
        BiSeries(((1, 1), (1, 1)))
    table = BiSeries(((1, 2), (3,)))
    assert table.coeff(1, 0) == 3
    with pytest.raises(TruncationTooShort):
        table.coeff(1, 1)


def test_lacunary_counts_witnesses():
    squares = lacunary_series(squares_rule, 16)
    assert [n for n, c in enumerate(squares.coeffs) if c] == [0, 1, 4, 9, 16]
    factorials = lacunary_series(factorial_rule, 10)
    # 0! = 1! = 1
    assert factorials.coeffs[1] == 2
    assert factorials.coeffs[2] == 1
    assert factorials.coeffs[6] == 1
    assert sum(lacunary_series(empty_rule, 5).coeffs) == 0


def test_fixtures():
    assert all_ones(4).coeff(2, 2) == 1
    assert binomial_table(6).coeff(2, 3) == math.comb(5, 2)
    assert lacunary_product(10).coeff(3, 1) == 2
    assert set(BISERIES_FIXTURES) == {"all_ones", "binomial", "lacunary_product", "zero"}


def test_product_table(fibonacci, geometric):
    table = biseries_from_product(fibonacci, geometric, 10)
    assert table.coeff(4, 3) == fibonacci.coeffs[4]
    with pytest.raises(TruncationTooShort):
        biseries_from_product(fibonacci, geometric.truncate(5), 10)


def test_product_table_has_rank_one(fibonacci, geometric):
    table = biseries_from_product(fibonacci, geometric.truncate(8), 8)
    cells = [(j, k) for j in range(9) for k in range(9 - j)]
    for j, k in cells:
        for j2, k2 in cells:
            if j + k2 <= 8 and j2 + k <= 8:
                assert table.coeff(j, k) * table.coeff(j2, k2) == table.coeff(j, k2) * table.coeff(j2, k)


# ============= RATIONAL FUNCTIONS =============

def test_rational_canonical_form():
    r = RationalFn(IntPoly((2, -2)), IntPoly((2, -4, 2)))
    assert r.numerator == IntPoly((1,))
    assert r.denominator == IntPoly((1, -1))


def test_rational_sign_convention():
    r = RationalFn(IntPoly((1,)), IntPoly((-1, 1)))
    assert r.denominator[0] == 1
    assert r.numerator == IntPoly((-1,))


def test_rational_rejects_bad_denominators():
    with pytest.raises(ZeroDenominator):
        RationalFn(IntPoly((1,)), IntPoly.zero())
    with pytest.raises(NonUnitConstantTerm):
        RationalFn(IntPoly((1,)), IntPoly((0, 1)))


def test_rational_cancels_to_constant_denominator():
    r = RationalFn(IntPoly((0, 1)), IntPoly((0, 1)))
    assert r.numerator == IntPoly.one()
    assert r.denominator == IntPoly.one()


def test_expand_rational(fibonacci):
    assert fibonacci.coeffs[:10] == (1, 1, 2, 3, 5, 8, 13, 21, 34, 55)
    squared = expand_rational(RationalFn(IntPoly((1,)), IntPoly((1, -2, 1))), 6)
    assert squared.coeffs == (1, 2, 3, 4, 5, 6, 7)


@pytest.mark.parametrize("numerator, denominator", [
    ((1,), (1, -1, -1)),
    ((2, -3, 5), (1, 4)),
    ((0, 1), (-1, 2, 0, 7)),
    ((1, 1, 1, 1, 1), (1,)),
])
def test_expansion_solves_the_denominator_identity(numerator, denominator):
    r = RationalFn(IntPoly(numerator), IntPoly(denominator))
    N = 25
    a = IntPoly(expand_rational(r, N).coeffs)
    # Q·A − P vanishes through z^N
    assert (r.denominator * a - r.numerator).truncate(N + 1).is_zero


def test_expand_rational_requires_unit_constant_term():
    with pytest.raises(NonUnitConstantTerm):
        expand_rational(RationalFn(IntPoly((1,)), IntPoly((2, -1))), 5)


def test_expand_rational_with_minus_one_constant_term():
    r = RationalFn(IntPoly((-1,)), IntPoly((1, 1)))
    assert expand_rational(r, 4).coeffs == (-1, 1, -1, 1, -1)


def test_rational_evaluates_with_fractions():
    r = RationalFn(IntPoly((1,)), IntPoly((1, -1)))
    assert r(Fraction(1, 2)) == 2


def test_int_series_requires_coefficients():
    with pytest.raises(ValidationError):
        IntSeries1D(())
