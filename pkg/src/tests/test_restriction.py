"""
Tests for restriction polynomials, H_m(w) and the maximum-principle certificate
"""

import math

import numpy as np
import pytest

from analysis.restriction import (
    coeff_sup_bound, conclude_zero, criterion_test, hankel_poly, max_principle_check,
    numeric_hankel_det, restriction_polys, slice_coeffs, slice_coeffs_direct,
)
from analysis.series_core import (
    BiSeries, IntPoly, Verdict, all_ones, binomial_table, lacunary_product, zero_biseries,
    RationalFn, rational_product,
)
from utils.error_handler import InconsistentCertificate, TruncationTooShort, ValidationError


def test_restriction_polys_all_ones():
    fam = restriction_polys(all_ones(2), 1, 2)
    assert fam.pv == (IntPoly((1,)), IntPoly((1, 1)), IntPoly((1, 1, 1)))


def test_restriction_polys_exponent_two():
    fam = restriction_polys(all_ones(3), 2, 3)
    assert fam.pv == (IntPoly((1,)), IntPoly((1,)), IntPoly((1, 1)), IntPoly((1, 1)))


def test_restriction_polys_lacunary_product():
    fam = restriction_polys(lacunary_product(3), 1, 3)
    assert fam.pv[3] == IntPoly((0, 2, 1))


def test_restriction_polys_preconditions():
    with pytest.raises(ValidationError):
        restriction_polys(all_ones(4), 0, 2)
    with pytest.raises(TruncationTooShort):
        restriction_polys(all_ones(4), 1, 5)


# ============= H_m =============

def test_hankel_poly_all_ones():
    fam = restriction_polys(all_ones(8), 1, 8)
    assert hankel_poly(fam, 1) == IntPoly((0, -1))
    for m in (2, 3, 4):
        assert hankel_poly(fam, m).is_zero


def test_hankel_poly_single_coefficient():
    table = BiSeries.from_function(lambda j, k: 1 if j == k == 0 else 0, 4)
    assert hankel_poly(restriction_polys(table, 1, 2), 1).is_zero


def test_hankel_poly_binomial_vanishes_from_one():
    fam = restriction_polys(binomial_table(8), 1, 8)
    assert hankel_poly(fam, 0) == IntPoly((1,))
    assert all(hankel_poly(fam, m).is_zero for m in range(1, 5))


@pytest.mark.parametrize("theta", [0.0, 0.7, math.pi, 4.0])
def test_hankel_poly_matches_numeric_slice(theta):
    table = lacunary_product(12)
    fam = restriction_polys(table, 1, 12)
    coeffs = slice_coeffs(fam, theta, 12)
    for m in range(1, 7):
        exact = hankel_poly(fam, m)(complex(np.exp(1j * theta)))
        assert np.isclose(numeric_hankel_det(coeffs, m), exact, rtol=1e-8, atol=1e-6)


# ============= SUP BOUND =============

def test_conclude_zero_on_zero_polynomial():
    assert conclude_zero(IntPoly.zero(), 0.0)
    assert conclude_zero(IntPoly.zero(), 5.0)


def test_conclude_zero_for_monomial():
    p = IntPoly((0, -1))
    bound = coeff_sup_bound(p)
    assert bound >= 1.0
    assert not conclude_zero(p, bound)


def test_sup_bound_is_certified():
    p = IntPoly((-3, 0, 1))
    bound = coeff_sup_bound(p)
    assert 4.0 <= bound <= 4.0 + math.pi / 64 * 2 + 1e-12
    assert not max_principle_check(p)


def test_inconsistent_certificate_is_raised():
    with pytest.raises(InconsistentCertificate):
        conclude_zero(IntPoly((0, 1)), 0.5)


# ============= SLICES =============

@pytest.mark.parametrize("theta, expected", [
    (0.0, [1, 2, 3]),
    (math.pi, [1, 0, 1]),
])
def test_slice_coeffs_all_ones(theta, expected):
    fam = restriction_polys(all_ones(2), 1, 2)
    assert np.allclose(slice_coeffs(fam, theta, 2), expected)


def test_slice_coeffs_zero_series():
    fam = restriction_polys(zero_biseries(4), 1, 2)
    assert np.allclose(slice_coeffs(fam, 1.3, 2), [0, 0, 0])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_slice_consistency(n):
    table = binomial_table(12)
    fam = restriction_polys(table, n, 12)
    for theta in np.linspace(0, 2 * np.pi, 7):
        assert np.allclose(slice_coeffs(fam, theta, 12), slice_coeffs_direct(table, n, theta, 12))


# ============= CRITERION =============

def test_criterion_all_ones():
    report = criterion_test(all_ones(8), 1, 1, 4)
    assert report.verdict == Verdict.RATIONAL_EVIDENCE
    assert [r.is_zero for r in report.results] == [False, True, True, True]
    assert report.results[0].polynomial == IntPoly((0, -1))
    assert report.results[0].witness == (1, -1)
    assert report.first_zero_m == 2
    assert report.onset_m == 2
    assert all(r.max_principle_zero for r in report.results[1:])


def test_criterion_lacunary_product_is_not_rational():
    report = criterion_test(lacunary_product(40), 1, 1, 6)
    assert report.verdict == Verdict.NOT_RATIONAL_EVIDENCE
    assert not report.results[-1].is_zero


def test_criterion_zero_series():
    report = criterion_test(zero_biseries(6), 1, 1, 3)
    assert report.verdict == Verdict.RATIONAL_EVIDENCE
    assert report.first_zero_m == 1


def test_criterion_short_zero_run_is_inconclusive():
    report = criterion_test(all_ones(8), 1, 1, 2)
    assert report.verdict == Verdict.INCONCLUSIVE


def test_criterion_needs_total_degree_2m():
    with pytest.raises(TruncationTooShort):
        criterion_test(all_ones(7), 1, 1, 4)


def test_criterion_report_serializes_big_integers():
    report = criterion_test(binomial_table(10), 2, 1, 3)
    data = report.to_dict()
    assert data["verdict"] in {v.value for v in Verdict}
    for result in data["results"]:
        assert all(isinstance(c, str) for c in result["coeffs"])


@pytest.mark.parametrize("left, right", [
    (((1, 1), (1, -1)), ((1,), (1, -1, -1))),
    (((1,), (1, -2)), ((2, -1), (1, 0, 1))),
    (((1, 0, 3), (1, 1)), ((1,), (1, -3))),
])
def test_criterion_on_rational_products(left, right):
    p, q = (IntPoly(c) for c in left)
    r, s = (IntPoly(c) for c in right)
    table = rational_product(RationalFn(p, q), RationalFn(r, s), 16)
    report = criterion_test(table, 1, 1, 8)
    assert report.verdict == Verdict.RATIONAL_EVIDENCE
    assert report.onset_m <= q.degree + s.degree + p.degree + r.degree + 1
    assert all(result.is_zero for result in report.results if result.m >= report.onset_m)
