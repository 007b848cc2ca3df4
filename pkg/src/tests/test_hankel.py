"""
Tests for Hankel determinants, the Kronecker window test and rational reconstruction
"""

import math
import random

import pytest
import sympy

from analysis.hankel import (
    classify_window, default_window, hankel_det, hankel_matrix, kronecker_test,
    reconstruct_rational, try_reconstruct,
)
from analysis.series_core import (
    IntPoly, IntSeries1D, RationalFn, Verdict, expand_rational, lacunary_series, squares_rule,
)
from utils.error_handler import NoRationalFit, TruncationTooShort, ValidationError


def _catalan(N):
    return IntSeries1D(tuple(math.comb(2 * n, n) // (n + 1) for n in range(N + 1)), "catalan")


def _central_binomials(N):
    return IntSeries1D(tuple(math.comb(2 * n, n) for n in range(N + 1)), "central")


# ============= DETERMINANTS =============

def test_hankel_det_examples(geometric, fibonacci):
    assert hankel_det(geometric, 1) == 0
    assert hankel_det(fibonacci, 1) == 1
    assert hankel_det(_central_binomials(4), 2) == 4


@pytest.mark.parametrize("n", [2, 4, 6])
def test_hankel_det_matches_sympy(n):
    series = _central_binomials(2 * n)
    assert hankel_det(series, n) == sympy.Matrix(hankel_matrix(series, n)).det()


def test_catalan_hankel_determinants_are_one():
    catalan = _catalan(20)
    assert [hankel_det(catalan, n) for n in range(10)] == [1] * 10


def test_hankel_det_needs_index_2n(geometric):
    with pytest.raises(TruncationTooShort):
        hankel_det(geometric.truncate(9), 5)


# ============= WINDOW TEST =============

def test_kronecker_geometric_is_rational_evidence(geometric):
    report = kronecker_test(geometric, 1, 5)
    assert report.verdict == Verdict.RATIONAL_EVIDENCE
    assert report.dets == (0, 0, 0, 0, 0)
    assert report.witness_n is None


def test_kronecker_fibonacci_window(fibonacci):
    assert kronecker_test(fibonacci, 2, 6).verdict == Verdict.RATIONAL_EVIDENCE


def test_kronecker_squares_gives_witness():
    squares = lacunary_series(squares_rule, 12, "squares")
    report = kronecker_test(squares, 1, 6)
    assert report.verdict == Verdict.NOT_RATIONAL_WITNESS
    # the 7x7 matrix has exactly one nonvanishing permutation
    assert abs(report.dets[-1]) == 1
    assert report.witness_n == 6


def test_kronecker_rejects_bad_window(geometric):
    with pytest.raises(ValidationError):
        kronecker_test(geometric, 4, 2)
    with pytest.raises(TruncationTooShort):
        kronecker_test(geometric, 1, 16)


@pytest.mark.parametrize("dets, expected, witness", [
    ([0, 0, 0], Verdict.RATIONAL_EVIDENCE, None),
    ([5, 0, 0, 0], Verdict.INCONCLUSIVE, None),
    ([5, 0, 0], Verdict.NOT_RATIONAL_WITNESS, 3),
    ([0, 2, 0, 7], Verdict.NOT_RATIONAL_WITNESS, 6),
])
def test_classify_window(dets, expected, witness):
    assert classify_window(dets, 3, 3) == (expected, witness)


def test_default_window():
    assert default_window(2) == (1, 8)
    assert default_window(0) == (1, 4)
    with pytest.raises(ValidationError):
        default_window(-1)


def test_report_frame(geometric):
    frame = kronecker_test(geometric, 1, 3).to_frame()
    assert list(frame.columns) == ["n", "A_n", "is_zero"]
    assert frame["is_zero"].all()


# ============= RECONSTRUCTION =============

@pytest.mark.parametrize("coeffs, numerator, denominator, d", [
    ((1,) * 8, (1,), (1, -1), 1),
    ((1, 1, 2, 3, 5, 8, 13, 21), (1,), (1, -1, -1), 2),
    ((1, 2, 3, 4, 5, 6, 7, 8), (1,), (1, -2, 1), 2),
])
def test_reconstruct_examples(coeffs, numerator, denominator, d):
    fit = reconstruct_rational(IntSeries1D(coeffs), d)
    assert fit.numerator == IntPoly(numerator)
    assert fit.denominator == IntPoly(denominator)


def test_reconstruct_degree_too_small(fibonacci):
    with pytest.raises(NoRationalFit):
        reconstruct_rational(fibonacci, 1)


def test_reconstruct_catalan_has_no_fit():
    with pytest.raises(NoRationalFit):
        reconstruct_rational(_catalan(20), 3)


def test_try_reconstruct_finds_smallest_degree(fibonacci):
    d, fit = try_reconstruct(fibonacci, 5)
    assert d == 2
    assert fit.denominator == IntPoly((1, -1, -1))
    assert try_reconstruct(_catalan(11), 5) is None


def _random_rational(rng):
    p = IntPoly(tuple(rng.randint(-9, 9) for _ in range(rng.randint(1, 6))))
    if p.is_zero:
        p = IntPoly((1,))
    tail = [rng.randint(-9, 9) for _ in range(rng.randint(0, 5))]
    q = IntPoly((rng.choice([1, -1]), *tail))
    return p, q


@pytest.mark.parametrize("seed", range(20))
def test_random_rational_round_trip(seed):
    rng = random.Random(seed)
    p, q = _random_rational(rng)
    r = RationalFn(p, q)
    deg_p = max(p.degree, 0)
    deg_q = max(q.degree, 0)
    series = expand_rational(r, 2 * (deg_p + deg_q + 6))

    for n in range(deg_p + deg_q + 1, deg_p + deg_q + 7):
        assert hankel_det(series, n) == 0

    d = max(r.numerator.degree, r.denominator.degree, 0)
    fit = reconstruct_rational(series, d)
    assert fit == r


@pytest.mark.parametrize("seed", range(10))
def test_round_trip_with_loose_degree_bound(seed):
    rng = random.Random(100 + seed)
    p, q = _random_rational(rng)
    r = RationalFn(p, q)
    d = max(r.numerator.degree, r.denominator.degree, 0) + rng.randint(1, 3)
    series = expand_rational(r, 2 * d + 6)
    assert reconstruct_rational(series, d) == r


def test_fibonacci_with_loose_degree_bound(fibonacci):
    fit = reconstruct_rational(fibonacci, 4)
    assert fit.numerator == IntPoly((1,))
    assert fit.denominator == IntPoly((1, -1, -1))
