"""
Tests for the contour Γ(δ), Cauchy coefficients, symmetrization and the Hankel bound
"""

import math

import numpy as np
import pytest

from analysis.contour import (
    BoundInputs, cauchy_coeff, claim_chain, contour_length, contour_quadrature, estimate_sup_modulus,
    find_m0, hankel_bound, iota_capacity_check, make_gamma, min_modulus, sample_contour,
    symmetrization_check, vandermonde_bridge,
)
from utils.error_handler import BadAngles, BadRadii, NoCertificate, NoM0, ValidationError


def _geometric_half(z):
    return 1.0 / (1.0 - z / 2.0)


def _one(z):
    return np.ones_like(z)


def _identity(z):
    return z


# ============= GEOMETRY =============

def test_make_gamma_preconditions():
    gamma = make_gamma(math.pi / 2, -math.pi / 2, 1.2, 0.1)
    assert gamma.inner_radius == pytest.approx(0.9)
    with pytest.raises(BadAngles):
        make_gamma(0.0, 0.0, 1.2, 0.1)
    with pytest.raises(BadRadii):
        make_gamma(math.pi / 2, -math.pi / 2, 0.9, 0.1)
    with pytest.raises(BadRadii):
        make_gamma(math.pi / 2, -math.pi / 2, 1.2, 1.0)


def test_contour_length_and_modulus(gamma_wide):
    assert contour_length(gamma_wide) == pytest.approx(2.1 * math.pi + 0.6)
    assert contour_length(gamma_wide) == pytest.approx(7.1969, abs=1e-4)
    assert min_modulus(gamma_wide) == pytest.approx(0.9)
    assert min_modulus(make_gamma(math.pi / 2, -math.pi / 2, 1.5, 0.0)) == 1.0
    assert min_modulus(make_gamma(math.pi, -math.pi + 1e-6, 2.0, 0.5)) == 0.5


def test_pieces_close_up(gamma):
    pieces = gamma.pieces()
    ends = [piece.z(np.array([1.0]))[0] for piece in pieces]
    starts = [piece.z(np.array([0.0]))[0] for piece in pieces]
    for end, start in zip(ends, starts[1:] + starts[:1]):
        assert abs(end - start) < 1e-12
    assert sum(piece.length for piece in pieces) == pytest.approx(contour_length(gamma))


def test_sample_contour_count(gamma_wide):
    cloud = sample_contour(gamma_wide, 64)
    L = contour_length(gamma_wide)
    assert math.ceil(64 * L) <= len(cloud) <= math.ceil(64 * L) + 4


def test_sample_contour_refines(gamma_wide):
    coarse = sample_contour(gamma_wide, 64).points
    fine = sample_contour(gamma_wide, 128).points
    distance = max(np.min(np.abs(fine - z)) for z in coarse)
    assert distance <= max(piece.length for piece in gamma_wide.pieces()) / 64


def test_sample_contour_rejects_low_density(gamma):
    with pytest.raises(ValidationError):
        sample_contour(gamma, 0)


# ============= CAUCHY COEFFICIENTS =============

@pytest.mark.parametrize("v", range(7))
def test_cauchy_recovers_geometric_coefficients(gamma, v):
    assert abs(cauchy_coeff(_geometric_half, gamma, v) - 0.5 ** v) < 1e-8


def test_cauchy_residues_of_constant(gamma):
    assert abs(cauchy_coeff(_one, gamma, 0) - 1.0) < 1e-10
    assert abs(cauchy_coeff(_one, gamma, 3)) < 1e-10


def test_cauchy_deformation_invariance(gamma, gamma_wide):
    other = make_gamma(2.0, -1.0, 1.5, 0.2)
    for v in range(5):
        a = cauchy_coeff(_geometric_half, gamma, v)
        assert abs(a - cauchy_coeff(_geometric_half, gamma_wide, v)) < 2e-8
        assert abs(a - cauchy_coeff(_geometric_half, other, v)) < 2e-8


def test_cauchy_rejects_negative_index(gamma):
    with pytest.raises(ValidationError):
        cauchy_coeff(_one, gamma, -1)


def test_quadrature_order(gamma):
    def integrand(z):
        return _geometric_half(z) / z ** 4

    exact = 2j * math.pi * 0.125
    coarse = abs(contour_quadrature(integrand, gamma, 4, 2) - exact)
    fine = abs(contour_quadrature(integrand, gamma, 8, 2) - exact)
    assert coarse / fine >= 4


# ============= SYMMETRIZATION =============

@pytest.mark.parametrize("g", [_geometric_half, _identity])
def test_symmetrization_m1(gamma, g):
    report = symmetrization_check(g, gamma, 1)
    assert report.residual < 1e-6


def test_symmetrization_values(gamma):
    report = symmetrization_check(_identity, gamma, 1)
    # 2!·det[[0, 1], [1, 0]]
    assert report.direct == pytest.approx(-2.0, abs=1e-8)
    flat = symmetrization_check(_one, gamma, 1)
    assert abs(flat.direct) < 1e-8
    assert abs(flat.tensor) < 1e-6


def test_symmetrization_m2(gamma):
    assert symmetrization_check(_geometric_half, gamma, 2).residual < 1e-6


def test_symmetrization_rejects_large_m(gamma):
    with pytest.raises(ValidationError):
        symmetrization_check(_one, gamma, 3)


# ============= BOUND =============

def test_hankel_bound_values():
    L = 2.1 * math.pi + 0.6
    assert hankel_bound(BoundInputs(L, 2.0, 0.9, 0.8, 1)) == pytest.approx(2.07, abs=0.01)
    assert hankel_bound(BoundInputs(L, 2.0, 0.9, 0.8, 2)) == pytest.approx(0.72, abs=0.01)
    assert find_m0(L, 2.0, 0.9, 0.8, 10) == 2


@pytest.mark.parametrize("M, rho", [(1.0, 0.5), (2.0, 0.8), (5.0, 0.9), (20.0, 0.95)])
def test_find_m0_matches_linear_scan(M, rho):
    L, eta = 7.0, 0.9
    scan = next(m for m in range(1, 200) if hankel_bound(BoundInputs(L, M, eta, rho, m)) < 1)
    assert find_m0(L, M, eta, rho, 200) == scan


def test_find_m0_raises_when_out_of_range():
    with pytest.raises(NoM0):
        find_m0(7.1969, 2.0, 0.9, 0.8, 1)


@pytest.mark.parametrize("kwargs", [
    dict(L=0.0, M=1.0, eta=0.9, rho=0.5, m=1),
    dict(L=1.0, M=-1.0, eta=0.9, rho=0.5, m=1),
    dict(L=1.0, M=1.0, eta=0.0, rho=0.5, m=1),
    dict(L=1.0, M=1.0, eta=0.9, rho=1.0, m=1),
    dict(L=1.0, M=1.0, eta=0.9, rho=0.5, m=0),
])
def test_bound_inputs_are_validated(kwargs):
    with pytest.raises(ValidationError):
        BoundInputs(**kwargs)


def test_estimate_sup_modulus(gamma):
    def family(z, theta):
        return np.exp(1j * theta) * z

    assert estimate_sup_modulus(family, gamma, [0.0, 1.0]) == pytest.approx(1.2)


# ============= CAPACITY OF ι(Γ) =============

def test_iota_capacity_certificate(gamma):
    certificate = iota_capacity_check(gamma, 40)
    assert certificate.best_bound < 0.98
    assert certificate.best_family in {"fekete_d_n", "fekete_node_tau", "refined_tau"}
    assert certificate.to_dict()["target"] == pytest.approx(0.98)


def test_iota_capacity_near_unit_circle_fails():
    gamma = make_gamma(math.pi / 2, -math.pi / 2, 1.01, 0.0)
    with pytest.raises(NoCertificate):
        iota_capacity_check(gamma, 10)


@pytest.mark.parametrize("m", [1, 2])
def test_vandermonde_bridge(gamma, m):
    bridge = vandermonde_bridge(gamma, m, samples=300)
    # both sides maximize the same product over the same samples
    assert bridge["gamma_side"] == pytest.approx(bridge["capacity_side"], rel=1e-2)
    assert bridge["random_max"] <= bridge["gamma_side"] * (1 + 1e-9)
    assert bridge["random_below_fekete"]


def test_vandermonde_bridge_follows_the_inner_radius(gamma):
    deep = make_gamma(math.pi / 2, -math.pi / 2, 1.2, 0.3)
    shallow_side = vandermonde_bridge(gamma, 1, samples=10)["gamma_side"]
    deep_side = vandermonde_bridge(deep, 1, samples=10)["gamma_side"]
    # inner arc of radius 1 − δ inverts to radius 1/(1 − δ)
    assert deep_side > shallow_side * 1.2


def test_claim_chain(gamma):
    chain = claim_chain(gamma, 2.0, 20, n_max=40)
    assert chain["rho"] < 1
    assert 1 <= chain["m0"] <= 20
    assert chain["bounds"][chain["m0"] - 1]["rho_bound"] < 1
