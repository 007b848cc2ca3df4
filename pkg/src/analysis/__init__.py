"""
Analysis modules: exact series algebra, Hankel and restriction criteria,
capacity estimation, contour quadrature and D-finite machinery
"""

from .series_core import (
    IntPoly, IntSeries1D, BiSeries, RationalFn, Verdict,
    expand_rational, lacunary_series, biseries_from_product, fraction_free_det, poly_gcd,
    LACUNARY_RULES, BISERIES_FIXTURES,
)
from .hankel import HankelReport, hankel_det, kronecker_test, reconstruct_rational, default_window
from .restriction import (
    RestrictionFamily, CriterionReport, restriction_polys, hankel_poly,
    coeff_sup_bound, conclude_zero, slice_coeffs, criterion_test,
)
from .capacity import (
    PointCloud, CapacityEstimate, fekete_points, transfinite_diameter,
    chebyshev_upper, chebyshev_upper_refined, d_tau_consistency,
)
from .contour import (
    GammaContour, BoundInputs, make_gamma, contour_length, min_modulus, sample_contour,
    iota_capacity_check, cauchy_coeff, symmetrization_check, hankel_bound, find_m0,
)
from .dfinite import (
    DFiniteSystem, ODESystem, Recurrence, recurrence_from_ode, generate_coeffs,
    ode_continue, companion_system, bell_chen_pipeline,
)

__all__ = [
    # Series core
    'IntPoly', 'IntSeries1D', 'BiSeries', 'RationalFn', 'Verdict',
    'expand_rational', 'lacunary_series', 'biseries_from_product', 'fraction_free_det', 'poly_gcd',
    'LACUNARY_RULES', 'BISERIES_FIXTURES',

    # Hankel
    'HankelReport', 'hankel_det', 'kronecker_test', 'reconstruct_rational', 'default_window',

    # Restriction
    'RestrictionFamily', 'CriterionReport', 'restriction_polys', 'hankel_poly',
    'coeff_sup_bound', 'conclude_zero', 'slice_coeffs', 'criterion_test',

    # Capacity
    'PointCloud', 'CapacityEstimate', 'fekete_points', 'transfinite_diameter',
    'chebyshev_upper', 'chebyshev_upper_refined', 'd_tau_consistency',

    # Contour
    'GammaContour', 'BoundInputs', 'make_gamma', 'contour_length', 'min_modulus', 'sample_contour',
    'iota_capacity_check', 'cauchy_coeff', 'symmetrization_check', 'hankel_bound', 'find_m0',

    # D-finite
    'DFiniteSystem', 'ODESystem', 'Recurrence', 'recurrence_from_ode', 'generate_coeffs',
    'ode_continue', 'companion_system', 'bell_chen_pipeline',
]
