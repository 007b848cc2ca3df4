"""
Commands on point clouds and the contour Γ(δ): capacity, iota-check,
contour-bound and symcheck
"""

from typing import Any, Dict

import pandas as pd

from analysis.capacity import transfinite_diameter
from analysis.contour import (
    BoundInputs, cauchy_coeff, claim_chain, contour_length, find_m0, hankel_bound,
    iota_capacity_check, min_modulus, symmetrization_check,
)
from utils.error_handler import UsageError, handle_analysis_error, logger, validate_required_fields
from utils.report_helpers import CommandResult
from utils.series_io import build_cloud, build_contour, build_evaluable, load_spec

from .run_config import RunConfig


def _contour_spec(spec: Dict[str, Any]) -> Dict[str, Any]:
    """Contour fields either nested under "contour" or at the top level"""
    if not isinstance(spec, dict):
        raise UsageError("Spec må være et JSON-objekt", field="input")
    return spec.get("contour", spec)


@handle_analysis_error
def run_capacity_command(run: RunConfig) -> CommandResult:
    """d_n og τ-grenser for n = 2..--n-max"""
    cloud = build_cloud(load_spec(run.input), run.density)
    estimate = transfinite_diameter(cloud, run.n_max, run.seed)
    return CommandResult(
        {'cloud': {'label': cloud.label, 'size': len(cloud)}, 'capacity': estimate.to_dict()},
        estimate.to_frame(),
    )


@handle_analysis_error
def run_iota_check_command(run: RunConfig) -> CommandResult:
    """Sertifikat for d(ι(Γ)) < 1 − margin"""
    gamma = build_contour(_contour_spec(load_spec(run.input)))
    certificate = iota_capacity_check(gamma, run.n_max, run.seed, run.margin, run.density)
    return CommandResult({'certificate': certificate.to_dict()}, certificate.to_frame())


@handle_analysis_error
def run_contour_bound_command(run: RunConfig) -> CommandResult:
    """
    Hankel-grensen for m = 1..--m-hi og minste m0 med grense < 1

    The spec carries the contour and M; without "rho" the capacity certificate
    supplies it.

    Raises:
        NoM0: hvis ingen m <= --m-hi gir grense < 1
        NoCertificate: hvis ρ mangler og kapasitetssertifikatet feiler
    """
    spec = load_spec(run.input)
    validate_required_fields(spec, ["M"])
    gamma = build_contour(_contour_spec(spec))
    M = float(spec["M"])
    if spec.get("rho") is None:
        chain = claim_chain(gamma, M, run.m_hi, run.n_max, run.seed, run.margin, run.density)
        return CommandResult(chain, pd.DataFrame(chain['bounds']))

    L = float(spec.get("L", contour_length(gamma)))
    eta = float(spec.get("eta", min_modulus(gamma)))
    rho = float(spec["rho"])
    rows = [{'m': m, 'bound': hankel_bound(BoundInputs(L, M, eta, rho, m))}
            for m in range(1, run.m_hi + 1)]
    m0 = find_m0(L, M, eta, rho, run.m_hi)
    logger.info(f"m0 = {m0} (L={L:.4f}, M={M}, eta={eta}, rho={rho})")
    return CommandResult(
        {'contour': gamma.to_dict(), 'L': L, 'M': M, 'eta': eta, 'rho': rho, 'm0': m0, 'bounds': rows},
        pd.DataFrame(rows),
    )


@handle_analysis_error
def run_symcheck_command(run: RunConfig) -> CommandResult:
    """Determinant of Cauchy coefficients against the symmetrized multiple integral"""
    spec = load_spec(run.input)
    validate_required_fields(spec, ["contour", "function"])
    gamma = build_contour(spec["contour"])
    g = build_evaluable(spec["function"])
    m = int(spec.get("m", 1))
    coeffs = [cauchy_coeff(g, gamma, v, tol=run.tol) for v in range(2 * m + 1)]
    report = symmetrization_check(g, gamma, m)
    frame = pd.DataFrame({'v': list(range(len(coeffs))),
                          'real': [c.real for c in coeffs],
                          'imag': [c.imag for c in coeffs]})
    return CommandResult(
        {'contour': gamma.to_dict(), 'm': m, 'cauchy_coeffs': coeffs, 'symmetrization': report.to_dict()},
        frame,
    )
