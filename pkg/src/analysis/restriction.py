"""
Diagonal restrictions of bivariate integer series

P_v(1, w) collects the coefficients a_jk with j + n·k = v. The Hankel determinant
H_m(w) of these polynomials is an integer polynomial; it is identically zero for
large m exactly when every slice g_θ(z) = f(z, e^{iθ} z^n) satisfies Kronecker's
criterion at that size.
"""

import cmath
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from config import config
from utils.error_handler import (
    InconsistentCertificate, TruncationTooShort, ValidationError, logger, safe_execute,
)

from .series_core import BiSeries, IntPoly, Verdict, fraction_free_det


@dataclass(frozen=True)
class RestrictionFamily:
    """pv[v] = P_v(1, w) for v = 0..order"""

    source: BiSeries
    n: int
    pv: Tuple[IntPoly, ...]

    @property
    def order(self) -> int:
        return len(self.pv) - 1

    def require(self, v: int) -> None:
        if v > self.order:
            raise TruncationTooShort(v, self.order, "restriction family")


@dataclass(frozen=True)
class CriterionResult:
    m: int
    polynomial: IntPoly
    sup_bound: Optional[float]
    max_principle_zero: Optional[bool]

    @property
    def is_zero(self) -> bool:
        return self.polynomial.is_zero

    @property
    def witness(self) -> Optional[Tuple[int, int]]:
        """(k, c_k) for the lowest nonzero coefficient, None when H_m is identically zero"""
        for k, c in enumerate(self.polynomial.coeffs):
            if c != 0:
                return k, c
        return None

    def to_dict(self) -> Dict[str, Any]:
        witness = self.witness
        return {
            'm': self.m,
            'is_zero': self.is_zero,
            'degree': None if self.is_zero else self.polynomial.degree,
            'coeffs': self.polynomial.to_strings(),
            'witness': None if witness is None else [witness[0], str(witness[1])],
            'sup_bound': self.sup_bound,
            'max_principle_zero': self.max_principle_zero,
        }


@dataclass(frozen=True)
class CriterionReport:
    n: int
    m_range: Tuple[int, int]
    results: Tuple[CriterionResult, ...]
    verdict: Verdict
    first_zero_m: Optional[int]
    onset_m: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'm_range': list(self.m_range),
            'results': [r.to_dict() for r in self.results],
            'verdict': self.verdict.value,
            'first_zero_m': self.first_zero_m,
            'onset_m': self.onset_m,
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'm': [r.m for r in self.results],
            'is_zero': [r.is_zero for r in self.results],
            'degree': [None if r.is_zero else r.polynomial.degree for r in self.results],
            'sup_bound': [r.sup_bound for r in self.results],
        })


# ============= RESTRICTION POLYNOMIALS =============

def restriction_polys(f: BiSeries, n: int, V: int) -> RestrictionFamily:
    """
    Bygg P_v(1, w) for v = 0..V

    Args:
        f: Bivariat serie materialisert til total grad >= V
        n: Diagonaleksponent (>= 1)
        V: Høyeste v

    Raises:
        TruncationTooShort: hvis f er for kort
    """
    if n < 1:
        raise ValidationError("n må være >= 1", field="n", value=n)
    if V < 0:
        raise ValidationError("V må være >= 0", field="V", value=V)
    f.require(V)
    pv = tuple(
        IntPoly(tuple(f.coeff(v - n * k, k) for k in range(v // n + 1)))
        for v in range(V + 1)
    )
    return RestrictionFamily(f, n, pv)


def hankel_poly(fam: RestrictionFamily, m: int) -> IntPoly:
    """H_m(w) = det(P_{v1+v2}(1, w)), v1, v2 = 0..m, exactly in Z[w]"""
    if m < 0:
        raise ValidationError("m må være >= 0", field="m", value=m)
    fam.require(2 * m)
    rows = [[fam.pv[i + j] for j in range(m + 1)] for i in range(m + 1)]
    return fraction_free_det(rows, zero=IntPoly.zero())


# ============= MAXIMUM PRINCIPLE =============

def coeff_sup_bound(p: IntPoly, min_grid: Optional[int] = None) -> float:
    """
    Certified upper bound for max |p(w)| on |w| = 1

    Grid maximum over max(min_grid, 8·deg) equispaced points plus the Lipschitz
    correction (π/G)·Σ k|c_k|.
    """
    if p.is_zero:
        return 0.0
    base = config.sup_min_grid if min_grid is None else min_grid
    grid_size = max(base, 8 * p.degree)
    w = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    coeffs = np.array([float(c) for c in p.coeffs])
    grid_max = float(np.max(np.abs(np.polynomial.polynomial.polyval(w, coeffs))))
    lipschitz = float(sum(k * abs(c) for k, c in enumerate(p.coeffs)))
    return grid_max + np.pi / grid_size * lipschitz


def conclude_zero(p: IntPoly, sup_bound: float) -> bool:
    """
    Maksimumsprinsippet: sup < 1 på enhetssirkelen gir p = 0

    Returns:
        True hvis p er nullpolynomet eller sup_bound < 1; False betyr ingen konklusjon

    Raises:
        InconsistentCertificate: hvis sup_bound < 1 men p har en ikke-null koeffisient
    """
    if p.is_zero:
        return True
    if sup_bound < 1.0:
        witness = next((k, str(c)) for k, c in enumerate(p.coeffs) if c != 0)
        raise InconsistentCertificate(sup_bound, witness)
    return False


def max_principle_check(p: IntPoly) -> bool:
    return conclude_zero(p, coeff_sup_bound(p))


# ============= SLICES =============

def slice_coeffs(fam: RestrictionFamily, theta: float, V: int) -> np.ndarray:
    """Coefficients P_v(1, e^{iθ}) of g_θ, v = 0..V, in floating point"""
    fam.require(V)
    w = cmath.exp(1j * theta)
    return np.array([
        complex(np.polynomial.polynomial.polyval(w, [float(c) for c in fam.pv[v].coeffs] or [0.0]))
        for v in range(V + 1)
    ], dtype=complex)


def slice_coeffs_direct(f: BiSeries, n: int, theta: float, V: int) -> np.ndarray:
    """Same coefficients summed directly as Σ_{j+nk=v} a_jk e^{iθk}"""
    f.require(V)
    out = np.zeros(V + 1, dtype=complex)
    for v in range(V + 1):
        for k in range(v // n + 1):
            out[v] += f.coeff(v - n * k, k) * cmath.exp(1j * theta * k)
    return out


def numeric_hankel_det(coeffs: np.ndarray, m: int) -> complex:
    if len(coeffs) < 2 * m + 1:
        raise TruncationTooShort(2 * m, len(coeffs) - 1, "slice")
    matrix = np.array([[coeffs[i + j] for j in range(m + 1)] for i in range(m + 1)], dtype=complex)
    return complex(np.linalg.det(matrix))


# ============= CRITERION =============

def criterion_test(f: BiSeries, n: int, m_lo: int, m_hi: int,
                   evidence_run: Optional[int] = None) -> CriterionReport:
    """
    Kjør H_m for m i [m_lo, m_hi] og klassifiser

    A terminal run of at least evidence_run identically-zero H_m gives
    RationalEvidence; a nonzero last H_m gives NotRationalEvidence; anything
    else is Inconclusive.

    Raises:
        TruncationTooShort: hvis f ikke er materialisert til total grad 2·m_hi
    """
    if m_lo < 0 or m_lo > m_hi:
        raise ValidationError(f"Ugyldig m-område [{m_lo}, {m_hi}]", field="m_range", value=[m_lo, m_hi])
    run = config.evidence_run if evidence_run is None else evidence_run
    fam = restriction_polys(f, n, 2 * m_hi)

    results: List[CriterionResult] = []
    for m in range(m_lo, m_hi + 1):
        h = hankel_poly(fam, m)
        sup = safe_execute(lambda: coeff_sup_bound(h), None, context=f"sup-grense for H_{m}")
        concluded = None if sup is None else conclude_zero(h, sup)
        logger.debug(f"H_{m}: {'≡ 0' if h.is_zero else f'grad {h.degree}'}")
        results.append(CriterionResult(m, h, sup, concluded))

    zero_flags = [r.is_zero for r in results]
    first_zero = next((r.m for r in results if r.is_zero), None)
    trailing = 0
    for flag in reversed(zero_flags):
        if not flag:
            break
        trailing += 1
    onset = results[-trailing].m if trailing else None

    if trailing >= run:
        verdict = Verdict.RATIONAL_EVIDENCE
    elif trailing == 0:
        verdict = Verdict.NOT_RATIONAL_EVIDENCE
    else:
        verdict = Verdict.INCONCLUSIVE

    logger.info(f"Restriksjonskriterium ({f.label or 'serie'}, n={n}, m=[{m_lo}, {m_hi}]): {verdict.value}")
    return CriterionReport(n, (m_lo, m_hi), tuple(results), verdict, first_zero, onset)
