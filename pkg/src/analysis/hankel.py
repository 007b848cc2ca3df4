"""
Kronecker rationality test and exact rational reconstruction for univariate integer series
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from config import config
from utils.error_handler import (
    AppError, NoRationalFit, NonUnitConstantTerm, ValidationError, logger,
)

from .series_core import (
    IntPoly, IntSeries1D, RationalFn, Verdict, expand_rational, fraction_free_det,
)


@dataclass(frozen=True)
class HankelReport:
    """Hankel determinants A_n over a window and the verdict they support"""

    window: Tuple[int, int]
    dets: Tuple[int, ...]
    verdict: Verdict
    witness_n: Optional[int] = None

    @property
    def n_values(self) -> List[int]:
        return list(range(self.window[0], self.window[1] + 1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'window': list(self.window),
            'dets': [str(d) for d in self.dets],
            'verdict': self.verdict.value,
            'witness_n': self.witness_n,
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'n': self.n_values,
            'A_n': [str(d) for d in self.dets],
            'is_zero': [d == 0 for d in self.dets],
        })


def hankel_matrix(a: IntSeries1D, n: int) -> List[List[int]]:
    a.require(2 * n)
    return [[a.coeffs[i + j] for j in range(n + 1)] for i in range(n + 1)]


def hankel_det(a: IntSeries1D, n: int) -> int:
    """
    Eksakt determinant A_n = det(a_{i+j}), i, j = 0..n

    Raises:
        TruncationTooShort: hvis serien ikke er materialisert til indeks 2n
    """
    if n < 0:
        raise ValidationError("n må være >= 0", field="n", value=n)
    return fraction_free_det(hankel_matrix(a, n))


def default_window(degree_hint: Optional[int] = None) -> Tuple[int, int]:
    """Vindu [1, 2·hint + 4] når en gradhint finnes, ellers [1, konfigurert n_hi]"""
    if degree_hint is None:
        return 1, config.kronecker_n_hi
    if degree_hint < 0:
        raise ValidationError("Gradhint må være >= 0", field="degree", value=degree_hint)
    return 1, 2 * degree_hint + 4


def classify_window(dets: Sequence[int], n_lo: int, evidence_run: int) -> Tuple[Verdict, Optional[int]]:
    """
    Verdict for a window of determinants

    All zero gives RationalEvidence. A nonzero value followed by at least
    evidence_run trailing zeros is Inconclusive; otherwise the largest nonzero
    index is a witness against rationality.
    """
    nonzero = [i for i, d in enumerate(dets) if d != 0]
    if not nonzero:
        return Verdict.RATIONAL_EVIDENCE, None
    last = nonzero[-1]
    trailing_zeros = len(dets) - 1 - last
    if trailing_zeros >= evidence_run:
        return Verdict.INCONCLUSIVE, None
    return Verdict.NOT_RATIONAL_WITNESS, n_lo + last


def kronecker_test(a: IntSeries1D, n_lo: int, n_hi: int,
                   evidence_run: Optional[int] = None) -> HankelReport:
    """
    Kronecker-test over vinduet [n_lo, n_hi]

    Args:
        a: Heltallsserie materialisert til minst 2·n_hi
        n_lo: Første n
        n_hi: Siste n
        evidence_run: Antall avsluttende nuller som gjør resultatet Inconclusive

    Returns:
        HankelReport med alle A_n og verdict

    Raises:
        ValidationError: hvis vinduet er ugyldig
        TruncationTooShort: hvis serien er for kort
    """
    if n_lo < 0 or n_lo > n_hi:
        raise ValidationError(f"Ugyldig vindu [{n_lo}, {n_hi}]", field="window", value=[n_lo, n_hi])
    run = config.evidence_run if evidence_run is None else evidence_run
    a.require(2 * n_hi)

    dets = []
    for n in range(n_lo, n_hi + 1):
        value = hankel_det(a, n)
        logger.debug(f"A_{n} = {value}")
        dets.append(value)

    verdict, witness = classify_window(dets, n_lo, run)
    logger.info(f"Kronecker-test på {a.label or 'serie'} [{n_lo}, {n_hi}]: {verdict.value}")
    return HankelReport((n_lo, n_hi), tuple(dets), verdict, witness)


def _nullspace_vector(rows: List[List[Fraction]], width: int) -> Optional[List[Fraction]]:
    """One nonzero solution x of rows·x = 0 (reduced row echelon over Q), or None"""
    m = [list(row) for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break

    free = [c for c in range(width) if c not in pivots]
    if not free:
        return None
    chosen = free[0]
    x = [Fraction(0)] * width
    x[chosen] = Fraction(1)
    for row_index, c in enumerate(pivots):
        x[c] = -m[row_index][chosen]
    return x


def _clear(values: List[Fraction]) -> List[int]:
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return [int(v * lcm) for v in values]


def reconstruct_rational(a: IntSeries1D, d: int) -> RationalFn:
    """
    Rasjonal rekonstruksjon P/Q med grad P, grad Q <= d

    The denominator solves the d + 1 equations [z^n](Q·A) = 0 for
    n = d+1..2d+1 in exact rationals; P is (Q·A) mod z^{d+1}.

    Raises:
        NoRationalFit: hvis ingen P/Q med grad <= d passer a_0..a_{2d+1}
        TruncationTooShort: hvis serien er for kort
    """
    if d < 0:
        raise ValidationError("d må være >= 0", field="d", value=d)
    a.require(2 * d + 1)
    coeffs = a.coeffs

    rows = [[Fraction(coeffs[n - i]) for i in range(d + 1)] for n in range(d + 1, 2 * d + 2)]
    solution = _nullspace_vector(rows, d + 1)
    if solution is None:
        raise NoRationalFit(d)

    q = IntPoly(tuple(_clear(solution)))
    product = q * IntPoly(coeffs[:2 * d + 2])
    p = product.truncate(d + 1)
    if product.truncate(2 * d + 2) != p:
        raise NoRationalFit(d)

    try:
        result = RationalFn(p, q)
    except NonUnitConstantTerm:
        raise NoRationalFit(d)

    residual = (result.denominator * IntPoly(coeffs[:2 * d + 2])).truncate(2 * d + 2) - result.numerator
    if residual:
        raise NoRationalFit(d)
    if abs(result.denominator[0]) == 1:
        expansion = expand_rational(result, 2 * d + 1)
        if expansion.coeffs != coeffs[:2 * d + 2]:
            raise NoRationalFit(d)

    logger.debug(f"Rekonstruert {a.label or 'serie'} med d={d}: {result}")
    return result


def try_reconstruct(a: IntSeries1D, d_max: int) -> Optional[Tuple[int, RationalFn]]:
    """Smallest d <= d_max admitting a fit, with its rational function"""
    for d in range(d_max + 1):
        if 2 * d + 1 > a.truncation_order:
            break
        try:
            return d, reconstruct_rational(a, d)
        except AppError:
            continue
    return None
