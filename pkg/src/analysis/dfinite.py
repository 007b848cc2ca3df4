"""
D-finite series: recurrences from linear ODEs, exact coefficient generation,
holomorphic continuation of first-order systems and the bivariate rationality
pipeline
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config import config
from utils.error_handler import (
    DegenerateEquation, LeadingCoeffVanishes, NonIntegerCoefficient, PathOutsideDomain,
    SingularIndex, StepFailure, ValidationError, logger, safe_execute,
)

from .hankel import reconstruct_rational, try_reconstruct
from .restriction import CriterionReport, criterion_test, restriction_polys
from .series_core import BiSeries, IntPoly, IntSeries1D, RationalFn, Verdict, expand_rational


# ============= RECURRENCES =============

def falling_factorial_poly(shift: int, i: int) -> IntPoly:
    """(t + shift)(t + shift − 1)···(t + shift − i + 1) as a polynomial in t"""
    result = IntPoly.one()
    for r in range(i):
        result = result * IntPoly((shift - r, 1))
    return result


@dataclass(frozen=True)
class Recurrence:
    """
    Σ_{s=s_min}^{s_max} c_s(t)·a_{t+s} = 0 for every t >= 0

    coeffs[s − s_min] = c_s as an integer polynomial in t.
    """

    s_min: int
    coeffs: Tuple[IntPoly, ...]

    @property
    def s_max(self) -> int:
        return self.s_min + len(self.coeffs) - 1

    @property
    def order(self) -> int:
        return self.s_max - self.s_min

    @property
    def offset(self) -> int:
        return self.s_min

    @property
    def leading(self) -> IntPoly:
        return self.coeffs[-1]

    def c(self, s: int) -> IntPoly:
        return self.coeffs[s - self.s_min]

    def equation_value(self, t: int, values: Sequence[Any]) -> Any:
        """Left-hand side at t, reading a_k for k < 0 as zero"""
        total = 0
        for s in range(self.s_min, self.s_max + 1):
            k = t + s
            if k >= 0:
                total += self.c(s)(t) * values[k]
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {
            's_min': self.s_min,
            's_max': self.s_max,
            'order': self.order,
            'coeffs': {str(s): self.c(s).to_strings() for s in range(self.s_min, self.s_max + 1)},
            'text': self.format(),
        }

    def format(self) -> str:
        terms = []
        for s in range(self.s_max, self.s_min - 1, -1):
            c = self.c(s)
            if c.is_zero:
                continue
            index = "t" if s == 0 else (f"t+{s}" if s > 0 else f"t{s}")
            terms.append(f"({c.format('t')})*a[{index}]")
        return " + ".join(terms) + " = 0"


def recurrence_from_ode(p: Sequence[IntPoly]) -> Recurrence:
    """
    Rekursjon for koeffisientene til en potensrekkeløsning av Σ p_i(z) f^{(i)} = 0

    Raises:
        DegenerateEquation: hvis alle p_i er null
    """
    p = [c if isinstance(c, IntPoly) else IntPoly(tuple(c)) for c in p]
    if all(c.is_zero for c in p):
        raise DegenerateEquation()

    by_shift: Dict[int, IntPoly] = {}
    for i, poly in enumerate(p):
        for l, coefficient in enumerate(poly.coeffs):
            if coefficient == 0:
                continue
            s = i - l
            term = coefficient * falling_factorial_poly(s, i)
            by_shift[s] = by_shift.get(s, IntPoly.zero()) + term

    nonzero = [s for s, c in by_shift.items() if not c.is_zero]
    if not nonzero:
        raise DegenerateEquation()
    s_min, s_max = min(nonzero), max(nonzero)
    coeffs = tuple(by_shift.get(s, IntPoly.zero()) for s in range(s_min, s_max + 1))
    return Recurrence(s_min, coeffs)


@dataclass(frozen=True)
class GeneratedCoefficients:
    values: Tuple[Fraction, ...]
    first_non_integer: Optional[int]

    @property
    def is_integral(self) -> bool:
        return self.first_non_integer is None

    def to_int_series(self, label: str = "") -> IntSeries1D:
        if self.first_non_integer is not None:
            raise NonIntegerCoefficient(self.first_non_integer, self.values[self.first_non_integer])
        return IntSeries1D(tuple(v.numerator for v in self.values), label)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'values': [str(v) for v in self.values],
            'first_non_integer': self.first_non_integer,
        }


def generate_coeffs(rec: Recurrence, initials: Sequence[Any], N: int) -> GeneratedCoefficients:
    """
    Eksakte koeffisienter a_0..a_N fra rekursjonen

    Supplied initial values are used as given and checked against every
    equation they appear in as the highest index.

    Raises:
        SingularIndex: hvis ledende koeffisient forsvinner ved en nødvendig n
        ValidationError: hvis startverdier mangler eller er inkonsistente
    """
    if N < 0:
        raise ValidationError("N må være >= 0", field="N", value=N)
    given = [Fraction(v) for v in initials]
    values: List[Fraction] = []
    for k in range(N + 1):
        t = k - rec.s_max
        if k < len(given):
            values.append(given[k])
            if t >= 0 and rec.equation_value(t, values) != 0:
                raise ValidationError(f"Startverdien a_{k} bryter rekursjonen", field="initials", value=k)
            continue
        if t < 0:
            raise ValidationError(f"Mangler startverdi a_{k}", field="initials", value=k)
        lead = rec.leading(t)
        if lead == 0:
            raise SingularIndex(k)
        rest = 0
        for s in range(rec.s_min, rec.s_max):
            index = t + s
            if index >= 0:
                rest += rec.c(s)(t) * values[index]
        values.append(Fraction(-rest) / lead)

    first_bad = next((k for k, v in enumerate(values) if v.denominator != 1), None)
    if first_bad is not None:
        logger.warning(f"Ikke-heltallig koeffisient ved n={first_bad}: {values[first_bad]}")
    return GeneratedCoefficients(tuple(values), first_bad)


def apply_ode(p: Sequence[IntPoly], coeffs: Sequence[Any]) -> List[Fraction]:
    """Coefficients of Σ p_i f^{(i)} through z^{N−r} for f = Σ coeffs[k] z^k, N = len − 1"""
    N = len(coeffs) - 1
    r = len(p) - 1
    out = []
    for t in range(N - r + 1):
        total = Fraction(0)
        for i, poly in enumerate(p):
            for l, c in enumerate(poly.coeffs):
                k = t + i - l
                if c and 0 <= k <= N:
                    total += c * math.perm(k, i) * Fraction(coeffs[k])
        out.append(total)
    return out


# ============= ODE SYSTEMS =============

def _shifted_taylor(poly: np.ndarray, center: complex, degree: int) -> np.ndarray:
    """Coefficients of P(center + h) in h, up to h^degree"""
    out = np.zeros(degree + 1, dtype=complex)
    current = np.asarray(poly, dtype=complex)
    factorial = 1.0
    for k in range(degree + 1):
        if current.size == 0:
            break
        out[k] = np.polynomial.polynomial.polyval(center, current) / factorial
        current = np.polynomial.polynomial.polyder(current) if current.size > 1 else np.zeros(0)
        factorial *= k + 1
    return out


def _series_divide(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num)
    for k in range(len(num)):
        acc = num[k] - np.dot(den[1:k + 1], out[k - 1::-1][:k]) if k else num[0]
        out[k] = acc / den[0]
    return out


@dataclass(frozen=True, eq=False)
class ODESystem:
    """
    w'(z) = A(z) w(z) with rational entries A_ij = num_ij / den_ij

    Entries are numpy coefficient arrays (low to high). A is holomorphic on the
    disc |z − center| < R.
    """

    entries: Tuple[Tuple[Tuple[np.ndarray, np.ndarray], ...], ...]
    w0: np.ndarray
    R: float
    center: complex = 0j
    singularities: Tuple[complex, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rational(cls, entries, w0, center: complex = 0j) -> "ODESystem":
        clean = tuple(
            tuple((np.atleast_1d(np.asarray(num, dtype=complex)), np.atleast_1d(np.asarray(den, dtype=complex)))
                  for num, den in row)
            for row in entries
        )
        poles: List[complex] = []
        for row in clean:
            for _, den in row:
                trimmed = np.trim_zeros(den, 'b')
                if trimmed.size == 0:
                    raise ValidationError("Nevner er nullpolynomet", field="entries")
                if trimmed.size > 1:
                    poles.extend(complex(r) for r in np.polynomial.polynomial.polyroots(trimmed))
        radius = min((abs(p - center) for p in poles), default=np.inf)
        if radius == 0:
            raise ValidationError("A er ikke holomorf i sentrum", field="center", value=str(center))
        return cls(clean, np.asarray(w0, dtype=complex), float(radius), complex(center), tuple(poles))

    @classmethod
    def from_constant(cls, matrix, w0) -> "ODESystem":
        matrix = np.asarray(matrix, dtype=complex)
        entries = [[(np.array([matrix[i, j]]), np.array([1.0])) for j in range(matrix.shape[1])]
                   for i in range(matrix.shape[0])]
        return cls.from_rational(entries, w0)

    def evaluate(self, z: complex) -> np.ndarray:
        return np.array([[np.polynomial.polynomial.polyval(z, num) / np.polynomial.polynomial.polyval(z, den)
                          for num, den in row] for row in self.entries], dtype=complex)

    def local_radius(self, z: complex) -> float:
        return min((abs(z - p) for p in self.singularities), default=np.inf)

    def taylor_matrices(self, c: complex, degree: int) -> np.ndarray:
        """A(c + h) = Σ_j out[j] h^j, j = 0..degree"""
        d = self.dimension
        out = np.zeros((degree + 1, d, d), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, (num, den) in enumerate(row):
                out[:, i, j] = _series_divide(_shifted_taylor(num, c, degree), _shifted_taylor(den, c, degree))
        return out


def _taylor_step(system: ODESystem, c: complex, w: np.ndarray, h: complex, degree: int) -> np.ndarray:
    A = system.taylor_matrices(c, degree)
    terms = [w]
    for k in range(degree):
        acc = np.zeros_like(w)
        for j in range(k + 1):
            acc = acc + A[j] @ terms[k - j]
        terms.append(acc / (k + 1))
    result = np.zeros_like(w)
    for coefficient in reversed(terms):
        result = result * h + coefficient
    return result


@dataclass(frozen=True, eq=False)
class ContinuationResult:
    end: np.ndarray
    steps: int
    max_residual: float
    path: Tuple[complex, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'end': [[v.real, v.imag] for v in self.end],
            'steps': self.steps,
            'max_residual': self.max_residual,
            'path': [[p.real, p.imag] for p in self.path],
        }


def ode_continue(system: ODESystem, path: Sequence[complex], tol: Optional[float] = None,
                 degree: Optional[int] = None, max_step: float = 1.0,
                 fixed_degree: Optional[int] = None, safety: float = 0.5) -> ContinuationResult:
    """
    Fortsett løsningen langs en polylinje med lokale Taylor-steg

    Each step is compared with two half steps; the half-step value is kept when
    the difference is within tol·max(1, |w|), otherwise the step is halved.
    With fixed_degree set, plain steps of at most max_step are taken with that
    degree and the residual is only recorded.

    Raises:
        PathOutsideDomain: hvis et punkt på veien ligger utenfor disken
        StepFailure: hvis residualmålet ikke nås
    """
    tol = config.ode_tol if tol is None else tol
    degree = config.taylor_max_degree if degree is None else degree
    path = [complex(p) for p in path]
    if len(path) < 1 or path[0] != system.center:
        raise ValidationError("Veien må starte i systemets sentrum", field="path")
    for point in path:
        if not abs(point - system.center) < system.R:
            raise PathOutsideDomain(point, system.R)

    w = np.array(system.w0, dtype=complex)
    steps = 0
    max_residual = 0.0
    for start, stop in zip(path[:-1], path[1:]):
        c = start
        while abs(stop - c) > 0:
            remaining = stop - c
            limit = min(max_step, safety * system.local_radius(c))
            h = remaining if abs(remaining) <= limit else remaining / abs(remaining) * limit
            final = h == remaining

            if fixed_degree is not None:
                full = _taylor_step(system, c, w, h, fixed_degree)
                half = _taylor_step(system, c + h / 2, _taylor_step(system, c, w, h / 2, fixed_degree),
                                    h / 2, fixed_degree)
                max_residual = max(max_residual, float(np.max(np.abs(full - half))))
                w, c = full, (stop if final else c + h)
                steps += 1
                continue

            while True:
                full = _taylor_step(system, c, w, h, degree)
                half = _taylor_step(system, c + h / 2, _taylor_step(system, c, w, h / 2, degree), h / 2, degree)
                residual = float(np.max(np.abs(full - half)))
                if residual <= tol * max(1.0, float(np.max(np.abs(half)))):
                    break
                h = h / 2
                final = False
                if abs(h) < 1e-8:
                    raise StepFailure(c, residual)
            max_residual = max(max_residual, residual)
            w, c = half, (stop if final else c + h)
            steps += 1

    logger.debug(f"ODE-fortsettelse: {steps} steg, maks residual {max_residual:.3e}")
    return ContinuationResult(w, steps, max_residual, tuple(path))


def companion_system(q: Sequence[IntPoly], z: complex = 0j,
                     initial: Optional[Sequence[complex]] = None) -> ODESystem:
    """
    Følgesystem y' = A(w) y for Σ q_j(w) f^{(j)} = 0 ved fast z

    y = (f, f', ..., f^{(s−1)}); the last row is −(q_0, ..., q_{s−1}) / q_s.
    Coefficients depend on w only, so z is carried for reporting.

    Raises:
        LeadingCoeffVanishes: hvis q_s er null eller forsvinner i w = 0
    """
    q = [c if isinstance(c, IntPoly) else IntPoly(tuple(c)) for c in q]
    s = len(q) - 1
    if s < 1:
        raise ValidationError("Ligningen må ha orden >= 1", field="q")
    lead = q[-1]
    if lead.is_zero:
        raise LeadingCoeffVanishes("q_s ≡ 0")
    if lead[0] == 0:
        raise LeadingCoeffVanishes(f"w = 0 (z = {z})")

    den = np.array([float(c) for c in lead.coeffs])
    one = (np.array([1.0]), np.array([1.0]))
    zero = (np.array([0.0]), np.array([1.0]))
    entries = []
    for i in range(s - 1):
        entries.append([one if j == i + 1 else zero for j in range(s)])
    entries.append([(np.array([-float(c) for c in q[j].coeffs] or [0.0]), den) for j in range(s)])

    w0 = np.zeros(s, dtype=complex)
    if initial is None:
        w0[0] = 1.0
    else:
        w0[:] = np.asarray(initial, dtype=complex)
    return ODESystem.from_rational(entries, w0)


# ============= BIVARIATE SYSTEMS =============

@dataclass(frozen=True)
class DFiniteSystem:
    """
    Separable bivariate D-finite system

    Σ p_i(z) ∂_z^i f = 0 and Σ q_j(w) ∂_w^j f = 0, with initials[j][k] = a_jk
    for the indices the two recurrences cannot determine.
    """

    p: Tuple[IntPoly, ...]
    q: Tuple[IntPoly, ...]
    initials: Tuple[Tuple[Any, ...], ...]
    label: str = "dfinite"

    def __post_init__(self):
        for name, eq in (("p", self.p), ("q", self.q)):
            if not eq or eq[-1].is_zero:
                raise ValidationError(f"Ledende koeffisient i {name} er null", field=name)

    def coefficient_table(self, N: int) -> BiSeries:
        """
        a_jk for j + k <= N: rows j < (z-initials) from the w-recurrence, then
        every column from the z-recurrence

        Raises:
            NonIntegerCoefficient: hvis en koeffisient ikke er et heltall
        """
        rec_z = recurrence_from_ode(self.p)
        rec_w = recurrence_from_ode(self.q)
        seed_rows = max(rec_z.s_max, len(self.initials))

        rows: List[List[Fraction]] = []
        for j in range(min(seed_rows, N + 1)):
            given = self.initials[j] if j < len(self.initials) else ()
            rows.append(list(generate_coeffs(rec_w, given, N - j).values))

        table: Dict[Tuple[int, int], Fraction] = {}
        for k in range(N + 1):
            column_initials = [rows[j][k] for j in range(len(rows)) if k < len(rows[j])]
            column = generate_coeffs(rec_z, column_initials, N - k).values
            for j, value in enumerate(column):
                if value.denominator != 1:
                    raise NonIntegerCoefficient([j, k], value)
                table[(j, k)] = value

        return BiSeries.from_function(lambda j, k: table[(j, k)].numerator, N,
                                      "user system; unit polydisc not certified", self.label)


def radius_estimates(f: BiSeries) -> Dict[str, Optional[float]]:
    """Root-test heuristic per variable from the upper half of the table"""
    N = f.truncation_order
    estimates = {}
    for name, getter in (("z", lambda d, o: f.coeff(d, o)), ("w", lambda d, o: f.coeff(o, d))):
        log_roots = []
        for d in range(max(1, N // 2), N + 1):
            peak = max(abs(getter(d, o)) for o in range(N - d + 1))
            if peak:
                log_roots.append(math.log(peak) / d)
        estimates[name] = math.exp(-max(log_roots)) if log_roots else None
    return estimates


def boundary_candidates(system: DFiniteSystem, n: int, thetas: Sequence[float],
                        probes: int = 64, eps: float = 1e-8) -> Dict[str, Any]:
    """For each θ a point z0 on |z| = 1 with p_r(z0) != 0 and q_s(e^{iθ} z0^n) != 0"""
    found, failures = [], []
    p_lead, q_lead = system.p[-1], system.q[-1]
    for theta in thetas:
        hit = None
        for k in range(probes):
            z0 = np.exp(2j * np.pi * k / probes)
            if abs(p_lead(z0)) > eps and abs(q_lead(np.exp(1j * theta) * z0 ** n)) > eps:
                hit = z0
                break
        if hit is None:
            failures.append(float(theta))
        else:
            found.append({'theta': float(theta), 'z0': [float(hit.real), float(hit.imag)]})
    return {'found': found, 'failures': failures}


def _slice_series(f: BiSeries, n: int, N: int) -> IntSeries1D:
    fam = restriction_polys(f, n, N)
    return IntSeries1D(tuple(sum(p.coeffs) for p in fam.pv), f"g_0({f.label})")


def _continuation_demo(system: DFiniteSystem, table: BiSeries) -> Dict[str, Any]:
    s = len(system.q) - 1
    initial = [math.factorial(k) * table.coeff(0, k) for k in range(s)]
    ode = companion_system(system.q, 0j, initial)
    target = 0.9 * min(ode.R, 1.0)
    result = ode_continue(ode, [0j, target])
    partial = sum(table.coeff(0, k) * target ** k for k in range(table.truncation_order + 1))
    return {
        'target': target,
        'disc_radius': ode.R,
        'continuation': result.to_dict(),
        'partial_sum_at_target': float(np.real(partial)),
    }


@dataclass(frozen=True, eq=False)
class PipelineReport:
    criterion: CriterionReport
    table: BiSeries
    slice_fit: Optional[RationalFn] = None
    slice_matches: Optional[bool] = None
    radii: Dict[str, Optional[float]] = field(default_factory=dict)
    warnings: Tuple[str, ...] = ()
    boundary: Optional[Dict[str, Any]] = None
    continuation: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'criterion': self.criterion.to_dict(),
            'slice_fit': None if self.slice_fit is None else self.slice_fit.to_dict(),
            'slice_matches': self.slice_matches,
            'radius_estimates': self.radii,
            'warnings': list(self.warnings),
            'boundary_candidates': self.boundary,
            'continuation': self.continuation,
        }

    def to_frame(self) -> pd.DataFrame:
        return self.criterion.to_frame()


def bell_chen_pipeline(f: Union[DFiniteSystem, BiSeries], n: int, N: int, m_lo: int, m_hi: int,
                       thetas: Optional[Sequence[float]] = None) -> PipelineReport:
    """
    Koeffisienttabell → restriksjonskriterium → rekonstruksjon av snittet g_0

    Raises:
        NonIntegerCoefficient: hvis systemet gir ikke-heltallige koeffisienter
        TruncationTooShort: hvis tabellen er for kort
    """
    system = f if isinstance(f, DFiniteSystem) else None
    if system is not None:
        table = system.coefficient_table(N)
    else:
        f.require(N)
        table = f

    report = criterion_test(table, n, m_lo, m_hi)

    slice_fit, matches = None, None
    if report.verdict == Verdict.RATIONAL_EVIDENCE:
        g0 = _slice_series(table, n, N)
        d = report.onset_m if report.onset_m is not None else m_lo
        slice_fit = safe_execute(lambda: reconstruct_rational(g0, d), None, context="snittrekonstruksjon")
        if slice_fit is None:
            found = try_reconstruct(g0, (N - 1) // 2)
            slice_fit = found[1] if found else None
        if slice_fit is not None and abs(slice_fit.denominator[0]) == 1:
            matches = expand_rational(slice_fit, N).coeffs == g0.coeffs
        logger.info(f"Snitt g_0 rekonstruert: {slice_fit}")

    radii = radius_estimates(table)
    warnings = []
    for name, radius in radii.items():
        if radius is not None and radius < 0.95:
            warnings.append(f"Rottest antyder konvergensradius {radius:.3f} < 1 i {name}")
    for message in warnings:
        logger.warning(message)

    boundary, continuation = None, None
    if system is not None:
        angles = list(thetas) if thetas is not None else [2 * np.pi * k / 8 for k in range(8)]
        boundary = boundary_candidates(system, n, angles)
        continuation = safe_execute(lambda: _continuation_demo(system, table), None,
                                    context="fortsettelsesdemo")

    return PipelineReport(report, table, slice_fit, matches, radii, tuple(warnings), boundary, continuation)
