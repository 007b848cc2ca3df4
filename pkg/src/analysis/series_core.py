"""
Exact integer polynomials, power series and rational functions

Arithmetic substrate for the rest of the analysis package. Everything in here
is exact: Python integers and fractions.Fraction, never floats (evaluation at
floating points is the only exception and is explicit).
"""

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from numbers import Integral
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from utils.error_handler import (
    NonUnitConstantTerm, NotDivisible, TruncationTooShort, ValidationError, ZeroDenominator,
)


ZERO_DEGREE = float("-inf")


class Verdict(str, Enum):
    """Evidence labels shared by the Hankel and restriction tests"""
    RATIONAL_EVIDENCE = "RationalEvidence"
    NOT_RATIONAL_WITNESS = "NotRationalWitness"
    NOT_RATIONAL_EVIDENCE = "NotRationalEvidence"
    INCONCLUSIVE = "Inconclusive"


def _as_int(value: Any) -> int:
    """Coerce an exact integer (int, numpy integer, decimal string, integral Fraction)"""
    if isinstance(value, bool):
        raise ValidationError(f"Forventet heltall, fikk bool {value}", value=value)
    if isinstance(value, Integral):
        return int(value)
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise ValidationError(f"Forventet eksakt heltall, fikk {value!r}", value=repr(value))


# ============= POLYNOMIALS =============

@dataclass(frozen=True)
class IntPoly:
    """Dense polynomial with exact integer coefficients, coeffs[k] is the coefficient of x^k"""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        values = [_as_int(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls(())

    @classmethod
    def one(cls) -> "IntPoly":
        return cls((1,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        return cls((0,) * k + (c,))

    @property
    def degree(self):
        """Highest index with a nonzero coefficient; ZERO_DEGREE (-inf) for the zero polynomial"""
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError(k)
        return self.coeffs[k] if k < len(self.coeffs) else 0

    @staticmethod
    def _coerce(other: Any) -> Optional["IntPoly"]:
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, Integral) and not isinstance(other, bool):
            return IntPoly((int(other),))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(tuple(self[k] + other[k] for k in range(size)))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return IntPoly.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("Negativ eksponent")
        result = IntPoly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def exact_div(self, divisor: "IntPoly") -> "IntPoly":
        """
        Eksakt divisjon i Z[x]

        Raises:
            NotDivisible: hvis divisor ikke deler polynomet i Z[x]
        """
        divisor = self._coerce(divisor)
        if divisor is None or divisor.is_zero:
            raise NotDivisible("divisjon med nullpolynomet")
        if self.is_zero:
            return IntPoly.zero()
        shift = len(self.coeffs) - len(divisor.coeffs)
        if shift < 0:
            raise NotDivisible(f"{self} / {divisor}")
        remainder = list(self.coeffs)
        lead = divisor.coeffs[-1]
        quotient = [0] * (shift + 1)
        for i in range(shift, -1, -1):
            top = remainder[i + len(divisor.coeffs) - 1]
            if top % lead:
                raise NotDivisible(f"{self} / {divisor}")
            q = top // lead
            quotient[i] = q
            if q:
                for j, d in enumerate(divisor.coeffs):
                    remainder[i + j] -= q * d
        if any(remainder):
            raise NotDivisible(f"{self} / {divisor}")
        return IntPoly(tuple(quotient))

    def scale_down(self, c: int) -> "IntPoly":
        """Divide every coefficient by the integer c (must divide exactly)"""
        if c == 0 or any(x % c for x in self.coeffs):
            raise NotDivisible(f"{self} / {c}")
        return IntPoly(tuple(x // c for x in self.coeffs))

    def __call__(self, x):
        if self.is_zero:
            return 0 * x
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def primitive(self) -> "IntPoly":
        """Primitive part with positive leading coefficient"""
        if self.is_zero:
            return self
        c = self.content()
        if self.coeffs[-1] < 0:
            c = -c
        return self.scale_down(c)

    def truncate(self, n: int) -> "IntPoly":
        """Reduction modulo x^n"""
        return IntPoly(self.coeffs[:n])

    def to_strings(self) -> List[str]:
        return [str(c) for c in self.coeffs]

    def format(self, var: str = "z") -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if mag == 1 else f"{mag}*{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.format()


def _strip(values: List[Fraction]) -> List[Fraction]:
    while values and values[-1] == 0:
        values.pop()
    return values


def _frac_divmod(a: List[Fraction], b: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    """Polynomial division with remainder over Q (lists low -> high)"""
    a = _strip(list(a))
    b = _strip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    quotient = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(quotient) - 1, -1, -1):
        q = a[i + len(b) - 1] / lead
        quotient[i] = q
        if q:
            for j, d in enumerate(b):
                a[i + j] -= q * d
    return _strip(quotient), _strip(a[:len(b) - 1])


def _clear_denominators(*polys: List[Fraction]) -> List[IntPoly]:
    """Scale a family of rational polynomials jointly to coprime integer polynomials"""
    lcm = 1
    for poly in polys:
        for c in poly:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    scaled = [IntPoly(tuple(int(c * lcm) for c in poly)) for poly in polys]
    content = reduce(math.gcd, (p.content() for p in scaled), 0)
    if content > 1:
        scaled = [p.scale_down(content) for p in scaled]
    return scaled


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """
    Største felles divisor over Q, returnert som primitivt heltallspolynom

    Args:
        a: Første polynom
        b: Andre polynom

    Returns:
        Primitivt polynom med positiv ledende koeffisient (nullpolynomet hvis a = b = 0)
    """
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while y:
        _, r = _frac_divmod(x, y)
        x, y = y, r
    if not x:
        return IntPoly.zero()
    (g,) = _clear_denominators(x)
    return g.primitive()


def fraction_free_det(rows: Sequence[Sequence[Any]], zero: Any = 0,
                      exact_div: Optional[Callable[[Any, Any], Any]] = None) -> Any:
    """
    Determinant over an exact integral domain by fraction-free (Bareiss) elimination

    Works for integers and IntPoly entries; every division is exact by Sylvester's
    identity, and a row swap is made when a pivot vanishes.

    Args:
        rows: Square matrix as a sequence of rows
        zero: Zero element of the ring
        exact_div: Exact division in the ring (defaults to // for ints, exact_div for IntPoly)

    Returns:
        The determinant, an element of the same ring
    """
    m = [list(row) for row in rows]
    n = len(m)
    if n == 0:
        return zero + 1
    if any(len(row) != n for row in m):
        raise ValidationError("Matrisen må være kvadratisk", field="rows")
    if exact_div is None:
        exact_div = _default_exact_div

    sign = 1
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return zero
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                value = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = exact_div(value, m[k - 1][k - 1]) if k > 0 else value
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def _default_exact_div(a: Any, b: Any) -> Any:
    if isinstance(a, IntPoly) or isinstance(b, IntPoly):
        return IntPoly._coerce(a).exact_div(IntPoly._coerce(b))
    if a % b:
        raise NotDivisible(f"{a} / {b}")
    return a // b


# ============= SERIES =============

@dataclass(frozen=True)
class IntSeries1D:
    """Coefficients a_0..a_N of a univariate power series with a hard truncation order"""

    coeffs: Tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        values = tuple(_as_int(c) for c in self.coeffs)
        if not values:
            raise ValidationError("En serie må ha minst én koeffisient", field="coeffs")
        object.__setattr__(self, "coeffs", values)

    @classmethod
    def from_rule(cls, rule: Callable[[int], int], order: int, label: str = "") -> "IntSeries1D":
        return cls(tuple(rule(n) for n in range(order + 1)), label)

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    def require(self, n: int) -> None:
        """Raise TruncationTooShort unless index n is materialized"""
        if n > self.truncation_order:
            raise TruncationTooShort(n, self.truncation_order, self.label or "series")

    def coeff(self, n: int) -> int:
        if n < 0:
            raise IndexError(f"Negativ indeks {n}")
        self.require(n)
        return self.coeffs[n]

    def coefficients(self, upto: Optional[int] = None) -> Tuple[int, ...]:
        if upto is None:
            return self.coeffs
        self.require(upto)
        return self.coeffs[:upto + 1]

    def truncate(self, order: int) -> "IntSeries1D":
        self.require(order)
        return IntSeries1D(self.coeffs[:order + 1], self.label)

    def evaluate(self, z):
        """Partial sum at z (float/complex/ndarray)"""
        return IntPoly(self.coeffs)(z)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'truncation_order': self.truncation_order,
            'coeffs': [str(c) for c in self.coeffs],
        }


@dataclass(frozen=True)
class BiSeries:
    """
    Coefficients a_jk (j + k <= N) of a bivariate power series

    rows[j][k] holds a_jk; row j has N - j + 1 entries. convergence_note is a
    free-text assertion about the convergence domain and is never used in
    computation.
    """

    rows: Tuple[Tuple[int, ...], ...]
    convergence_note: str = ""
    label: str = ""

    def __post_init__(self):
        rows = tuple(tuple(_as_int(c) for c in row) for row in self.rows)
        order = len(rows) - 1
        if order < 0:
            raise ValidationError("Tom koeffisienttabell", field="rows")
        for j, row in enumerate(rows):
            if len(row) != order - j + 1:
                raise ValidationError(
                    f"Rad {j} har {len(row)} koeffisienter, forventet {order - j + 1}",
                    field="rows", value=j,
                )
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_function(cls, fn: Callable[[int, int], int], order: int,
                      convergence_note: str = "", label: str = "") -> "BiSeries":
        rows = tuple(tuple(fn(j, k) for k in range(order - j + 1)) for j in range(order + 1))
        return cls(rows, convergence_note, label)

    @property
    def truncation_order(self) -> int:
        return len(self.rows) - 1

    def require(self, total_degree: int) -> None:
        if total_degree > self.truncation_order:
            raise TruncationTooShort(total_degree, self.truncation_order, self.label or "bivariate series")

    def coeff(self, j: int, k: int) -> int:
        if j < 0 or k < 0:
            raise IndexError(f"Negativ indeks ({j}, {k})")
        self.require(j + k)
        return self.rows[j][k]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'truncation_order': self.truncation_order,
            'convergence_note': self.convergence_note,
            'rows': [[str(c) for c in row] for row in self.rows],
        }


# ============= RATIONAL FUNCTIONS =============

@dataclass(frozen=True)
class RationalFn:
    """
    Reduced quotient P/Q of integer polynomials

    Canonical form: common factor removed over Q, joint integer content of
    (P, Q) removed, Q(0) > 0. Q(0) = 0 after reduction is not a power series
    and is rejected.
    """

    numerator: IntPoly
    denominator: IntPoly

    def __post_init__(self):
        p = self.numerator if isinstance(self.numerator, IntPoly) else IntPoly(tuple(self.numerator))
        q = self.denominator if isinstance(self.denominator, IntPoly) else IntPoly(tuple(self.denominator))
        if q.is_zero:
            raise ZeroDenominator()

        if p.is_zero:
            p, q = IntPoly.zero(), IntPoly.one()
        else:
            g = poly_gcd(p, q)
            if g.degree > 0:
                p_red, _ = _frac_divmod([Fraction(c) for c in p.coeffs], [Fraction(c) for c in g.coeffs])
                q_red, _ = _frac_divmod([Fraction(c) for c in q.coeffs], [Fraction(c) for c in g.coeffs])
                p, q = _clear_denominators(p_red, q_red)
            content = math.gcd(p.content(), q.content())
            if content > 1:
                p, q = p.scale_down(content), q.scale_down(content)

        if q[0] == 0:
            raise NonUnitConstantTerm(0)
        if q[0] < 0:
            p, q = -p, -q
        object.__setattr__(self, "numerator", p)
        object.__setattr__(self, "denominator", q)

    @classmethod
    def from_lists(cls, numerator: Iterable[Any], denominator: Iterable[Any]) -> "RationalFn":
        return cls(IntPoly(tuple(numerator)), IntPoly(tuple(denominator)))

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'numerator': self.numerator.to_strings(),
            'denominator': self.denominator.to_strings(),
            'text': str(self),
        }

    def __str__(self) -> str:
        return f"({self.numerator}) / ({self.denominator})"


def expand_rational(r: RationalFn, N: int) -> IntSeries1D:
    """
    Taylor coefficients a_0..a_N of P/Q

    Raises:
        NonUnitConstantTerm: hvis |Q(0)| != 1
        ZeroDenominator: hvis Q = 0
    """
    p, q = r.numerator, r.denominator
    if q.is_zero:
        raise ZeroDenominator()
    q0 = q[0]
    if abs(q0) != 1:
        raise NonUnitConstantTerm(q0)
    if N < 0:
        raise ValidationError("N må være >= 0", field="N", value=N)

    a: List[int] = []
    for n in range(N + 1):
        acc = p[n]
        for i in range(1, min(n, len(q.coeffs) - 1) + 1):
            acc -= q[i] * a[n - i]
        a.append(acc * q0)
    return IntSeries1D(tuple(a), label=f"expand({r})")


# ============= FIXTURES =============

def squares_rule() -> Iterable[int]:
    return (j * j for j in itertools.count())


def factorial_rule() -> Iterable[int]:
    return (math.factorial(j) for j in itertools.count())


def powers_of_two_rule() -> Iterable[int]:
    return (2 ** j for j in itertools.count())


def empty_rule() -> Iterable[int]:
    return iter(())


LACUNARY_RULES: Dict[str, Callable[[], Iterable[int]]] = {
    'squares': squares_rule,
    'factorial': factorial_rule,
    'powers_of_two': powers_of_two_rule,
    'empty': empty_rule,
}


def lacunary_series(exponent_rule: Callable[[], Iterable[int]], N: int, label: str = "") -> IntSeries1D:
    """
    Series whose n-th coefficient counts the witnesses j with e(j) = n

    exponent_rule returns the nondecreasing exponent sequence e(0), e(1), ...;
    enumeration stops at the first exponent beyond N.
    """
    if N < 0:
        raise ValidationError("N må være >= 0", field="N", value=N)
    counts = [0] * (N + 1)
    for exponent in exponent_rule():
        if exponent > N:
            break
        counts[exponent] += 1
    return IntSeries1D(tuple(counts), label)


def biseries_from_product(g: IntSeries1D, h: IntSeries1D, N: int,
                          convergence_note: str = "", label: str = "") -> BiSeries:
    """Coefficient table of g(z)·h(w), a_jk = g_j·h_k for j + k <= N"""
    g.require(N)
    h.require(N)
    rows = tuple(tuple(g.coeffs[j] * h.coeffs[k] for k in range(N - j + 1)) for j in range(N + 1))
    return BiSeries(rows, convergence_note, label)


def geometric_series(N: int) -> IntSeries1D:
    return IntSeries1D((1,) * (N + 1), "geometric")


def all_ones(N: int) -> BiSeries:
    """1/((1-z)(1-w))"""
    return BiSeries.from_function(lambda j, k: 1, N, "T^2 on boundary of Omega", "all_ones")


def binomial_table(N: int) -> BiSeries:
    """1/(1-z-w), a_jk = C(j+k, j)"""
    return BiSeries.from_function(lambda j, k: math.comb(j + k, j), N, "|z|+|w|<1", "binomial")


def lacunary_product(N: int) -> BiSeries:
    """Non-rational (sum_j w^{j!}) / (1-z) with T^2 on the boundary of its domain"""
    return biseries_from_product(
        geometric_series(N), lacunary_series(factorial_rule, N, "factorial"), N,
        "T^2 on boundary of Omega", "lacunary_product",
    )


def zero_biseries(N: int) -> BiSeries:
    return BiSeries.from_function(lambda j, k: 0, N, "", "zero")


def rational_product(left: RationalFn, right: RationalFn, N: int) -> BiSeries:
    """Table of left(z)·right(w) for two rational functions with unit constant terms"""
    return biseries_from_product(expand_rational(left, N), expand_rational(right, N), N,
                                 "", f"({left})*({right})")


BISERIES_FIXTURES: Dict[str, Callable[[int], BiSeries]] = {
    'all_ones': all_ones,
    'binomial': binomial_table,
    'lacunary_product': lacunary_product,
    'zero': zero_biseries,
}
