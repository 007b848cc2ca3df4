"""
Ingestion of JSON series, cloud and contour specs

A spec is read from a file path or given inline (text starting with '{' or '[').
Exact integers may be JSON numbers or decimal strings.
"""

import json
import os
from typing import Any, Callable, Dict, Optional, Union

import numpy as np

from analysis.capacity import PointCloud, circle_cloud, invert_cloud, points_cloud, segment_cloud
from analysis.contour import GammaContour, make_gamma, sample_contour
from analysis.dfinite import DFiniteSystem, generate_coeffs, recurrence_from_ode
from analysis.series_core import (
    BISERIES_FIXTURES, LACUNARY_RULES, BiSeries, IntPoly, IntSeries1D, RationalFn,
    biseries_from_product, expand_rational, lacunary_series,
)

from .error_handler import UsageError, logger, validate_required_fields

SERIES_KINDS = ("rational", "table", "lacunary", "product", "dfinite")

SCHEMA_HELP = """Series spec (JSON, exact integers as numbers or decimal strings):
  {"kind": "rational", "numerator": [1], "denominator": [1, -1], "N": 20}
  {"kind": "table", "coeffs": [1, 1, 2, 3, 5, 8]}
  {"kind": "lacunary", "rule": "squares|factorial|powers_of_two|empty", "N": 20}
  {"kind": "dfinite", "variables": ["z"], "equations": [[-1], [1, -1]], "initials": [1], "N": 20}
Bivariate spec:
  {"kind": "product", "g": <series spec>, "h": <series spec>, "N": 20}
  {"kind": "table", "rows": [[1, 1, 1], [1, 1], [1]]}
  {"kind": "fixture", "name": "all_ones|binomial|lacunary_product|zero", "N": 20}
  {"kind": "dfinite", "variables": ["z", "w"], "equations": [[p0, p1, ...], [q0, q1, ...]],
   "initials": [[a00, a01, ...], ...]}
Cloud spec:
  {"kind": "circle", "radius": 1, "count": 512}
  {"kind": "segment", "a": -1, "b": 1, "count": 513}
  {"kind": "points", "points": [[re, im], ...]}
  {"kind": "gamma", "phi": 1.5708, "psi": -1.5708, "s": 1.2, "delta": 0.05, "density": 512}
  any cloud spec may carry "invert": true for the image under 1/z
Contour spec: {"phi": ..., "psi": ..., "s": ..., "delta": ...}
Function spec (cauchy / symcheck):
  {"kind": "rational", "numerator": [1], "denominator": [1, -0.5]}
  {"kind": "polynomial", "coeffs": [0, 1]}
"""


def load_spec(source: str) -> Any:
    """
    Les spec fra fil eller inline JSON

    Raises:
        UsageError: hvis kilden ikke finnes eller ikke er gyldig JSON
    """
    if source is None:
        raise UsageError("Mangler --input", field="input")
    text = source.strip()
    try:
        if text.startswith("{") or text.startswith("["):
            return json.loads(text)
        if not os.path.isfile(source):
            raise UsageError(f"Finner ikke inputfil: {source}", field="input", value=source)
        with open(source, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as e:
        raise UsageError(f"Ugyldig JSON: {e}", field="input")


def _kind(spec: Dict[str, Any]) -> str:
    if not isinstance(spec, dict):
        raise UsageError("Spec må være et JSON-objekt", field="input")
    validate_required_fields(spec, ["kind"])
    return spec["kind"]


def _order(spec: Dict[str, Any], N: Optional[int]) -> int:
    """Truncation order; an explicit --N wins over N in the spec"""
    value = spec.get("N") if N is None else N
    if N is not None and spec.get("N") is not None and int(spec["N"]) != N:
        logger.warning(f"--N={N} overstyrer N={spec['N']} fra spec")
    if value is None:
        raise UsageError("Trunkeringsorden N mangler (i spec eller --N)", field="N")
    return int(value)


def _poly(values: Any) -> IntPoly:
    return IntPoly(tuple(values))


# ============= UNIVARIATE =============

def build_series_1d(spec: Dict[str, Any], N: Optional[int] = None) -> IntSeries1D:
    """IntSeries1D from a rational, table, lacunary or univariate dfinite spec"""
    kind = _kind(spec)
    if kind == "rational":
        validate_required_fields(spec, ["numerator", "denominator"])
        r = RationalFn(_poly(spec["numerator"]), _poly(spec["denominator"]))
        return expand_rational(r, _order(spec, N))
    if kind == "table":
        validate_required_fields(spec, ["coeffs"])
        return IntSeries1D(tuple(spec["coeffs"]), spec.get("label", "table"))
    if kind == "lacunary":
        validate_required_fields(spec, ["rule"])
        rule = LACUNARY_RULES.get(spec["rule"])
        if rule is None:
            raise UsageError(f"Ukjent regel: {spec['rule']}", field="rule", value=spec["rule"])
        return lacunary_series(rule, _order(spec, N), spec["rule"])
    if kind == "dfinite":
        validate_required_fields(spec, ["equations", "initials"])
        equations = spec["equations"]
        if len(spec.get("variables", ["z"])) != 1:
            raise UsageError("Univariat serie krever én variabel", field="variables")
        p = [_poly(c) for c in (equations[0] if equations and isinstance(equations[0][0], list) else equations)]
        generated = generate_coeffs(recurrence_from_ode(p), spec["initials"], _order(spec, N))
        return generated.to_int_series("dfinite")
    raise UsageError(f"Ukjent seriekind: {kind}", field="kind", value=kind)


# ============= BIVARIATE =============

def build_bivariate(spec: Dict[str, Any], N: Optional[int] = None) -> Union[BiSeries, DFiniteSystem]:
    """BiSeries, or a DFiniteSystem left unmaterialized for the pipeline"""
    kind = _kind(spec)
    if kind == "product":
        validate_required_fields(spec, ["g", "h"])
        order = _order(spec, N)
        g = build_series_1d(spec["g"], order)
        h = build_series_1d(spec["h"], order)
        return biseries_from_product(g, h, order, spec.get("convergence_note", ""), spec.get("label", "product"))
    if kind == "table":
        validate_required_fields(spec, ["rows"])
        return BiSeries(tuple(tuple(row) for row in spec["rows"]),
                        spec.get("convergence_note", ""), spec.get("label", "table"))
    if kind == "fixture":
        validate_required_fields(spec, ["name"])
        factory = BISERIES_FIXTURES.get(spec["name"])
        if factory is None:
            raise UsageError(f"Ukjent fixture: {spec['name']}", field="name", value=spec["name"])
        return factory(_order(spec, N))
    if kind == "dfinite":
        validate_required_fields(spec, ["equations", "initials"])
        if len(spec.get("variables", ["z", "w"])) != 2 or len(spec["equations"]) != 2:
            raise UsageError("Bivariat dfinite krever to variabler og to ligninger", field="equations")
        p, q = ([_poly(c) for c in eq] for eq in spec["equations"])
        initials = tuple(tuple(row) for row in spec["initials"])
        return DFiniteSystem(tuple(p), tuple(q), initials, spec.get("label", "dfinite"))
    raise UsageError(f"Ukjent bivariat kind: {kind}", field="kind", value=kind)


def build_biseries(spec: Dict[str, Any], N: Optional[int] = None) -> BiSeries:
    built = build_bivariate(spec, N)
    if isinstance(built, DFiniteSystem):
        return built.coefficient_table(_order(spec, N))
    return built


# ============= FUNCTIONS, CLOUDS, CONTOURS =============

def build_evaluable(spec: Dict[str, Any]) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized g(z) from a rational or polynomial spec with float coefficients"""
    kind = _kind(spec)
    if kind == "rational":
        validate_required_fields(spec, ["numerator", "denominator"])
        num = np.array([float(c) for c in spec["numerator"]])
        den = np.array([float(c) for c in spec["denominator"]])
        return lambda z: np.polynomial.polynomial.polyval(z, num) / np.polynomial.polynomial.polyval(z, den)
    if kind == "polynomial":
        validate_required_fields(spec, ["coeffs"])
        coeffs = np.array([float(c) for c in spec["coeffs"]])
        return lambda z: np.polynomial.polynomial.polyval(z, coeffs) + 0j * np.asarray(z)
    raise UsageError(f"Ukjent funksjonskind: {kind}", field="kind", value=kind)


def _complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    return complex(float(value))


def build_contour(spec: Dict[str, Any]) -> GammaContour:
    validate_required_fields(spec, ["phi", "psi", "s", "delta"])
    return make_gamma(float(spec["phi"]), float(spec["psi"]), float(spec["s"]), float(spec["delta"]))


def build_cloud(spec: Dict[str, Any], density: Optional[float] = None) -> PointCloud:
    """PointCloud from a named generator or explicit points"""
    kind = _kind(spec)
    if kind == "circle":
        cloud = circle_cloud(float(spec.get("radius", 1.0)), int(spec.get("count", 512)),
                             _complex(spec.get("center", 0.0)))
    elif kind == "segment":
        cloud = segment_cloud(_complex(spec.get("a", -1.0)), _complex(spec.get("b", 1.0)),
                              int(spec.get("count", 513)))
    elif kind == "points":
        validate_required_fields(spec, ["points"])
        cloud = points_cloud(spec["points"])
    elif kind == "gamma":
        cloud = sample_contour(build_contour(spec), spec.get("density", density))
    else:
        raise UsageError(f"Ukjent skykind: {kind}", field="kind", value=kind)
    return invert_cloud(cloud) if spec.get("invert") else cloud
