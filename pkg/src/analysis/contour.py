"""
The keyhole contour Γ(δ), Cauchy coefficients over it and the Hankel bound

Γ(δ) is traversed counterclockwise: outer arc of radius s from ψ to φ, radial
segment inward along angle φ, inner arc of radius 1−δ from φ to ψ+2π, radial
segment outward along angle ψ.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import config
from utils.error_handler import (
    BadAngles, BadRadii, NoCertificate, NoM0, QuadratureDivergence, ValidationError, logger,
)

from .capacity import (
    CapacityEstimate, PointCloud, chebyshev_upper_refined, fekete_points, invert_cloud,
    log_vandermonde, transfinite_diameter,
)

Evaluable = Callable[[np.ndarray], np.ndarray]

MAX_PANEL_DOUBLINGS = 10


@dataclass(frozen=True)
class ContourPiece:
    name: str
    z: Callable[[np.ndarray], np.ndarray]
    dz: Callable[[np.ndarray], np.ndarray]
    length: float


@dataclass(frozen=True)
class GammaContour:
    phi: float
    psi: float
    s: float
    delta: float

    @property
    def inner_radius(self) -> float:
        return 1.0 - self.delta

    def pieces(self) -> List[ContourPiece]:
        """The four smooth pieces, each parametrized by t in [0, 1]"""
        phi, psi, s, r = self.phi, self.psi, self.s, self.inner_radius
        outer_span = phi - psi
        inner_span = psi + 2 * np.pi - phi
        e_phi, e_psi = np.exp(1j * phi), np.exp(1j * psi)
        return [
            ContourPiece(
                "outer_arc",
                lambda t: s * np.exp(1j * (psi + t * outer_span)),
                lambda t: 1j * outer_span * s * np.exp(1j * (psi + t * outer_span)),
                s * outer_span,
            ),
            ContourPiece(
                "radial_phi",
                lambda t: (s + t * (r - s)) * e_phi,
                lambda t: (r - s) * e_phi * np.ones_like(t),
                s - r,
            ),
            ContourPiece(
                "inner_arc",
                lambda t: r * np.exp(1j * (phi + t * inner_span)),
                lambda t: 1j * inner_span * r * np.exp(1j * (phi + t * inner_span)),
                r * inner_span,
            ),
            ContourPiece(
                "radial_psi",
                lambda t: (r + t * (s - r)) * e_psi,
                lambda t: (s - r) * e_psi * np.ones_like(t),
                s - r,
            ),
        ]

    def to_dict(self) -> Dict[str, float]:
        return {'phi': self.phi, 'psi': self.psi, 's': self.s, 'delta': self.delta}


def make_gamma(phi: float, psi: float, s: float, delta: float) -> GammaContour:
    """
    Valider og bygg Γ(δ)

    Raises:
        BadAngles: hvis ikke 0 < phi − psi < 2π
        BadRadii: hvis s <= 1 eller delta utenfor [0, 1)
    """
    if not 0.0 < phi - psi < 2 * np.pi:
        raise BadAngles(phi, psi)
    if not s > 1.0:
        raise BadRadii(f"Krever s > 1, fikk s={s}", s)
    if not 0.0 <= delta < 1.0:
        raise BadRadii(f"Krever 0 <= delta < 1, fikk delta={delta}", delta)
    return GammaContour(float(phi), float(psi), float(s), float(delta))


def contour_length(gamma: GammaContour) -> float:
    r = gamma.inner_radius
    return r * (gamma.psi + 2 * np.pi - gamma.phi) + 2 * (gamma.s - r) + gamma.s * (gamma.phi - gamma.psi)


def min_modulus(gamma: GammaContour) -> float:
    return gamma.inner_radius


def sample_contour(gamma: GammaContour, density: Optional[float] = None) -> PointCloud:
    """
    Punkter på Γ med max(2, ceil(density·lengde)) punkter per stykke

    Each piece contributes its start corner and omits its end corner, so every
    corner appears exactly once.
    """
    density = config.density if density is None else density
    if density < config.min_density:
        raise ValidationError(f"Tetthet må være >= {config.min_density}, fikk {density}",
                              field="density", value=density)
    chunks = []
    for piece in gamma.pieces():
        count = max(2, math.ceil(density * piece.length))
        t = np.arange(count) / count
        chunks.append(piece.z(t))
    return PointCloud(np.concatenate(chunks), f"gamma({gamma.phi:.4f}, {gamma.psi:.4f}, {gamma.s}, {gamma.delta})")


# ============= QUADRATURE =============

@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def quadrature_nodes(gamma: GammaContour, panels: int, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes z_q and weights with dz folded in, for composite Gauss rules on every piece"""
    x, w = _gauss_legendre(order)
    nodes, weights = [], []
    for piece in gamma.pieces():
        for k in range(panels):
            t = (k + x) / panels
            nodes.append(piece.z(t))
            weights.append(w / panels * piece.dz(t))
    return np.concatenate(nodes), np.concatenate(weights)


def contour_quadrature(f: Evaluable, gamma: GammaContour, panels: int, order: int) -> complex:
    """∮_Γ f(z) dz with a fixed composite Gauss–Legendre rule"""
    nodes, weights = quadrature_nodes(gamma, panels, order)
    return complex(np.sum(np.asarray(f(nodes), dtype=complex) * weights))


def cauchy_coeff(g: Evaluable, gamma: GammaContour, v: int,
                 tol: Optional[float] = None, order: Optional[int] = None) -> complex:
    """
    (1/2πi) ∮_Γ g(z) z^{−v−1} dz

    Panels per piece are doubled until two successive values agree to
    tol·max(1, |value|).

    Raises:
        QuadratureDivergence: hvis verdien ikke stabiliserer seg
    """
    if v < 0:
        raise ValidationError("v må være >= 0", field="v", value=v)
    tol = config.quad_tol if tol is None else tol
    order = config.gauss_order if order is None else order

    def integrand(z):
        return g(z) / z ** (v + 1)

    panels = 1
    previous = contour_quadrature(integrand, gamma, panels, order) / (2j * np.pi)
    change = np.inf
    for _ in range(MAX_PANEL_DOUBLINGS):
        panels *= 2
        value = contour_quadrature(integrand, gamma, panels, order) / (2j * np.pi)
        change = abs(value - previous)
        if change <= tol * max(1.0, abs(value)):
            return value
        previous = value
    raise QuadratureDivergence(float(change), tol)


# ============= SYMMETRIZATION =============

@dataclass(frozen=True)
class SymmetrizationReport:
    m: int
    direct: complex
    tensor: complex
    residual: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'm': self.m,
            'direct': [self.direct.real, self.direct.imag],
            'tensor': [self.tensor.real, self.tensor.imag],
            'residual': self.residual,
        }


def symmetrization_check(g: Evaluable, gamma: GammaContour, m: int,
                         panels: Optional[int] = None, order: Optional[int] = None) -> SymmetrizationReport:
    """
    (m+1)!·H_m to ganger: determinanten av Cauchy-koeffisientene, og det
    (m+1)-dobbelte konturintegralet av Π g(z_k)/z_k · Π_{j<k}(1/z_j − 1/z_k)²
    """
    if m not in (1, 2):
        raise ValidationError("m må være 1 eller 2", field="m", value=m)
    order = config.gauss_order if order is None else order
    panels = (8 if m == 1 else 4) if panels is None else panels

    coeffs = [cauchy_coeff(g, gamma, v, order=order) for v in range(2 * m + 1)]
    matrix = np.array([[coeffs[i + j] for j in range(m + 1)] for i in range(m + 1)], dtype=complex)
    direct = math.factorial(m + 1) * complex(np.linalg.det(matrix))

    z, w = quadrature_nodes(gamma, panels, order)
    u = 1.0 / z
    weight = np.asarray(g(z), dtype=complex) * u * w
    if m == 1:
        diff = u[:, None] - u[None, :]
        tensor = np.einsum('i,j,ij->', weight, weight, diff ** 2)
    else:
        tensor = 0.0 + 0.0j
        d23 = (u[:, None] - u[None, :]) ** 2
        inner = weight[:, None] * weight[None, :] * d23
        for i in range(len(z)):
            d12 = (u[i] - u) ** 2
            tensor += weight[i] * np.einsum('j,k,jk->', d12, d12, inner)
    tensor = complex(tensor) / (2j * np.pi) ** (m + 1)

    residual = abs(direct - tensor) / max(abs(direct), abs(tensor), 1.0)
    logger.debug(f"Symmetrisering m={m}: direkte {direct}, tensor {tensor}, residual {residual:.3e}")
    return SymmetrizationReport(m, direct, tensor, float(residual))


# ============= BOUND =============

@dataclass(frozen=True)
class BoundInputs:
    L: float
    M: float
    eta: float
    rho: float
    m: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValidationError("L må være > 0", field="L", value=self.L)
        if not self.M >= 0:
            raise ValidationError("M må være >= 0", field="M", value=self.M)
        if not self.eta > 0:
            raise ValidationError("eta må være > 0", field="eta", value=self.eta)
        if not 0 < self.rho < 1:
            raise ValidationError("rho må ligge i (0, 1)", field="rho", value=self.rho)
        if self.m < 1:
            raise ValidationError("m må være >= 1", field="m", value=self.m)


def hankel_bound(b: BoundInputs) -> float:
    """(1/(2π))^{m+1} / (m+1)! · L^{m+1} M^{m+1} η^{−(m+1)} ρ^{m(m+1)}"""
    k = b.m + 1
    return (b.L * b.M / (2 * math.pi * b.eta)) ** k / math.factorial(k) * b.rho ** (b.m * k)


def find_m0(L: float, M: float, eta: float, rho: float, m_max: int) -> int:
    """
    Minste m <= m_max med hankel_bound < 1

    Raises:
        NoM0: hvis ingen m <= m_max gir grense < 1
    """
    for m in range(1, m_max + 1):
        if hankel_bound(BoundInputs(L, M, eta, rho, m)) < 1.0:
            return m
    raise NoM0(m_max)


def estimate_sup_modulus(g_family: Callable[[np.ndarray, float], np.ndarray], gamma: GammaContour,
                         thetas: Sequence[float], density: Optional[float] = None) -> float:
    """Sampled max of |g_θ(z)| over the contour and the given θ values"""
    cloud = sample_contour(gamma, density)
    return float(max(np.max(np.abs(g_family(cloud.points, theta))) for theta in thetas))


# ============= CAPACITY OF ι(Γ) =============

@dataclass(frozen=True, eq=False)
class IotaCertificate:
    contour: GammaContour
    target: float
    estimate: CapacityEstimate
    refined_tau: float
    best_bound: float
    best_family: str
    best_n: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'contour': self.contour.to_dict(),
            'target': self.target,
            'estimate': self.estimate.to_dict(),
            'refined_tau': self.refined_tau,
            'best_bound': self.best_bound,
            'best_family': self.best_family,
            'best_n': self.best_n,
        }

    def to_frame(self) -> pd.DataFrame:
        return self.estimate.to_frame()


def iota_capacity_check(gamma: GammaContour, n_max: int = 40, seed: Optional[int] = None,
                        margin: Optional[float] = None, density: Optional[float] = None) -> IotaCertificate:
    """
    Sertifiser d(ι(Γ)) < 1 − margin

    Every d_n, every Fekete-node bound M_n^{1/n} and the refined Chebyshev
    bound at n_max are upper bounds for the capacity; the smallest one is used.

    Raises:
        NoCertificate: hvis ingen grense kommer under 1 − margin
    """
    margin = config.margin if margin is None else margin
    target = 1.0 - margin
    cloud = invert_cloud(sample_contour(gamma, density))
    estimate = transfinite_diameter(cloud, n_max, seed)
    refined = chebyshev_upper_refined(cloud, n_max) ** (1.0 / n_max)

    candidates = [(d, "fekete_d_n", n) for n, d in zip(estimate.n_values, estimate.d_seq)]
    candidates += [(t, "fekete_node_tau", n) for n, t in zip(estimate.n_values, estimate.tau_upper_seq)]
    candidates.append((refined, "refined_tau", n_max))
    best_bound, family, best_n = min(candidates, key=lambda c: (c[0], c[2]))

    if not best_bound < target:
        logger.warning(f"Ingen kapasitetsgrense under {target} for ι(Γ), beste {best_bound:.6f}")
        raise NoCertificate(float(best_bound), target, n_max)
    logger.info(f"d(ι(Γ)) <= {best_bound:.6f} < {target} ({family}, n={best_n})")
    return IotaCertificate(gamma, target, estimate, float(refined), float(best_bound), family, best_n)


def _gamma_side_exchange(points: np.ndarray, k: int, start: Sequence[int], max_sweeps: int) -> float:
    """
    Σ_{i<j} log|1/z_i − 1/z_j| maximized over k-tuples of Γ samples by single exchanges

    Works on the contour points themselves; each swap changes only the terms of
    the swapped slot.
    """
    recip = 1.0 / points
    chosen = list(start)
    for _ in range(max_sweeps):
        improved = False
        for slot in range(k):
            others = recip[[c for s, c in enumerate(chosen) if s != slot]]
            with np.errstate(divide='ignore'):
                scores = np.sum(np.log(np.abs(recip[:, None] - others[None, :])), axis=1)
            current = chosen[slot]
            best = int(np.argmax(scores))
            if scores[best] > scores[current] + 1e-12:
                chosen[slot] = best
                improved = True
        if not improved:
            break
    return log_vandermonde(recip[chosen])


def vandermonde_bridge(gamma: GammaContour, m: int, seed: Optional[int] = None,
                       density: Optional[float] = None, samples: int = 2000,
                       restarts: int = 8) -> Dict[str, Any]:
    """
    max |Π_{j<k}(1/z_j − 1/z_k)|^{2/(m(m+1))} over tuples on Γ against d_{m+1}(ι(Γ))

    The Γ side is maximized over (m+1)-tuples of contour samples from an evenly
    spread start and `restarts` seeded random starts. The capacity side is the Fekete
    set of the inverted cloud. Both sides maximize the same quantity, so they
    agree up to the resolution of the samples; random tuples stay below both.
    """
    if m < 1:
        raise ValidationError("m må være >= 1", field="m", value=m)
    seed = config.seed if seed is None else seed
    k = m + 1
    cloud = sample_contour(gamma, density)
    points = cloud.points
    if len(points) < k:
        raise ValidationError("For få konturpunkter", field="density", value=len(points))
    exponent = 2.0 / (m * (m + 1))
    rng = np.random.default_rng(seed)

    spread = [int(i) for i in np.linspace(0, len(points), k, endpoint=False)]
    starts = [spread] + [[int(i) for i in rng.choice(len(points), size=k, replace=False)]
                         for _ in range(restarts)]
    gamma_log = max(_gamma_side_exchange(points, k, start, config.fekete_max_sweeps) for start in starts)
    gamma_side = float(np.exp(exponent * gamma_log))

    capacity_side = fekete_points(invert_cloud(cloud), k, seed).d_n

    random_max = 0.0
    for _ in range(samples):
        tuple_points = rng.choice(points, size=k, replace=False)
        random_max = max(random_max, float(np.exp(exponent * log_vandermonde(1.0 / tuple_points))))

    best = max(gamma_side, capacity_side)
    logger.debug(f"Vandermonde-bro m={m}: Γ {gamma_side:.8f}, kapasitet {capacity_side:.8f}")
    return {
        'm': m,
        'gamma_side': gamma_side,
        'capacity_side': capacity_side,
        'relative_difference': abs(gamma_side - capacity_side) / capacity_side,
        'random_max': random_max,
        'random_below_fekete': random_max <= best * (1 + 1e-9),
    }


def claim_chain(gamma: GammaContour, M: float, m_max: int, n_max: int = 40,
                seed: Optional[int] = None, margin: Optional[float] = None,
                density: Optional[float] = None) -> Dict[str, Any]:
    """
    Kapasitetssertifikat → ρ → m0

    ρ is the certified bound plus half the margin. Alongside the ρ-based bound,
    each m with m+1 <= n_max also gets the bound with d_{m+1}(ι(Γ)) in place of ρ,
    the quantity the Vandermonde factor is actually bounded by at that size.
    """
    margin = config.margin if margin is None else margin
    certificate = iota_capacity_check(gamma, n_max, seed, margin, density)
    rho = certificate.best_bound + margin / 2
    L, eta = contour_length(gamma), min_modulus(gamma)
    m0 = find_m0(L, M, eta, rho, m_max)

    d_by_n = dict(zip(certificate.estimate.n_values, certificate.estimate.d_seq))
    rows = []
    for m in range(1, m_max + 1):
        d_next = d_by_n.get(m + 1)
        size_specific = None
        if d_next is not None:
            k = m + 1
            size_specific = (L * M / (2 * math.pi * eta)) ** k / math.factorial(k) * d_next ** (m * k)
        rows.append({
            'm': m,
            'rho_bound': hankel_bound(BoundInputs(L, M, eta, rho, m)),
            'd_next': d_next,
            'size_specific_bound': size_specific,
        })
    size_specific_m0 = next((r['m'] for r in rows
                             if r['size_specific_bound'] is not None and r['size_specific_bound'] < 1.0), None)
    return {
        'certificate': certificate.to_dict(),
        'L': L,
        'M': M,
        'eta': eta,
        'rho': rho,
        'm0': m0,
        'size_specific_m0': size_specific_m0,
        'bounds': rows,
    }
