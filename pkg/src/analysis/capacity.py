"""
Transfinite diameter and Chebyshev constant of planar point clouds

All products of distances are handled as sums of logarithms. Ties between
candidates are resolved with an absolute tolerance on log values and then by
lowest cloud index, so a scaled copy of a cloud selects the same indices.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config import config
from utils.error_handler import DuplicateNodes, TooFewPoints, ValidationError, logger

LOG_TIE_TOL = 1e-9
_CHUNK = 512


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Finite discretization of a compact set K in the plane"""

    points: np.ndarray
    label: str = ""

    def __post_init__(self):
        points = np.asarray(self.points, dtype=complex).ravel()
        if points.size == 0:
            raise ValidationError("Punktskyen er tom", field="points")
        if not np.all(np.isfinite(points)):
            raise ValidationError("Punktskyen inneholder ikke-endelige koordinater", field="points")
        _, first = np.unique(points, return_index=True)
        points = points[np.sort(first)]
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return int(self.points.size)

    def scaled(self, c: complex) -> "PointCloud":
        return PointCloud(c * self.points, f"{c}*{self.label}")

    def centroid(self) -> complex:
        return complex(np.mean(self.points))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'re': self.points.real, 'im': self.points.imag})


# ============= GENERATORS =============

def circle_cloud(radius: float = 1.0, count: int = 512, center: complex = 0.0) -> PointCloud:
    if radius <= 0 or count < 1:
        raise ValidationError("Sirkelen trenger radius > 0 og minst ett punkt", field="circle")
    t = 2 * np.pi * np.arange(count) / count
    return PointCloud(center + radius * np.exp(1j * t), f"circle(r={radius})")


def segment_cloud(a: complex = -1.0, b: complex = 1.0, count: int = 513) -> PointCloud:
    if count < 2 or a == b:
        raise ValidationError("Segmentet trenger to ulike endepunkter og minst to punkter", field="segment")
    return PointCloud(np.linspace(a, b, count).astype(complex), f"segment({a}, {b})")


def points_cloud(pairs: Sequence[Sequence[float]], label: str = "points") -> PointCloud:
    """Cloud from [re, im] pairs"""
    try:
        values = [complex(float(re), float(im)) for re, im in pairs]
    except (TypeError, ValueError):
        raise ValidationError("Punkter må være [re, im]-par", field="points")
    return PointCloud(np.array(values, dtype=complex), label)


def invert_cloud(cloud: PointCloud) -> PointCloud:
    """Image of a cloud under ι(z) = 1/z"""
    if np.any(cloud.points == 0):
        raise ValidationError("ι(z) = 1/z er ikke definert i 0", field="points")
    return PointCloud(1.0 / cloud.points, f"iota({cloud.label})")


# ============= LOG-SPACE HELPERS =============

def _log_abs(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide='ignore'):
        return np.log(np.abs(x))


def _first_near_max(values: np.ndarray, tol: float = LOG_TIE_TOL) -> int:
    """Lowest index whose value is within tol of the maximum"""
    best = np.max(values)
    return int(np.flatnonzero(values >= best - tol)[0])


def log_vandermonde(points: np.ndarray) -> float:
    """Σ_{i<j} log|z_i − z_j|"""
    points = np.asarray(points, dtype=complex)
    total = 0.0
    for i in range(len(points) - 1):
        total += float(np.sum(_log_abs(points[i] - points[i + 1:])))
    return total


def diameter_pair(cloud: PointCloud) -> tuple:
    """Indices (i, j), i < j, of a farthest pair, row-chunked"""
    p = cloud.points
    if len(p) < 2:
        raise TooFewPoints(len(p), 2)
    row_best = np.empty(len(p))
    for start in range(0, len(p), _CHUNK):
        block = np.abs(p[start:start + _CHUNK, None] - p[None, :])
        row_best[start:start + _CHUNK] = np.max(block, axis=1)
    i = _first_near_max(_log_abs(row_best))
    candidates = _log_abs(p[i] - p)
    j = _first_near_max(candidates)
    return (i, j) if i < j else (j, i)


def greedy_init(cloud: PointCloud, n: int, pair: Optional[tuple] = None) -> List[int]:
    """Diameter pair, then repeatedly the point farthest (max-min) from those chosen"""
    i, j = diameter_pair(cloud) if pair is None else pair
    chosen = [i, j]
    nearest = np.minimum(_log_abs(cloud.points - cloud.points[i]), _log_abs(cloud.points - cloud.points[j]))
    while len(chosen) < n:
        k = _first_near_max(nearest)
        chosen.append(k)
        nearest = np.minimum(nearest, _log_abs(cloud.points - cloud.points[k]))
    return chosen[:n]


# ============= FEKETE POINTS =============

@dataclass(frozen=True, eq=False)
class FeketeSet:
    indices: tuple
    points: np.ndarray
    log_v: float
    sweeps: int
    converged: bool

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def vandermonde(self) -> float:
        return float(np.exp(self.log_v))

    @property
    def d_n(self) -> float:
        n = self.n
        return float(np.exp(2.0 * self.log_v / (n * (n - 1))))


def fekete_points(K: PointCloud, n: int, seed: Optional[int] = None,
                  initial: Optional[Sequence[int]] = None,
                  max_sweeps: Optional[int] = None, tol: float = LOG_TIE_TOL) -> FeketeSet:
    """
    Lokalt maksimal n-punktsmengde for Π|z_i − z_j| under enkeltbytter

    Args:
        K: Punktsky
        n: Antall punkter (>= 2)
        seed: Frø for rekkefølgen posisjonene besøkes i
        initial: Startindekser (ellers grådig fra diameterparet)
        max_sweeps: Maks antall sveip
        tol: Minste log-gevinst som regnes som forbedring

    Returns:
        FeketeSet med indekser, punkter og log V_n

    Raises:
        TooFewPoints: hvis skyen har færre enn n punkter
    """
    if n < 2:
        raise ValidationError("n må være >= 2", field="n", value=n)
    if len(K) < n:
        raise TooFewPoints(len(K), n)
    seed = config.seed if seed is None else seed
    sweeps_cap = config.fekete_max_sweeps if max_sweeps is None else max_sweeps

    chosen = list(initial) if initial is not None else greedy_init(K, n)
    if len(chosen) != n or len(set(chosen)) != n:
        raise ValidationError("Startmengden må ha n ulike indekser", field="initial", value=list(chosen))

    p = K.points
    rows = np.vstack([_log_abs(p - p[k]) for k in chosen])
    rng = np.random.default_rng(seed)

    sweeps = 0
    converged = False
    while sweeps < sweeps_cap:
        sweeps += 1
        improved = False
        total = rows.sum(axis=0)
        for pos in rng.permutation(n):
            current = chosen[pos]
            with np.errstate(invalid='ignore'):
                gains = total - rows[pos]
            own = float(np.sum(np.delete(rows[:, current], pos)))
            gains[current] = own
            gains = np.where(np.isnan(gains), -np.inf, gains)
            best = _first_near_max(gains, tol)
            if best != current and gains[best] > own + tol:
                chosen[pos] = best
                rows[pos] = _log_abs(p - p[best])
                total = rows.sum(axis=0)
                improved = True
        if not improved:
            converged = True
            break

    if not converged:
        logger.warning(f"Fekete-utveksling nådde {sweeps_cap} sveip uten fikspunkt (n={n})")
    selected = p[chosen]
    return FeketeSet(tuple(chosen), selected, log_vandermonde(selected), sweeps, converged)


# ============= CHEBYSHEV BOUNDS =============

def _log_sup_of_nodes(K: PointCloud, nodes: np.ndarray) -> float:
    acc = np.zeros(len(K))
    for node in nodes:
        acc += _log_abs(K.points - node)
    return float(np.max(acc))


def chebyshev_upper(K: PointCloud, n: int, nodes: Sequence[complex]) -> float:
    """
    max over K of |Π (z − node_i)|, an upper bound for M_n(K)

    Raises:
        DuplicateNodes: hvis nodene ikke er distinkte
    """
    nodes = np.asarray(nodes, dtype=complex).ravel()
    if len(nodes) != n:
        raise ValidationError(f"Forventet {n} noder, fikk {len(nodes)}", field="nodes", value=len(nodes))
    duplicates = len(nodes) - len(np.unique(nodes))
    if duplicates:
        raise DuplicateNodes(duplicates)
    return float(np.exp(_log_sup_of_nodes(K, nodes)))


def _weighted_monic_log_values(z: np.ndarray, weights: np.ndarray, n: int) -> tuple:
    """
    Values on the cloud of the weighted least-squares monic polynomial of degree n

    Built by Arnoldi orthogonalization, so the polynomial is never expanded in
    monomials. Returns (log scale, values of the orthonormal n-th basis vector);
    the monic polynomial equals exp(log scale) times those values.
    """
    sqrt_w = np.sqrt(weights)
    norm0 = np.sqrt(np.sum(weights))
    basis = [np.ones_like(z) / norm0]
    log_scale = float(np.log(norm0))
    for _ in range(n):
        v = z * basis[-1]
        for _ in range(2):
            for q in basis:
                v = v - np.vdot(sqrt_w * q, sqrt_w * v) * q
        h = float(np.sqrt(np.sum(weights * np.abs(v) ** 2)))
        if h == 0.0:
            return -np.inf, np.zeros_like(z)
        basis.append(v / h)
        log_scale += np.log(h)
    return log_scale, basis[-1]


def chebyshev_upper_refined(K: PointCloud, n: int, iterations: Optional[int] = None) -> float:
    """
    Sup over K of a monic degree-n polynomial improved by Lawson reweighting

    Starts from the least-squares monic polynomial on the cloud and reweights
    w_i ← w_i·|p(z_i)|; the smallest sup seen is returned. Every iterate is monic,
    so the result is an upper bound for M_n(K).
    """
    if n < 1:
        raise ValidationError("n må være >= 1", field="n", value=n)
    if len(K) <= n:
        raise TooFewPoints(len(K), n + 1)
    steps = config.lawson_iterations if iterations is None else iterations
    scale = float(np.max(np.abs(K.points - K.centroid())))
    z = (K.points - K.centroid()) / scale
    weights = np.full(len(z), 1.0 / len(z))

    best_log = np.inf
    for _ in range(max(1, steps)):
        log_scale, values = _weighted_monic_log_values(z, weights, n)
        magnitudes = np.abs(values)
        peak = float(np.max(magnitudes))
        if peak == 0.0 or not np.isfinite(log_scale):
            break
        best_log = min(best_log, log_scale + np.log(peak))
        weights = weights * magnitudes
        total = float(np.sum(weights))
        if total == 0.0 or not np.isfinite(total):
            break
        weights = weights / total
    return float(np.exp(best_log + n * np.log(scale)))


# ============= ESTIMATES =============

@dataclass(frozen=True, eq=False)
class CapacityEstimate:
    n_values: tuple
    d_seq: tuple
    tau_upper_seq: tuple
    d_upper: float
    monotonicity_flags: tuple = ()
    fekete_sets: tuple = field(default=(), repr=False)

    @property
    def tau_upper(self) -> float:
        return min(self.tau_upper_seq)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_values': list(self.n_values),
            'd_seq': list(self.d_seq),
            'tau_upper_seq': list(self.tau_upper_seq),
            'd_upper': self.d_upper,
            'monotonicity_flags': list(self.monotonicity_flags),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'n': list(self.n_values),
            'd_n': list(self.d_seq),
            'tau_upper': list(self.tau_upper_seq),
            'monotone_flag': [n in self.monotonicity_flags for n in self.n_values],
        })


def transfinite_diameter(K: PointCloud, n_max: int, seed: Optional[int] = None,
                         n_min: int = 2, monotone_tol: Optional[float] = None) -> CapacityEstimate:
    """
    d_n = V_n^{2/(n(n−1))} for n = n_min..n_max fra Fekete-punkter

    Any d_{n+1} > d_n + tol is flagged as an optimizer shortfall and kept as is.
    tau_upper_seq holds the n-th roots of the Fekete-node Chebyshev bounds.
    """
    if n_max < 2 or n_min < 2 or n_min > n_max:
        raise ValidationError(f"Ugyldig n-område [{n_min}, {n_max}]", field="n_max", value=n_max)
    if len(K) < n_max:
        raise TooFewPoints(len(K), n_max)
    tol = config.monotone_tol if monotone_tol is None else monotone_tol

    pair = diameter_pair(K)
    n_values, d_seq, tau_seq, sets, flags = [], [], [], [], []
    for n in range(n_min, n_max + 1):
        fekete = fekete_points(K, n, seed, initial=greedy_init(K, n, pair))
        d_n = fekete.d_n
        tau_n = float(np.exp(_log_sup_of_nodes(K, fekete.points) / n))
        if d_seq and d_n > d_seq[-1] + tol:
            logger.warning(f"d_{n} = {d_n:.9f} > d_{n - 1} = {d_seq[-1]:.9f} (optimeringsmangel)")
            flags.append(n)
        logger.debug(f"{K.label}: d_{n} = {d_n:.9f}, tau_{n} <= {tau_n:.9f}")
        n_values.append(n)
        d_seq.append(d_n)
        tau_seq.append(tau_n)
        sets.append(fekete)

    return CapacityEstimate(tuple(n_values), tuple(d_seq), tuple(tau_seq), min(d_seq),
                            tuple(flags), tuple(sets))


@dataclass(frozen=True)
class ConsistencyReport:
    n_max: int
    d_final: float
    tau_final: float
    tau_refined: float
    gap: float
    tau_below_d: bool

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def d_tau_consistency(K: PointCloud, n_max: int, seed: Optional[int] = None) -> ConsistencyReport:
    """Final d_n against the Fekete-node and refined Chebyshev upper bounds"""
    if n_max < 4:
        raise ValidationError("n_max må være >= 4", field="n_max", value=n_max)
    estimate = transfinite_diameter(K, n_max, seed)
    d_final = estimate.d_seq[-1]
    tau_final = estimate.tau_upper_seq[-1]
    tau_refined = chebyshev_upper_refined(K, n_max) ** (1.0 / n_max)
    report = ConsistencyReport(n_max, d_final, tau_final, tau_refined,
                               abs(d_final - tau_final), tau_final < estimate.d_upper)
    logger.info(f"{K.label}: d_{n_max} = {d_final:.6f}, tau_{n_max} <= {tau_final:.6f}, gap {report.gap:.3e}")
    return report
