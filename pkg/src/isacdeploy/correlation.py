"""Distance-weighted steering correlation: the deployment quality metric.

The figure of merit for a deployment is the worst (largest) value of
|a_i^H a_j| * d_ij^alpha over all unordered pairs of coverage-grid points,
where a_i is the unit-norm steering vector of grid point i and d_ij the
inter-point distance. Small values mean every pair of positions, including
far-apart ones, stays distinguishable to the array.

Also provides the covariance-separability identity (the Frobenius distance
between the rank-one covariance contributions of two unit steering vectors)
and the overlap/residual decomposition that underlies the localization error
analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import Deployment, Scenario, coverage_grid, deployment_layout, steering_matrix


class UndefinedCorrelationError(ValueError):
    """Pearson correlation is undefined (an input has zero variance)."""


@dataclass(frozen=True, eq=False)
class GridCodebook:
    """Steering vectors and pair weights of one deployment over the grid.

    grid: (n, 2) coverage-grid points.
    steering: (N*J, n) unit-norm steering columns, one per grid point.
    distance_weights: (n, n) symmetric matrix of d_ij^alpha, zero diagonal.
    """

    grid: np.ndarray
    steering: np.ndarray
    distance_weights: np.ndarray


@dataclass(frozen=True)
class CorrelationReport:
    """Worst grid pair of one deployment: the metric value and its argmax."""

    max_value: float
    arg_pair: tuple[int, int]

    def __post_init__(self):
        if not self.max_value >= 0.0:
            raise ValueError(f"max_value must be >= 0, got {self.max_value!r}")
        i, j = self.arg_pair
        if not 0 <= i < j:
            raise ValueError(f"arg_pair must satisfy 0 <= i < j, got {self.arg_pair!r}")
        object.__setattr__(self, "arg_pair", (int(i), int(j)))


def pairwise_distances(points) -> np.ndarray:
    """Symmetric (n, n) Euclidean distance matrix of planar points."""
    points = np.asarray(points, dtype=float)
    return np.hypot(
        points[:, 0][:, np.newaxis] - points[:, 0][np.newaxis, :],
        points[:, 1][:, np.newaxis] - points[:, 1][np.newaxis, :],
    )


def distance_weights(points, alpha: float) -> np.ndarray:
    """Pair weight matrix d_ij^alpha with an explicitly zeroed diagonal."""
    if not np.isfinite(alpha) or alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    weights = pairwise_distances(points) ** alpha
    np.fill_diagonal(weights, 0.0)
    return weights


def build_codebook(
    deployment: Deployment,
    scenario: Scenario,
    *,
    grid: np.ndarray | None = None,
    weights: np.ndarray | None = None,
) -> GridCodebook:
    """Codebook of one deployment over the scenario coverage grid.

    `grid` and `weights` may be passed in to share them across many
    deployments of the same scenario (they only depend on the scenario);
    provided arrays are used as-is, without copying.
    """
    if grid is None:
        grid = coverage_grid(scenario.region_center, scenario.region_radius, scenario.grid_resolution)
    if weights is None:
        weights = distance_weights(grid, scenario.alpha)
    layout = deployment_layout(deployment, scenario)
    return GridCodebook(
        grid=grid,
        steering=steering_matrix(layout, grid, scenario.wavelength),
        distance_weights=weights,
    )


def weighted_correlation(a_i, a_j, distance: float, alpha: float) -> float:
    """|a_i^H a_j| * distance**alpha for one pair of steering vectors."""
    a_i = np.asarray(a_i)
    a_j = np.asarray(a_j)
    if a_i.shape != a_j.shape or a_i.ndim != 1:
        raise ValueError(f"expected two vectors of equal length, got shapes {a_i.shape} and {a_j.shape}")
    if not np.isfinite(distance) or distance < 0:
        raise ValueError(f"distance must be >= 0, got {distance!r}")
    if not np.isfinite(alpha) or alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    return float(np.abs(np.vdot(a_i, a_j)) * distance**alpha)


@lru_cache(maxsize=8)
def _upper_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached strict upper-triangle index pair of an (n, n) matrix."""
    return np.triu_indices(n, k=1)


def max_weighted_correlation(codebook: GridCodebook) -> CorrelationReport:
    """Worst (largest) weighted correlation over all unordered grid pairs.

    Ties resolve to the lexicographically first (i, j) pair, so the report is
    deterministic for a given codebook.
    """
    n = codebook.steering.shape[1]
    if n < 2:
        raise ValueError(f"need at least two grid points to form a pair, got {n}")
    gram = np.abs(codebook.steering.conj().T @ codebook.steering)
    rows, cols = _upper_pairs(n)
    values = gram[rows, cols] * codebook.distance_weights[rows, cols]
    k = int(np.argmax(values))
    return CorrelationReport(max_value=float(values[k]), arg_pair=(int(rows[k]), int(cols[k])))


def pearson(xs, ys) -> float:
    """Sample Pearson correlation coefficient of two equal-length sequences."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError(f"expected two sequences of equal length, got shapes {xs.shape} and {ys.shape}")
    if xs.size < 2:
        raise ValueError(f"need at least two samples, got {xs.size}")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise UndefinedCorrelationError("correlation is undefined for a constant sequence")
    return float(np.clip((dx @ dy) / np.sqrt(sx * sy), -1.0, 1.0))


def _require_unit(v, name: str) -> np.ndarray:
    v = np.asarray(v)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"{name} must have unit norm, got norm {norm!r}")
    return v


def frobenius_separability(a_i, a_j, source_power: float) -> float:
    """Frobenius distance between the rank-one covariance terms of two targets.

    For unit-norm steering vectors the distance has the closed form
    source_power * sqrt(2 * (1 - |a_i^H a_j|^2)): it is maximal for orthogonal
    steering vectors and vanishes as they align, which is what ties covariance
    separability to the correlation metric.
    """
    a_i = _require_unit(a_i, "a_i")
    a_j = _require_unit(a_j, "a_j")
    if not source_power > 0:
        raise ValueError(f"source_power must be positive, got {source_power!r}")
    overlap_sq = float(np.abs(np.vdot(a_i, a_j)) ** 2)
    return float(source_power * np.sqrt(2.0 * max(0.0, 1.0 - overlap_sq)))


def overlap_decompose(a, b) -> tuple[complex, np.ndarray]:
    """Split unit vector b into its component along unit vector a plus residual.

    Returns (coefficient, residual) with b = coefficient * a + residual,
    coefficient = a^H b, and residual orthogonal to a with squared norm
    1 - |coefficient|^2.
    """
    a = _require_unit(a, "a")
    b = _require_unit(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"vectors must have equal shape, got {a.shape} and {b.shape}")
    coefficient = complex(np.vdot(a, b))
    return coefficient, b - coefficient * a
