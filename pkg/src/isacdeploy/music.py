"""Subspace-based single-target localization over the coverage grid.

The localizer eigendecomposes the sample covariance, keeps the eigenvectors
of the smallest N*J - 1 eigenvalues as the noise subspace, scores every grid
point by the projected power of its steering vector onto that subspace, and
picks the minimizer (equivalent to the classic pseudo-spectrum argmax, but
free of the division by a value that is zero at exact orthogonality).

Monte Carlo RMSE maps draw per-grid-point child streams from the caller's
generator, so identically seeded generators give common random numbers
across deployments and SNR levels - paired comparisons see the same noise.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .correlation import GridCodebook, build_codebook
from .geometry import Deployment, Scenario
from .signals import PowerLevels, complex_normal, snr_to_powers


@dataclass(frozen=True, eq=False)
class NoiseSubspace:
    """Orthonormal basis of the noise subspace, shape (N*J, N*J - num_sources)."""

    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis)
        if basis.ndim != 2 or not 1 <= basis.shape[1] < basis.shape[0]:
            raise ValueError(f"basis must be a tall (M, M-K) matrix, got shape {basis.shape}")
        gram = basis.conj().T @ basis
        if not np.allclose(gram, np.eye(basis.shape[1]), atol=1e-10):
            raise ValueError("basis columns must be orthonormal")
        object.__setattr__(self, "basis", basis)


@dataclass(frozen=True, eq=False)
class LocalizationStats:
    """Per-grid-point localization RMSE (grid order) and its network-wide max."""

    per_point_rmse: np.ndarray
    max_rmse: float
    trials_per_point: int

    def __post_init__(self):
        rmse = np.asarray(self.per_point_rmse, dtype=float)
        if rmse.ndim != 1 or rmse.size < 1:
            raise ValueError("per_point_rmse must be a non-empty 1-D array")
        if not np.all(rmse >= 0.0):
            raise ValueError("RMSE entries must be >= 0")
        if self.max_rmse != float(np.max(rmse)):
            raise ValueError(
                f"max_rmse {self.max_rmse!r} does not equal the largest per-point value {np.max(rmse)!r}"
            )
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        object.__setattr__(self, "per_point_rmse", rmse)


def noise_subspace(cov, num_sources: int) -> NoiseSubspace:
    """Eigenvectors of the smallest N*J - num_sources eigenvalues of cov."""
    cov = np.asarray(cov)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError(f"covariance must be square, got shape {cov.shape}")
    if not np.all(np.isfinite(cov.real)) or not np.all(np.isfinite(cov.imag)):
        raise ValueError("covariance must be finite")
    scale = max(1.0, float(np.max(np.abs(cov))))
    if not np.allclose(cov, cov.conj().T, atol=1e-10 * scale):
        raise ValueError("covariance must be Hermitian")
    m = cov.shape[0]
    if not 1 <= num_sources < m:
        raise ValueError(f"num_sources must be in [1, {m - 1}], got {num_sources!r}")
    _, vectors = np.linalg.eigh(cov)  # ascending eigenvalues
    return NoiseSubspace(basis=vectors[:, : m - num_sources])


def music_scores(subspace: NoiseSubspace, codebook: GridCodebook) -> np.ndarray:
    """Noise-projected power of every grid point's steering vector, in [0, 1]."""
    if subspace.basis.shape[0] != codebook.steering.shape[0]:
        raise ValueError(
            f"subspace dimension {subspace.basis.shape[0]} does not match "
            f"codebook dimension {codebook.steering.shape[0]}"
        )
    projections = subspace.basis.conj().T @ codebook.steering
    return np.sum(projections.real**2 + projections.imag**2, axis=0)


def localize(cov, codebook: GridCodebook) -> np.ndarray:
    """Grid point minimizing the noise-projected power (ties: lowest index)."""
    scores = music_scores(noise_subspace(cov, 1), codebook)
    return codebook.grid[int(np.argmin(scores))].copy()


def _point_rmse(
    codebook: GridCodebook, index: int, snapshots: int, trials: int, powers: PowerLevels, rng
) -> float:
    """RMSE of `trials` batched localizations of the target at grid point `index`.

    Stream order per point: one source block (trials, T), then one noise block
    (trials, M, T); matches the single-trial snapshot layout with the trial
    axis stacked in front.
    """
    m, n = codebook.steering.shape
    a = codebook.steering[:, index]
    sources = complex_normal(rng, (trials, snapshots), powers.signal_power)
    noise = complex_normal(rng, (trials, m, snapshots), powers.noise_power)
    batch = a[np.newaxis, :, np.newaxis] * sources[:, np.newaxis, :] + noise
    covs = batch @ batch.conj().transpose(0, 2, 1) / snapshots
    covs = 0.5 * (covs + covs.conj().transpose(0, 2, 1))
    _, vectors = np.linalg.eigh(covs)
    bases = vectors[:, :, : m - 1]
    projections = bases.conj().transpose(0, 2, 1) @ codebook.steering
    scores = np.sum(projections.real**2 + projections.imag**2, axis=1)
    estimates = np.argmin(scores, axis=1)
    squared_error = np.sum((codebook.grid[estimates] - codebook.grid[index]) ** 2, axis=1)
    return float(np.sqrt(np.mean(squared_error)))


def rmse_map(
    deployment: Deployment,
    scenario: Scenario,
    trials: int,
    rng: np.random.Generator,
    *,
    powers: PowerLevels | None = None,
    threads: int = 1,
) -> LocalizationStats:
    """Monte Carlo localization RMSE at every coverage-grid point.

    Each grid point gets its own child stream spawned from `rng` in grid
    order, so results are reproducible for a given seed, independent of
    `threads`, and use common random numbers across deployments.
    `powers` overrides the scenario SNR (e.g. a zero noise power).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads!r}")
    if powers is None:
        powers = snr_to_powers(scenario.snr_db)
    codebook = build_codebook(deployment, scenario)
    n = len(codebook.grid)
    streams = rng.spawn(n)
    per_point = np.empty(n)

    def run_point(i: int) -> None:
        per_point[i] = _point_rmse(codebook, i, scenario.snapshot_count, trials, powers, streams[i])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_point, range(n)))
    else:
        for i in range(n):
            run_point(i)
    return LocalizationStats(
        per_point_rmse=per_point, max_rmse=float(np.max(per_point)), trials_per_point=trials
    )
