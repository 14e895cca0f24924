"""Cooperative array node deployment optimization.

Places and orients antenna-array nodes so that a coverage region can be
localized robustly: a distance-weighted steering-vector correlation scores
how confusable grid points are, a real-coded genetic algorithm minimizes the
worst-case score, and a MUSIC Monte Carlo simulator validates the resulting
deployments against baselines and random placements.
"""

from isacdeploy.config import (
    EXPERIMENT_KINDS,
    ConfigError,
    ExperimentConfig,
    ExperimentSettings,
    config_to_dict,
    deployment_to_dict,
    load_config,
    load_deployment,
    parse_config,
    parse_deployment,
    with_seed,
)
from isacdeploy.correlation import (
    CorrelationReport,
    GridCodebook,
    UndefinedCorrelationError,
    build_codebook,
    distance_weights,
    frobenius_separability,
    max_weighted_correlation,
    overlap_decompose,
    pairwise_distances,
    pearson,
    weighted_correlation,
)
from isacdeploy.experiments import (
    InfeasibleDeploymentError,
    ResultBundle,
    Table,
    derived_rng,
    run_alpha_sweep,
    run_evaluate,
    run_experiment,
    run_montecarlo,
    run_node_sweep,
    run_optimize,
    run_snr_sweep,
)
from isacdeploy.ga import (
    GaParams,
    GaResult,
    GeneBounds,
    decode_chromosome,
    deployment_bounds,
    encode_deployment,
    fitness,
    polynomial_mutation,
    project_feasible,
    run_ga,
    sbx_crossover,
    tournament_select,
)
from isacdeploy.geometry import (
    SPEED_OF_LIGHT,
    DegenerateGeometryError,
    Deployment,
    NodePose,
    Scenario,
    UnsupportedConfigurationError,
    antenna_positions,
    coverage_grid,
    deployment_layout,
    deployment_violations,
    midpoint_baseline,
    random_deployment,
    steering_matrix,
    steering_vector,
    wavelength_of,
    wrap_angle,
)
from isacdeploy.music import (
    LocalizationStats,
    NoiseSubspace,
    localize,
    music_scores,
    noise_subspace,
    rmse_map,
)
from isacdeploy.signals import (
    PowerLevels,
    complex_normal,
    generate_snapshots,
    sample_covariance,
    snr_to_powers,
)

__version__ = "0.1.0"

__all__ = [
    "EXPERIMENT_KINDS",
    "SPEED_OF_LIGHT",
    "ConfigError",
    "CorrelationReport",
    "DegenerateGeometryError",
    "Deployment",
    "ExperimentConfig",
    "ExperimentSettings",
    "GaParams",
    "GaResult",
    "GeneBounds",
    "GridCodebook",
    "InfeasibleDeploymentError",
    "LocalizationStats",
    "NodePose",
    "NoiseSubspace",
    "PowerLevels",
    "ResultBundle",
    "Scenario",
    "Table",
    "UndefinedCorrelationError",
    "UnsupportedConfigurationError",
    "antenna_positions",
    "build_codebook",
    "complex_normal",
    "config_to_dict",
    "coverage_grid",
    "decode_chromosome",
    "deployment_bounds",
    "deployment_layout",
    "deployment_to_dict",
    "deployment_violations",
    "derived_rng",
    "distance_weights",
    "encode_deployment",
    "fitness",
    "frobenius_separability",
    "generate_snapshots",
    "load_config",
    "load_deployment",
    "localize",
    "max_weighted_correlation",
    "midpoint_baseline",
    "music_scores",
    "noise_subspace",
    "overlap_decompose",
    "pairwise_distances",
    "parse_config",
    "parse_deployment",
    "pearson",
    "polynomial_mutation",
    "project_feasible",
    "random_deployment",
    "rmse_map",
    "run_alpha_sweep",
    "run_evaluate",
    "run_experiment",
    "run_ga",
    "run_montecarlo",
    "run_node_sweep",
    "run_optimize",
    "run_snr_sweep",
    "sample_covariance",
    "sbx_crossover",
    "snr_to_powers",
    "steering_matrix",
    "steering_vector",
    "tournament_select",
    "wavelength_of",
    "weighted_correlation",
    "with_seed",
    "wrap_angle",
]
