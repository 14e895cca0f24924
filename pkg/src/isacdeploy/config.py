"""Strict JSON configuration for the experiment harness.

A config document is a single JSON object with up to three blocks mirroring
the library types: "scenario" (physical/simulation parameters), "ga"
(optimizer hyper-parameters), and "experiment" (what to run: kind, master
seed, ensemble sizes, sweep lists). Every block is optional and defaults to
the reference settings; unknown keys are errors so typos fail fast instead of
silently running the wrong experiment.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from .ga import GaParams
from .geometry import Deployment, NodePose, Scenario

EXPERIMENT_KINDS = ("optimize", "montecarlo", "alpha-sweep", "snr-sweep", "node-sweep", "evaluate")

_MAX_SEED = 2**64 - 1


class ConfigError(ValueError):
    """A configuration document is malformed or inconsistent."""


@dataclass(frozen=True)
class ExperimentSettings:
    """What to run and at what scale.

    The ensemble defaults are desk-scale (200 random deployments, 50 Monte
    Carlo trials per grid point); larger studies raise them via config.
    `music` toggles Monte Carlo localization where it is optional.
    """

    kind: str
    seed: int = 0
    random_deployment_count: int = 200
    trials_per_point: int = 50
    alpha_values: tuple[float, ...] = (0.01, 0.05, 0.1, 0.2)
    snr_values_db: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
    node_counts: tuple[int, ...] = (2, 3, 4, 5)
    music: bool = True

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"kind must be one of {EXPERIMENT_KINDS}, got {self.kind!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed <= _MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        for name in ("random_deployment_count", "trials_per_point"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
        alphas = tuple(float(a) for a in self.alpha_values)
        if not alphas or any(not np.isfinite(a) or a < 0 for a in alphas):
            raise ValueError(f"alpha_values must be a non-empty list of values >= 0, got {self.alpha_values!r}")
        snrs = tuple(float(s) for s in self.snr_values_db)
        if not snrs or any(not np.isfinite(s) for s in snrs):
            raise ValueError(f"snr_values_db must be a non-empty list of finite values, got {self.snr_values_db!r}")
        nodes = tuple(self.node_counts)
        if not nodes or any(not isinstance(j, int) or isinstance(j, bool) or j < 1 for j in nodes):
            raise ValueError(f"node_counts must be a non-empty list of integers >= 1, got {self.node_counts!r}")
        if not isinstance(self.music, bool):
            raise ValueError(f"music must be a boolean, got {self.music!r}")
        object.__setattr__(self, "alpha_values", alphas)
        object.__setattr__(self, "snr_values_db", snrs)
        object.__setattr__(self, "node_counts", nodes)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved configuration: scenario + optimizer + experiment plan."""

    scenario: Scenario
    ga: GaParams
    experiment: ExperimentSettings


def _build_section(data, cls, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object, got {type(data).__name__}")
    valid = {f.name for f in fields(cls)}
    for key in data:
        if key not in valid:
            raise ConfigError(f"{path}.{key}: unknown key (valid keys: {', '.join(sorted(valid))})")
    kwargs = {}
    for key, value in data.items():
        if isinstance(value, bool) and key != "music":
            raise ConfigError(f"{path}.{key}: expected a number, got a boolean")
        if isinstance(value, list):
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def parse_config(document, expected_kind: str | None = None) -> ExperimentConfig:
    """Build a config from a parsed JSON document, validating strictly.

    `expected_kind` (the CLI subcommand) fills a missing experiment.kind and
    must match an explicit one; without it the document must name the kind.
    """
    if not isinstance(document, dict):
        raise ConfigError(f"top level must be a JSON object, got {type(document).__name__}")
    for key in document:
        if key not in ("scenario", "ga", "experiment"):
            raise ConfigError(f"{key}: unknown top-level key (valid keys: experiment, ga, scenario)")
    scenario = _build_section(document.get("scenario", {}), Scenario, "scenario")
    ga = _build_section(document.get("ga", {}), GaParams, "ga")
    experiment_block = document.get("experiment", {})
    if not isinstance(experiment_block, dict):
        raise ConfigError(f"experiment: expected a JSON object, got {type(experiment_block).__name__}")
    experiment_data = dict(experiment_block)
    kind = experiment_data.get("kind", expected_kind)
    if kind is None:
        raise ConfigError("experiment.kind: required (or implied by the CLI subcommand)")
    if expected_kind is not None and kind != expected_kind:
        raise ConfigError(f"experiment.kind: config says {kind!r} but the command is {expected_kind!r}")
    experiment_data["kind"] = kind
    experiment = _build_section(experiment_data, ExperimentSettings, "experiment")
    return ExperimentConfig(scenario=scenario, ga=ga, experiment=experiment)


def load_config(path, expected_kind: str | None = None) -> ExperimentConfig:
    """Parse a config file, turning JSON syntax errors into located diagnostics."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_config(document, expected_kind=expected_kind)


def with_seed(config: ExperimentConfig, seed: int) -> ExperimentConfig:
    """Copy of the config with the master seed replaced (CLI --seed override)."""
    return replace(config, experiment=replace(config.experiment, seed=seed))


def config_to_dict(config: ExperimentConfig) -> dict:
    """Effective configuration as a JSON-serializable document (all defaults
    resolved, including the derived element spacing)."""
    scenario = asdict(config.scenario)
    scenario["region_center"] = list(config.scenario.region_center)
    return {
        "scenario": scenario,
        "ga": asdict(config.ga),
        "experiment": asdict(config.experiment),
    }


def deployment_to_dict(deployment: Deployment) -> dict:
    """Deployment as the on-disk JSON shape {"poses": [{x, y, theta}, ...]}."""
    return {"poses": [{"x": p.x, "y": p.y, "theta": p.theta} for p in deployment.poses]}


def parse_deployment(document) -> Deployment:
    """Build a deployment from a parsed JSON document, validating strictly."""
    if not isinstance(document, dict) or set(document) != {"poses"}:
        raise ConfigError('deployment document must be exactly {"poses": [...]}')
    poses = document["poses"]
    if not isinstance(poses, list) or not poses:
        raise ConfigError("poses must be a non-empty list")
    built = []
    for index, pose in enumerate(poses):
        if not isinstance(pose, dict) or set(pose) != {"x", "y", "theta"}:
            raise ConfigError(f"poses[{index}]: each pose needs exactly the keys x, y, theta")
        values = {}
        for key in ("x", "y", "theta"):
            value = pose[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"poses[{index}].{key}: expected a number, got {value!r}")
            values[key] = float(value)
        try:
            built.append(NodePose(**values))
        except ValueError as exc:
            raise ConfigError(f"poses[{index}]: {exc}") from exc
    return Deployment(tuple(built))


def load_deployment(path) -> Deployment:
    """Parse a deployment JSON file with located syntax diagnostics."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_deployment(document)
