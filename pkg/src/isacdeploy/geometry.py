"""Deployment geometry: node poses, ULA element placement, spherical-wavefront
steering vectors, and the coverage grid.

Everything is planar. A deployment is a set of J nodes, each an N-element
uniform linear array described by a pose (x, y, theta): the array phase
center plus the orientation of the element line. Steering vectors use the
spherical-wavefront (range-dependent) phase model, so they distinguish
positions rather than just directions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
"""Exact SI propagation speed (m/s) for frequency/wavelength conversion."""

TWO_PI = 2.0 * np.pi


class DegenerateGeometryError(ValueError):
    """A target position coincides with an antenna element (zero range)."""


class UnsupportedConfigurationError(ValueError):
    """The operation is not defined for this scenario configuration."""


def wavelength_of(frequency: float) -> float:
    """Carrier wavelength in meters for a frequency in Hz."""
    if not np.isfinite(frequency) or frequency <= 0.0:
        raise ValueError(f"carrier frequency must be positive and finite, got {frequency!r}")
    return SPEED_OF_LIGHT / frequency


def wrap_angle(theta):
    """Wrap an angle (scalar or array, radians) into [0, 2*pi)."""
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("angles must be finite")
    wrapped = np.mod(arr, TWO_PI)
    # np.mod may round up to exactly 2*pi for tiny negative inputs
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if arr.ndim == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class Scenario:
    """Physical and simulation parameters shared across the package.

    Defaults reproduce the reference setup: a 2.4 GHz carrier, three
    four-element half-wavelength ULAs deployed inside the incircle of a
    30 m equilateral triangle, a 1 m coverage lattice, 0 dB SNR with 200
    snapshots, and distance-weight exponent alpha = 0.05.
    """

    carrier_frequency: float = 2.4e9
    antennas_per_node: int = 4
    node_count: int = 3
    region_radius: float = 30.0 / (2.0 * np.sqrt(3.0))
    region_center: tuple[float, float] = (0.0, 0.0)
    grid_resolution: float = 1.0
    snr_db: float = 0.0
    snapshot_count: int = 200
    alpha: float = 0.05
    element_spacing: float | None = None

    def __post_init__(self):
        if not np.isfinite(self.carrier_frequency) or self.carrier_frequency <= 0:
            raise ValueError("carrier_frequency must be positive")
        for name in ("antennas_per_node", "node_count", "snapshot_count"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
            object.__setattr__(self, name, int(value))
        for name in ("region_radius", "grid_resolution"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive, got {value!r}")
        if not np.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")
        center = tuple(float(c) for c in self.region_center)
        if len(center) != 2 or not all(np.isfinite(c) for c in center):
            raise ValueError(f"region_center must be a finite 2-D point, got {self.region_center!r}")
        object.__setattr__(self, "region_center", center)
        if self.element_spacing is None:
            object.__setattr__(self, "element_spacing", 0.5 * self.wavelength)
        if not np.isfinite(self.element_spacing) or self.element_spacing <= 0:
            raise ValueError(f"element_spacing must be positive, got {self.element_spacing!r}")

    @property
    def wavelength(self) -> float:
        return wavelength_of(self.carrier_frequency)


@dataclass(frozen=True)
class NodePose:
    """Pose of one array node: phase center (x, y) and element-line angle theta."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        for name in ("x", "y", "theta"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class Deployment:
    """Ordered node poses of one deployment (length = node count)."""

    poses: tuple[NodePose, ...]

    def __post_init__(self):
        poses = tuple(self.poses)
        if not poses:
            raise ValueError("a deployment needs at least one node")
        if not all(isinstance(p, NodePose) for p in poses):
            raise TypeError("poses must be NodePose instances")
        object.__setattr__(self, "poses", poses)

    @property
    def node_count(self) -> int:
        return len(self.poses)

    def as_array(self) -> np.ndarray:
        """(J, 3) array of [x, y, theta] rows."""
        return np.array([[p.x, p.y, p.theta] for p in self.poses], dtype=float)

    @classmethod
    def from_array(cls, rows) -> "Deployment":
        rows = np.asarray(rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 3:
            raise ValueError(f"expected a (J, 3) pose array, got shape {rows.shape}")
        return cls(tuple(NodePose(*row) for row in rows))


def antenna_positions(pose: NodePose, n_antennas: int, spacing: float) -> np.ndarray:
    """ULA element positions for one node, shape (N, 2).

    Element n (1-based) sits at (x, y) + (n - (N+1)/2) * spacing along the
    unit vector (cos theta, sin theta), so the array is centered on the pose.
    """
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    offsets = (np.arange(1, n_antennas + 1) - 0.5 * (n_antennas + 1)) * spacing
    direction = np.array([np.cos(pose.theta), np.sin(pose.theta)])
    return np.array([pose.x, pose.y]) + offsets[:, np.newaxis] * direction


def deployment_layout(deployment: Deployment, scenario: Scenario) -> np.ndarray:
    """All antenna element positions, node-major, shape (N*J, 2)."""
    return np.vstack(
        [antenna_positions(p, scenario.antennas_per_node, scenario.element_spacing) for p in deployment.poses]
    )


def steering_matrix(layout: np.ndarray, targets, wavelength: float) -> np.ndarray:
    """Steering vectors of many targets at once, shape (N*J, n_targets).

    Entry (m, k) is sqrt(1/NJ) * exp(-1j * (2*pi/wavelength) * range), with
    range the Euclidean distance from element m to target k; columns therefore
    have unit norm by construction.
    """
    layout = np.asarray(layout, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if targets.ndim == 1:
        targets = targets[np.newaxis, :]
    if layout.ndim != 2 or layout.shape[0] < 1 or layout.shape[1] != 2:
        raise ValueError(f"layout must be a non-empty (M, 2) array, got shape {layout.shape}")
    if not wavelength > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength!r}")
    ranges = np.hypot(
        targets[:, 0][:, np.newaxis] - layout[:, 0][np.newaxis, :],
        targets[:, 1][:, np.newaxis] - layout[:, 1][np.newaxis, :],
    )
    if np.any(ranges == 0.0):
        raise DegenerateGeometryError("target coincides with an antenna element (zero range)")
    phases = (-TWO_PI / wavelength) * ranges
    return (np.sqrt(1.0 / layout.shape[0]) * np.exp(1j * phases)).T


def steering_vector(layout: np.ndarray, target, wavelength: float) -> np.ndarray:
    """Spherical-wavefront steering vector of one target, shape (N*J,)."""
    return steering_matrix(layout, np.asarray(target, dtype=float)[np.newaxis, :], wavelength)[:, 0]


def coverage_grid(center, radius: float, resolution: float) -> np.ndarray:
    """Lattice points within `radius` of `center`, shape (n_points, 2).

    The lattice is anchored at the center (which is always a grid point) and
    enumerated row-major: ascending y, then ascending x, so grid indices are
    stable across runs and implementations.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius!r}")
    if not resolution > 0:
        raise ValueError(f"resolution must be positive, got {resolution!r}")
    cx, cy = float(center[0]), float(center[1])
    n = int(np.floor(radius / resolution))
    steps = np.arange(-n, n + 1) * resolution
    xx, yy = np.meshgrid(steps, steps)
    keep = np.hypot(xx, yy) <= radius
    return np.column_stack((cx + xx[keep], cy + yy[keep]))


def midpoint_baseline(scenario: Scenario) -> Deployment:
    """Three-node reference deployment at the region circle's tangency points.

    Nodes sit on the circle at bearings 90, 210 and 330 degrees (the side
    midpoints of the enclosing equilateral triangle); each array lies along
    the local tangent, i.e. parallel to the adjacent triangle side, so its
    broadside faces the centroid.
    """
    if scenario.node_count != 3:
        raise UnsupportedConfigurationError(
            f"midpoint baseline is defined for 3 nodes, scenario has {scenario.node_count}"
        )
    cx, cy = scenario.region_center
    r = scenario.region_radius
    poses = []
    for bearing in np.deg2rad((90.0, 210.0, 330.0)):
        poses.append(
            NodePose(
                cx + r * np.cos(bearing),
                cy + r * np.sin(bearing),
                wrap_angle(bearing + 0.5 * np.pi),
            )
        )
    return Deployment(tuple(poses))


def uniform_disk(rng: np.random.Generator, n: int, center, radius: float) -> np.ndarray:
    """n points uniform over a disk via the polar inverse-CDF (range = r*sqrt(u)).

    Consumes one (n, 2) uniform block: column 0 drives the radial coordinate,
    column 1 the polar angle.
    """
    u = rng.random((n, 2))
    rad = radius * np.sqrt(u[:, 0])
    ang = TWO_PI * u[:, 1]
    return np.column_stack((center[0] + rad * np.cos(ang), center[1] + rad * np.sin(ang)))


def random_deployment(scenario: Scenario, rng: np.random.Generator) -> Deployment:
    """Deployment with positions uniform over the region disk and orientations
    uniform on [0, 2*pi).

    Stream order: one (J, 2) uniform block for the positions, then one (J,)
    block for the angles.
    """
    positions = uniform_disk(rng, scenario.node_count, scenario.region_center, scenario.region_radius)
    thetas = wrap_angle(TWO_PI * rng.random(scenario.node_count))
    return Deployment(tuple(NodePose(x, y, t) for (x, y), t in zip(positions, thetas)))


def deployment_violations(deployment: Deployment, scenario: Scenario, tol: float = 1e-9) -> list[str]:
    """Feasibility violations as human-readable messages (empty when feasible).

    Checks node count, the in-region invariant for every position (with a
    relative radius tolerance for round-off), and theta in [0, 2*pi).
    """
    msgs = []
    if deployment.node_count != scenario.node_count:
        msgs.append(
            f"deployment has {deployment.node_count} nodes, scenario expects {scenario.node_count}"
        )
    cx, cy = scenario.region_center
    limit = scenario.region_radius * (1.0 + tol)
    for idx, pose in enumerate(deployment.poses):
        dist = float(np.hypot(pose.x - cx, pose.y - cy))
        if dist > limit:
            msgs.append(
                f"node {idx}: position ({pose.x:.6g}, {pose.y:.6g}) is {dist:.6g} m from the "
                f"center, outside the {scenario.region_radius:.6g} m region"
            )
        if not 0.0 <= pose.theta < TWO_PI:
            msgs.append(f"node {idx}: theta {pose.theta:.6g} outside [0, 2*pi)")
    return msgs
