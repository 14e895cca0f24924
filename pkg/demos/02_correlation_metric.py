"""
Distance-weighted steering correlation
======================================

The robustness surrogate scores how confusable two grid points are:
|a_i^H a_j| * d_ij^alpha. High correlation between far-apart points is the
dangerous case - noise can flip the localizer to a distant look-alike - so
the weight grows with distance. A deployment is scored by its worst pair.
"""

import numpy as np

from isacdeploy import (
    Scenario,
    build_codebook,
    max_weighted_correlation,
    midpoint_baseline,
    random_deployment,
    weighted_correlation,
)

scenario = Scenario()
deployment = midpoint_baseline(scenario)

# The codebook holds one steering vector per grid point plus the d^alpha
# weights (alpha = 0.05 by default).
codebook = build_codebook(deployment, scenario)
steering, grid = codebook.steering, codebook.grid
print(f"codebook: {steering.shape[0]} antennas x {steering.shape[1]} grid points")

# Neighboring points are highly correlated but barely weighted; the metric
# cares about correlated pairs that are far apart.
center = int(np.argmin(np.hypot(grid[:, 0], grid[:, 1])))
neighbor = int(np.argmin(np.hypot(grid[:, 0] - 1.0, grid[:, 1])))
opposite = int(np.argmin(np.hypot(grid[:, 0] + 8.0, grid[:, 1])))
for name, j in (("1 m neighbor", neighbor), ("far point", opposite)):
    distance = float(np.hypot(*(grid[center] - grid[j])))
    rho = weighted_correlation(steering[:, center], steering[:, j], distance, scenario.alpha)
    plain = abs(np.vdot(steering[:, center], steering[:, j]))
    print(f"center vs {name}: |corr|={plain:.4f} distance={distance:.1f} m rho={rho:.4f}")

# The deployment's fitness is the maximum weighted correlation over all
# grid-point pairs, and the report names the offending pair.
report = max_weighted_correlation(codebook)
i, j = report.arg_pair
print(f"midpoint baseline: max rho = {report.max_value:.4f} "
      f"at ({grid[i, 0]:+.0f},{grid[i, 1]:+.0f}) vs ({grid[j, 0]:+.0f},{grid[j, 1]:+.0f})")

# Random deployments are usually worse (higher max rho).
rng = np.random.default_rng(1)
for k in range(3):
    candidate = random_deployment(scenario, rng)
    value = max_weighted_correlation(build_codebook(candidate, scenario)).max_value
    print(f"random deployment {k}: max rho = {value:.4f}")
