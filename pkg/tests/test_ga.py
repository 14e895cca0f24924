"""Genetic-algorithm operator and end-to-end tests.

Operator math (SBX spread factor, polynomial-mutation perturbation) is pinned
with scripted random streams against hand-evaluated values; the evolutionary
loop is pinned on determinism, elitism monotonicity, evaluation accounting,
and feasibility of every result.
"""

import math

import numpy as np
import pytest

from isacdeploy.correlation import build_codebook, max_weighted_correlation
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
    TWO_PI,
    Deployment,
    NodePose,
    Scenario,
    deployment_violations,
    midpoint_baseline,
    random_deployment,
)


class ScriptedRng:
    """Plays back pre-seeded uniform/integer blocks; fails when over-consumed."""

    def __init__(self, floats=(), ints=()):
        self.floats = [np.asarray(f, dtype=float) for f in floats]
        self.ints = [np.asarray(i) for i in ints]

    def random(self, size=None):
        block = self.floats.pop(0)
        if size is None:
            return float(block)
        return block.reshape(size)

    def integers(self, low, high=None, size=None):
        return self.ints.pop(0).reshape(size)


@pytest.fixture(scope="module")
def small_scenario():
    return Scenario(region_radius=4.0)


def pair_scan_fitness_oracle(codebook):
    """Exhaustive python-loop evaluation of the worst weighted pair."""
    n = len(codebook.grid)
    best = -1.0
    for i in range(n):
        for j in range(i + 1, n):
            ip = abs(np.vdot(codebook.steering[:, i], codebook.steering[:, j]))
            d = math.hypot(*(codebook.grid[i] - codebook.grid[j]))
            best = max(best, ip * d**0.05)
    return best


# ---------------------------------------------------------------- encoding


class TestEncoding:
    def test_round_trip(self, small_scenario):
        dep = random_deployment(small_scenario, np.random.default_rng(1))
        genes = encode_deployment(dep)
        assert genes.shape == (9,)
        assert decode_chromosome(genes) == dep

    def test_gene_layout_is_pose_major(self):
        dep = Deployment((NodePose(1.0, 2.0, 3.0), NodePose(4.0, 5.0, 6.0)))
        assert np.array_equal(encode_deployment(dep), [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])

    def test_decode_rejects_ragged_genes(self):
        with pytest.raises(ValueError):
            decode_chromosome(np.arange(7.0))


class TestBoundsAndProjection:
    def test_deployment_bounds_pattern(self):
        s = Scenario(region_radius=2.0, region_center=(5.0, -1.0))
        bounds = deployment_bounds(s)
        assert np.array_equal(bounds.lower, [3.0, -3.0, 0.0] * 3)
        assert np.array_equal(bounds.upper, [7.0, 1.0, TWO_PI] * 3)
        assert bounds.kinds == ("clamp", "clamp", "wrap") * 3

    def test_gene_bounds_validation(self):
        with pytest.raises(ValueError):
            GeneBounds(lower=np.array([0.0]), upper=np.array([0.0]), kinds=("clamp",))
        with pytest.raises(ValueError):
            GeneBounds(lower=np.array([0.0]), upper=np.array([1.0]), kinds=("middle",))

    def test_projection_keeps_feasible_genes(self, small_scenario):
        dep = random_deployment(small_scenario, np.random.default_rng(2))
        genes = encode_deployment(dep)
        assert np.array_equal(project_feasible(genes, small_scenario), genes)

    def test_projection_clamps_then_scales_into_disk(self):
        s = Scenario(region_radius=2.0)
        projected = project_feasible(np.array([9.0, 9.0, 7.0, 0.5, -3.0, -0.5, 0.0, 0.0, 1.0]), s)
        # node 0: clamped to the (2, 2) corner, then scaled onto the circle
        assert math.hypot(projected[0], projected[1]) == pytest.approx(2.0, rel=1e-12)
        assert projected[0] == projected[1]
        assert projected[2] == pytest.approx(7.0 - TWO_PI, rel=1e-12)
        # node 1: y clamped to -2, x kept, then radial scaling
        assert math.hypot(projected[3], projected[4]) == pytest.approx(2.0, rel=1e-12)
        assert projected[5] == pytest.approx(TWO_PI - 0.5, rel=1e-12)
        # node 2 already feasible
        assert np.array_equal(projected[6:], [0.0, 0.0, 1.0])

    def test_projection_respects_off_center_region(self):
        s = Scenario(region_radius=1.0, region_center=(5.0, -2.0), node_count=1)
        projected = project_feasible(np.array([9.0, -2.0, 0.0]), s)
        assert projected[0] == pytest.approx(6.0, rel=1e-12)
        assert projected[1] == pytest.approx(-2.0, abs=1e-12)

    def test_projected_deployment_passes_feasibility_check(self, small_scenario):
        rng = np.random.default_rng(3)
        for _ in range(25):
            genes = rng.uniform(-20.0, 20.0, size=9)
            dep = decode_chromosome(project_feasible(genes, small_scenario))
            assert deployment_violations(dep, small_scenario) == []


# ---------------------------------------------------------------- selection


class TestTournamentSelect:
    def test_forced_sample_returns_fittest_index(self):
        rng = ScriptedRng(ints=[[0, 2]])
        assert tournament_select(list("abc"), np.array([5.0, 1.0, 3.0]), 2, rng) == 2

    def test_tie_breaks_to_lowest_index(self):
        rng = ScriptedRng(ints=[[2, 0]])
        assert tournament_select(list("abc"), np.array([1.0, 9.0, 1.0]), 2, rng) == 0

    def test_single_candidate_tournament(self):
        rng = ScriptedRng(ints=[[1]])
        assert tournament_select(list("abc"), np.array([5.0, 7.0, 3.0]), 1, rng) == 1

    def test_real_stream_selects_valid_low_fitness_index(self):
        rng = np.random.default_rng(4)
        fits = np.array([4.0, 2.0, 9.0, 1.0, 5.0])
        for _ in range(50):
            idx = tournament_select(list(range(5)), fits, 3, rng)
            assert 0 <= idx < 5
        # selection pressure: the global best must win most large tournaments
        wins = sum(tournament_select(list(range(5)), fits, 5, rng) == 3 for _ in range(30))
        assert wins > 15

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            tournament_select([], np.array([]), 1, np.random.default_rng(5))
        with pytest.raises(ValueError):
            tournament_select(list("ab"), np.array([1.0, 2.0]), 0, np.random.default_rng(5))


# ---------------------------------------------------------------- crossover


class TestSbxCrossover:
    def test_half_u_is_identity(self):
        rng = ScriptedRng(floats=[0.0, [0.5, 0.5, 0.5]])
        a, b = np.array([1.0, 2.0, 3.0]), np.array([4.0, 5.0, 6.0])
        c1, c2 = sbx_crossover(a, b, 15.0, 1.0, rng)
        assert np.array_equal(c1, a)
        assert np.array_equal(c2, b)

    def test_gate_failure_copies_without_gene_draws(self):
        rng = ScriptedRng(floats=[0.95])  # only the gate draw is available
        a, b = np.array([1.0, 2.0]), np.array([3.0, 4.0])
        c1, c2 = sbx_crossover(a, b, 15.0, 0.8, rng)
        assert np.array_equal(c1, a) and np.array_equal(c2, b)
        assert c1 is not a and c2 is not b
        assert rng.floats == []

    def test_hand_evaluated_spread_factor(self):
        # u = 0.2, eta = 15 -> beta = 0.4**(1/16); parents 0 and 1
        rng = ScriptedRng(floats=[0.0, [0.2]])
        c1, c2 = sbx_crossover(np.array([0.0]), np.array([1.0]), 15.0, 1.0, rng)
        assert c1[0] == 0.027829604581805556
        assert c2[0] == 0.9721703954181944

    def test_contracting_and_expanding_branches(self):
        rng = ScriptedRng(floats=[0.0, [0.8]])
        c1, c2 = sbx_crossover(np.array([0.0]), np.array([1.0]), 15.0, 1.0, rng)
        # u > 1/2 expands beyond the parent interval (projection happens later)
        assert c1[0] < 0.0 < 1.0 < c2[0]

    def test_gene_sums_conserved(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            a, b = rng.uniform(-5, 5, size=9), rng.uniform(-5, 5, size=9)
            c1, c2 = sbx_crossover(a, b, 15.0, 1.0, rng)
            assert np.allclose(c1 + c2, a + b, rtol=1e-12, atol=1e-12)

    def test_rejects_mismatched_parents(self):
        with pytest.raises(ValueError):
            sbx_crossover(np.ones(3), np.ones(4), 15.0, 0.8, np.random.default_rng(7))


# ---------------------------------------------------------------- mutation


def unit_bounds(n, kind="clamp"):
    return GeneBounds(lower=np.zeros(n), upper=np.ones(n), kinds=(kind,) * n)


class TestPolynomialMutation:
    def test_half_u_leaves_gene_unchanged(self):
        rng = ScriptedRng(floats=[[0.0], [0.5]])
        out = polynomial_mutation(np.array([0.3]), 20.0, 1.0, unit_bounds(1), rng)
        assert out[0] == 0.3

    def test_gate_failure_consumes_both_blocks(self):
        rng = ScriptedRng(floats=[[0.99, 0.99], [0.1, 0.9]])
        out = polynomial_mutation(np.array([0.3, 0.6]), 20.0, 0.2, unit_bounds(2), rng)
        assert np.array_equal(out, [0.3, 0.6])
        assert rng.floats == []  # gate and u blocks are always drawn

    def test_hand_evaluated_perturbation(self):
        # z = 0.5 on [0, 1], eta = 20, u = 0.9
        rng = ScriptedRng(floats=[[0.0], [0.9]])
        out = polynomial_mutation(np.array([0.5]), 20.0, 1.0, unit_bounds(1), rng)
        assert out[0] - 0.5 == pytest.approx(0.07377658984223268, rel=1e-15)

    def test_lower_bound_moves_inward(self):
        rng = ScriptedRng(floats=[[0.0], [0.9]])
        out = polynomial_mutation(np.array([0.0]), 20.0, 1.0, unit_bounds(1), rng)
        assert 0.0 < out[0] < 1.0

    def test_upper_bound_moves_inward(self):
        rng = ScriptedRng(floats=[[0.0], [0.3]])
        out = polynomial_mutation(np.array([1.0]), 20.0, 1.0, unit_bounds(1), rng)
        assert 0.0 < out[0] < 1.0

    def test_clamp_genes_stay_in_bounds(self):
        rng = np.random.default_rng(8)
        bounds = unit_bounds(9)
        for _ in range(100):
            z = rng.random(9)
            out = polynomial_mutation(z, 20.0, 1.0, bounds, rng)
            assert np.all(out >= 0.0) and np.all(out <= 1.0)

    def test_wrap_genes_stay_in_half_open_range(self):
        bounds = GeneBounds(lower=np.zeros(1), upper=np.full(1, TWO_PI), kinds=("wrap",))
        for u in (0.0001, 0.3, 0.7, 0.9999999999999999):
            rng = ScriptedRng(floats=[[0.0], [u]])
            out = polynomial_mutation(np.array([6.0]), 20.0, 1.0, bounds, rng)
            assert 0.0 <= out[0] < TWO_PI

    def test_rejects_out_of_bounds_gene(self):
        with pytest.raises(ValueError):
            polynomial_mutation(np.array([1.5]), 20.0, 1.0, unit_bounds(1), np.random.default_rng(9))


# ---------------------------------------------------------------- fitness


class TestFitness:
    def test_matches_exhaustive_pair_scan(self):
        scenario = Scenario(region_radius=3.0)
        dep = random_deployment(scenario, np.random.default_rng(10))
        value = fitness(encode_deployment(dep), scenario)
        assert value == pytest.approx(pair_scan_fitness_oracle(build_codebook(dep, scenario)), rel=5e-15)

    def test_pure_function(self, small_scenario):
        genes = encode_deployment(random_deployment(small_scenario, np.random.default_rng(11)))
        assert fitness(genes, small_scenario) == fitness(genes, small_scenario)

    def test_collocated_nodes_score_worse_than_spread_baseline(self, small_scenario):
        pose = NodePose(0.25, 0.0, 0.0)
        collocated = encode_deployment(Deployment((pose, pose, pose)))
        baseline = encode_deployment(midpoint_baseline(small_scenario))
        assert fitness(collocated, small_scenario) > fitness(baseline, small_scenario)

    def test_shared_grid_gives_identical_values(self, small_scenario):
        from isacdeploy.correlation import distance_weights
        from isacdeploy.geometry import coverage_grid

        genes = encode_deployment(random_deployment(small_scenario, np.random.default_rng(12)))
        grid = coverage_grid(small_scenario.region_center, small_scenario.region_radius, 1.0)
        weights = distance_weights(grid, small_scenario.alpha)
        assert fitness(genes, small_scenario) == fitness(genes, small_scenario, grid=grid, weights=weights)

    def test_rejects_wrong_gene_count(self, small_scenario):
        with pytest.raises(ValueError):
            fitness(np.arange(6.0), small_scenario)


# ---------------------------------------------------------------- end to end


class TestGaParams:
    def test_defaults_match_reference_settings(self):
        p = GaParams()
        assert (p.population_size, p.elite_count, p.max_generations) == (100, 4, 500)
        assert (p.crossover_probability, p.mutation_probability) == (0.8, 0.2)
        assert (p.eta_crossover, p.eta_mutation, p.tournament_size) == (15.0, 20.0, 3)

    def test_validation(self):
        with pytest.raises(ValueError):
            GaParams(population_size=4, elite_count=4)
        with pytest.raises(ValueError):
            GaParams(population_size=9, elite_count=4)  # odd offspring count
        with pytest.raises(ValueError):
            GaParams(crossover_probability=1.5)
        with pytest.raises(ValueError):
            GaParams(mutation_probability=-0.1)
        with pytest.raises(ValueError):
            GaParams(eta_crossover=0.0)
        with pytest.raises(ValueError):
            GaParams(tournament_size=0)
        with pytest.raises(ValueError):
            GaParams(max_generations=-1)


@pytest.fixture(scope="module")
def desk_params():
    return GaParams(population_size=12, elite_count=2, max_generations=12, tournament_size=3)


@pytest.fixture(scope="module")
def desk_result(small_scenario, desk_params):
    return run_ga(small_scenario, desk_params, np.random.default_rng(13))


class TestRunGa:
    def test_deterministic(self, small_scenario, desk_params, desk_result):
        again = run_ga(small_scenario, desk_params, np.random.default_rng(13))
        assert np.array_equal(again.best, desk_result.best)
        assert again.best_fitness == desk_result.best_fitness
        assert np.array_equal(again.trace, desk_result.trace)
        assert again.evaluations == desk_result.evaluations

    def test_threaded_evaluation_matches_serial(self, small_scenario, desk_params, desk_result):
        threaded = run_ga(small_scenario, desk_params, np.random.default_rng(13), threads=4)
        assert np.array_equal(threaded.best, desk_result.best)
        assert np.array_equal(threaded.trace, desk_result.trace)

    def test_trace_monotone_and_accounted(self, desk_params, desk_result):
        assert desk_result.trace.shape == (13,)
        assert np.all(np.diff(desk_result.trace) <= 0.0)
        assert desk_result.best_fitness == desk_result.trace[-1]
        assert desk_result.evaluations == 12 + 12 * (12 - 2)

    def test_improves_on_initial_population(self, desk_result):
        assert desk_result.best_fitness < desk_result.trace[0]

    def test_best_is_feasible(self, small_scenario, desk_result):
        dep = decode_chromosome(desk_result.best)
        assert deployment_violations(dep, small_scenario) == []

    def test_best_fitness_is_reproducible_from_genes(self, small_scenario, desk_result):
        assert fitness(desk_result.best, small_scenario) == desk_result.best_fitness

    def test_beats_independent_random_deployments(self, small_scenario, desk_result):
        rng = np.random.default_rng(14)
        random_best = min(
            fitness(encode_deployment(random_deployment(small_scenario, rng)), small_scenario)
            for _ in range(20)
        )
        assert desk_result.best_fitness < random_best

    def test_zero_generations_returns_initial_best(self, small_scenario):
        params = GaParams(population_size=6, elite_count=2, max_generations=0)
        result = run_ga(small_scenario, params, np.random.default_rng(15))
        assert result.trace.shape == (1,)
        assert result.evaluations == 6
        assert result.best_fitness == result.trace[0]

    def test_result_invariants(self):
        with pytest.raises(ValueError):
            GaResult(best=np.zeros(9), best_fitness=1.0, trace=np.array([1.0, 2.0]), evaluations=10)
        with pytest.raises(ValueError):
            GaResult(best=np.zeros(9), best_fitness=0.5, trace=np.array([2.0, 1.0]), evaluations=10)
