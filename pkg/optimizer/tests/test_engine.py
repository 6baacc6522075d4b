import numpy as np
import pytest
from django.test import SimpleTestCase

from optimizer.benchmarks import lookup_single
from optimizer.core import Candidate, RngStream, SearchSpace
from optimizer.engine import (
    EngineConfig,
    NeighborhoodMode,
    NeighborhoodState,
    Termination,
    crowding_select,
    dynamic_neighborhood,
    has_converged,
    run_aded,
    run_classic_de,
    update_neighborhoods,
)
from optimizer.exceptions import DomainError, InvalidConfigError, StateError
from optimizer.variation import LocalSearchBudget, ScheduleMode, ScheduleParams

SPHERE = lookup_single("sphere")
SINUSOIDAL = lookup_single("sinusoidal")
BOX = SearchSpace.uniform(-10, 10, 2)


class ConstantAfter:
    """Sphere until ``calls`` evaluations have been made, then a constant no trial can beat."""

    def __init__(self, calls):
        self.limit = calls
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return float(np.sum(x**2)) if self.calls <= self.limit else 1e9


class EngineConfigTests(SimpleTestCase):
    def test_defaults(self):
        cfg = EngineConfig()
        self.assertEqual(cfg.strategy.name, "aded-default")
        self.assertIs(cfg.neighborhood, NeighborhoodMode.DYNAMIC)
        self.assertTrue(cfg.local_search.enabled)

    def test_classic(self):
        cfg = EngineConfig.classic(population_size=20)
        self.assertEqual((cfg.schedule.initial_F, cfg.schedule.initial_CR), (0.8, 0.9))
        self.assertEqual(cfg.strategy.name, "rand1bin")
        self.assertFalse(cfg.local_search.enabled)
        self.assertEqual(cfg.population_size, 20)

    def test_validation(self):
        for changes in (
            {"population_size": 5},
            {"max_generations": 0},
            {"stagnation_limit": 1},
            {"stagnation_tol": -1.0},
            {"neighborhood_size": 0},
            {"population_size": 10, "neighborhood_size": 10},
            {"seed": -1},
            {"strategy": "nope"},
        ):
            with self.subTest(changes=changes):
                with self.assertRaises(InvalidConfigError):
                    EngineConfig(**changes)

    def test_config_hash_ignores_seed(self):
        cfg = EngineConfig(population_size=20)
        self.assertEqual(cfg.config_hash(), cfg.replace(seed=99).config_hash())
        self.assertNotEqual(cfg.config_hash(), cfg.replace(population_size=21).config_hash())
        self.assertNotIn("seed", cfg.as_dict(include_seed=False))


class NeighborhoodTests(SimpleTestCase):
    def test_size_capped(self):
        self.assertEqual(sorted(dynamic_neighborhood(0, 3, 5, RngStream(0))), [1, 2])

    def test_never_self(self):
        rng = RngStream(1)
        for _ in range(10_000):
            self.assertNotIn(4, dynamic_neighborhood(4, 10, 5, rng))

    def test_invalid(self):
        with self.assertRaises(InvalidConfigError):
            dynamic_neighborhood(0, 1, 1, RngStream(0))

    def test_update_keeps_best_link(self):
        state = NeighborhoodState(4)
        update_neighborhoods(state, 0, [1, 2], 3.0)
        self.assertEqual(state[0], {1: 3.0, 2: 3.0})
        state[0][1] = 5.0
        state[0][2] = 2.0
        update_neighborhoods(state, 0, [1, 2, 0], 3.0)
        self.assertEqual(state[0], {1: 3.0, 2: 2.0})
        self.assertEqual(state.total_links(), 2)

    def test_update_drops_stale_links(self):
        state = NeighborhoodState(5)
        update_neighborhoods(state, 0, [1, 2], 1.0)
        update_neighborhoods(state, 0, [3, 4], 2.0)
        self.assertEqual(state[0], {3: 2.0, 4: 2.0})


class SelectionTests(SimpleTestCase):
    def test_crowding_select(self):
        a, b = Candidate([0.0], 1.0), Candidate([1.0], 2.0)
        self.assertIs(crowding_select(a, b), a)
        self.assertIs(crowding_select(b, a), a)
        tie = Candidate([2.0], 1.0)
        self.assertIs(crowding_select(a, tie), a)

    def test_crowding_select_needs_fitness(self):
        with self.assertRaises(StateError):
            crowding_select(Candidate([0.0]), Candidate([1.0], 1.0))

    def test_has_converged(self):
        self.assertTrue(has_converged([5, 3, 3, 3], 3, 0.0))
        self.assertFalse(has_converged([5, 3], 3, 0.0))
        self.assertTrue(has_converged([5, 3, 3, 2.9999], 3, 1e-2))
        self.assertFalse(has_converged([5, 4, 3, 2], 3, 0.0))
        with self.assertRaises(InvalidConfigError):
            has_converged([1, 1], 1, 0.0)


class AdedRunTests(SimpleTestCase):
    def test_sphere(self):
        cfg = EngineConfig(population_size=50, max_generations=100, seed=1)
        result = run_aded(SPHERE, BOX, cfg)
        self.assertLessEqual(result.best_f, 1e-8)
        self.assertTrue(BOX.contains(result.best_x))

    def test_sinusoidal(self):
        cfg = EngineConfig(population_size=50, max_generations=100, seed=2)
        result = run_aded(SINUSOIDAL, BOX, cfg)
        self.assertAlmostEqual(result.best_f, -2.0, delta=1e-3)

    @pytest.mark.slow
    def test_sinusoidal_headline(self):
        hits = 0
        for seed in range(10):
            cfg = EngineConfig(population_size=50, max_generations=100, seed=seed)
            hits += abs(run_aded(SINUSOIDAL, BOX, cfg).best_f + 2.0) <= 1e-3
        self.assertGreaterEqual(hits, 9)

    @pytest.mark.slow
    def test_multimodal_against_classic(self):
        for benchmark_id in ("rastrigin", "ackley"):
            spec = lookup_single(benchmark_id)
            aded, classic = [], []
            for seed in range(10):
                aded.append(run_aded(spec, spec.space(), EngineConfig(population_size=300, max_generations=200, seed=seed)).best_f)
                cfg = EngineConfig.classic(population_size=300, max_generations=200, seed=seed)
                classic.append(run_classic_de(spec, spec.space(), cfg).best_f)
            with self.subTest(benchmark=benchmark_id):
                self.assertLessEqual(np.mean(aded), 1e-4)
                self.assertGreaterEqual(np.mean(classic), np.mean(aded))

    @pytest.mark.slow
    def test_eggholder_best_of_ten(self):
        spec = lookup_single("eggholder")
        best = min(
            run_aded(spec, spec.space(), EngineConfig(population_size=300, max_generations=200, seed=seed)).best_f
            for seed in range(10)
        )
        self.assertLessEqual(abs(best - spec.known_optimum), 0.5)

    def test_deterministic(self):
        cfg = EngineConfig(population_size=12, max_generations=15, seed=5, local_search=LocalSearchBudget(max_iterations=3))
        a = run_aded(lookup_single("rastrigin"), lookup_single("rastrigin").space(), cfg)
        b = run_aded(lookup_single("rastrigin"), lookup_single("rastrigin").space(), cfg)
        np.testing.assert_array_equal(a.best_x, b.best_x)
        np.testing.assert_array_equal(a.best_f_history, b.best_f_history)
        np.testing.assert_array_equal(a.diversity_history, b.diversity_history)
        self.assertEqual(a.n_evaluations, b.n_evaluations)

    def test_histories(self):
        cfg = EngineConfig(population_size=20, max_generations=30, seed=3, stagnation_tol=0.0, stagnation_limit=31)
        result = run_aded(lookup_single("ackley"), lookup_single("ackley").space(), cfg)
        n = result.generations
        self.assertEqual(n, 30)
        for history in (result.diversity_history, result.fdc_history, result.convergence_rate_history):
            self.assertEqual(len(history), n)
        self.assertTrue(np.all(np.diff(result.best_f_history) <= 0))
        self.assertTrue(np.all(result.convergence_rate_history <= 0))
        self.assertEqual(result.final_convergence_rate, result.convergence_rate_history[-1])
        self.assertIs(result.terminated_by, Termination.MAX_GENERATIONS)

    def test_evaluation_audit(self):
        cfg = EngineConfig(population_size=10, max_generations=8, seed=4, stagnation_limit=8, stagnation_tol=0.0,
                           local_search=LocalSearchBudget(max_iterations=4))
        result = run_aded(SPHERE, BOX, cfg)
        self.assertGreater(result.n_local_evaluations, 0)
        self.assertEqual(result.n_evaluations, 10 * (1 + result.generations) + result.n_local_evaluations)

    def test_all_neighbors_and_fixed_random(self):
        cfg = EngineConfig(
            population_size=10,
            max_generations=10,
            neighborhood="all",
            schedule=ScheduleParams(mode=ScheduleMode.FIXED_RANDOM),
            local_search=LocalSearchBudget(enabled=False),
        )
        result = run_aded(SPHERE, BOX, cfg)
        self.assertEqual(result.n_local_evaluations, 0)
        self.assertLessEqual(result.generations, 10)

    def test_small_neighborhood_falls_back_to_population(self):
        cfg = EngineConfig(population_size=10, max_generations=2, strategy="rand2bin", neighborhood_size=3,
                           local_search=LocalSearchBudget(enabled=False))
        with self.assertLogs("optimizer.engine", level="DEBUG") as logs:
            result = run_aded(SPHERE, BOX, cfg)
        self.assertTrue(any("drawing peers from the whole population" in line for line in logs.output))
        self.assertTrue(BOX.contains(result.best_x))

    def test_population_snapshots(self):
        cfg = EngineConfig(population_size=8, max_generations=5, record_population=True, local_search=LocalSearchBudget(enabled=False))
        result = run_aded(SPHERE, BOX, cfg)
        self.assertEqual(len(result.population_snapshots), result.generations)
        self.assertEqual(result.population_snapshots[0].shape, (8, 2))

    def test_stagnation_stop(self):
        pop, g, limit = 10, 5, 4
        cfg = EngineConfig(population_size=pop, max_generations=100, stagnation_limit=limit,
                           local_search=LocalSearchBudget(enabled=False))
        result = run_aded(ConstantAfter(pop * (1 + g)), BOX, cfg)
        self.assertIs(result.terminated_by, Termination.STAGNATION)
        self.assertLessEqual(result.generations, g + limit)

    def test_domain_error_carries_context(self):
        def objective(x):
            objective.calls += 1
            return float("nan") if objective.calls > 15 else float(np.sum(x**2))

        objective.calls = 0
        cfg = EngineConfig(population_size=10, max_generations=5, local_search=LocalSearchBudget(enabled=False))
        with self.assertRaises(DomainError) as ctx:
            run_aded(objective, BOX, cfg)
        self.assertEqual(ctx.exception.generation, 0)
        self.assertEqual(ctx.exception.individual, 5)


class ClassicRunTests(SimpleTestCase):
    def test_convex_sanity(self):
        cfg = EngineConfig.classic(population_size=300, max_generations=200, stagnation_tol=0.0, seed=1)
        result = run_classic_de(SPHERE, BOX, cfg)
        self.assertLess(result.best_f, 1e-12)
        self.assertEqual(result.n_local_evaluations, 0)

    def test_stagnation_stop(self):
        pop, g, limit = 10, 5, 4
        cfg = EngineConfig.classic(population_size=pop, max_generations=100, stagnation_limit=limit)
        result = run_classic_de(ConstantAfter(pop * (1 + g)), BOX, cfg)
        self.assertIs(result.terminated_by, Termination.STAGNATION)
        self.assertLessEqual(result.generations, g + limit)

    def test_rejects_adaptive_settings(self):
        with self.assertRaises(InvalidConfigError):
            run_classic_de(SPHERE, BOX, EngineConfig())
        with self.assertRaises(InvalidConfigError):
            run_classic_de(SPHERE, BOX, EngineConfig.classic(strategy="aded-default"))

    def test_evaluation_count(self):
        cfg = EngineConfig.classic(population_size=12, max_generations=7, stagnation_limit=7, stagnation_tol=0.0)
        result = run_classic_de(SPHERE, BOX, cfg)
        self.assertEqual(result.n_evaluations, 12 * (1 + result.generations))
