import math

import numpy as np
from django.test import SimpleTestCase

from optimizer.benchmarks import (
    BenchmarkSpec,
    DimRule,
    Family,
    analytic_front,
    catalog,
    evaluate_multi,
    evaluate_single,
    ids_in_family,
    lookup,
    lookup_single,
    multi_objective_ids,
    resolve_space,
    single_objective_ids,
)
from optimizer.exceptions import BenchmarkNotFound, DomainError, InvalidConfigError, ShapeError
from optimizer.moo import nondominated_filter


class CatalogTests(SimpleTestCase):
    def test_ids_are_unique_and_lowercase(self):
        ids = [spec.id for spec in catalog()]
        self.assertEqual(len(ids), len(set(ids)))
        self.assertTrue(all(i == i.lower() for i in ids))

    def test_families(self):
        self.assertIn("rastrigin", ids_in_family(Family.MANY_LOCAL_OPTIMA))
        self.assertEqual(ids_in_family(Family.PLATE), ["booth", "matyas", "mccormick"])
        self.assertNotIn("sphere", single_objective_ids(include_demos=False))
        self.assertEqual(multi_objective_ids(), ["zdt1", "zdt2", "dltz1", "paper_mo_demo"])

    def test_lookup(self):
        self.assertEqual(lookup("RASTRIGIN").id, "rastrigin")
        self.assertEqual(lookup("rastrigin").default_bounds.bounds(), [(-5.12, 5.12), (-5.12, 5.12)])
        self.assertEqual(lookup("eggholder").known_optimum, -959.6407)

    def test_unknown_id_lists_valid_ids(self):
        with self.assertRaises(BenchmarkNotFound) as ctx:
            lookup("zdt99")
        self.assertIn("rastrigin", str(ctx.exception))
        self.assertIn("zdt1", ctx.exception.valid_ids)

    def test_lookup_single_rejects_multi(self):
        with self.assertRaises(InvalidConfigError):
            lookup_single("zdt1")

    def test_resolve_space(self):
        self.assertEqual(resolve_space("rastrigin", 5).dim, 5)
        self.assertEqual(resolve_space("rastrigin", 5).bounds()[4], (-5.12, 5.12))
        self.assertEqual(resolve_space("zdt1").dim, 30)
        with self.assertRaises(InvalidConfigError):
            resolve_space("bukin_n6", 3)
        with self.assertRaises(InvalidConfigError):
            resolve_space("rosenbrock", 1)


class SingleObjectiveTests(SimpleTestCase):
    # -------------------------
    # Stated optima
    # -------------------------
    def test_argmins_reproduce_optima(self):
        for spec in catalog():
            if not isinstance(spec, BenchmarkSpec):
                continue
            for x in spec.argmin_examples:
                with self.subTest(benchmark=spec.id, x=x):
                    self.assertAlmostEqual(spec(x), spec.known_optimum, delta=1e-4)

    def test_grid_never_beats_optimum(self):
        for spec in catalog():
            if not isinstance(spec, BenchmarkSpec):
                continue
            space = spec.space()
            axes = [np.linspace(lo, hi, 101) for lo, hi in space.bounds()]
            if spec.dim_rule is DimRule.FIXED_1D:
                points = axes[0][:, None]
            else:
                points = np.array(np.meshgrid(*axes)).reshape(2, -1).T
            best = min(spec(p) for p in points)
            with self.subTest(benchmark=spec.id):
                self.assertGreaterEqual(best, spec.known_optimum - 1e-6)

    def test_reference_values(self):
        self.assertEqual(evaluate_single("rastrigin", [0.0, 0.0]), 0.0)
        self.assertAlmostEqual(evaluate_single("ackley", [0.0, 0.0]), 0.0, places=12)
        self.assertAlmostEqual(evaluate_single("mccormick", [-0.54719, -1.54719]), -1.9133, delta=1e-4)
        self.assertAlmostEqual(evaluate_single("goldstein_price", [0.0, -1.0]), 3.0, delta=1e-9)
        self.assertAlmostEqual(evaluate_single("sinusoidal", [-math.pi / 2, -math.pi / 2]), -2.0, places=12)

    def test_any_n_functions_accept_higher_dims(self):
        self.assertEqual(evaluate_single("rastrigin", np.zeros(10)), 0.0)
        self.assertAlmostEqual(evaluate_single("rosenbrock", np.ones(6)), 0.0)

    # -------------------------
    # Input validation
    # -------------------------
    def test_wrong_dimension(self):
        with self.assertRaises(ShapeError):
            evaluate_single("bukin_n6", [0.0, 0.0, 0.0])
        with self.assertRaises(ShapeError):
            evaluate_single("forrester", [0.1, 0.2])

    def test_non_finite_input(self):
        with self.assertRaises(DomainError):
            evaluate_single("sphere", [np.nan, 0.0])


class MultiObjectiveTests(SimpleTestCase):
    def test_zdt1_reference_points(self):
        np.testing.assert_allclose(evaluate_multi("zdt1", np.zeros(30)), [0.0, 1.0])
        x = np.zeros(30)
        x[0] = 1.0
        np.testing.assert_allclose(evaluate_multi("zdt1", x), [1.0, 0.0])
        np.testing.assert_allclose(evaluate_multi("zdt1", np.ones(30)), [1.0, 10 - math.sqrt(10)])

    def test_dltz1_on_front_sums_to_half(self):
        x = np.array([0.3, 0.6, 0.5, 0.5, 0.5, 0.5, 0.5])
        self.assertAlmostEqual(evaluate_multi("dltz1", x).sum(), 0.5)

    def test_shape_error(self):
        with self.assertRaises(ShapeError):
            evaluate_multi("paper_mo_demo", [0.0, 0.0, 0.0])

    # -------------------------
    # Analytic fronts
    # -------------------------
    def test_zdt_front_endpoints(self):
        np.testing.assert_allclose(analytic_front("zdt1", 2), [[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(analytic_front("zdt2", 3)[1], [0.5, 0.75])

    def test_fronts_are_mutually_nondominated(self):
        for benchmark_id in ("zdt1", "zdt2", "dltz1"):
            front = analytic_front(benchmark_id, 200)
            with self.subTest(benchmark=benchmark_id):
                self.assertEqual(front.shape[0], 200)
                self.assertEqual(nondominated_filter(front), list(range(200)))

    def test_dltz1_front_on_simplex(self):
        np.testing.assert_allclose(analytic_front("dltz1", 50).sum(axis=1), 0.5)

    def test_no_front(self):
        with self.assertRaises(BenchmarkNotFound):
            analytic_front("paper_mo_demo", 10)
        with self.assertRaises(InvalidConfigError):
            analytic_front("zdt1", 1)
