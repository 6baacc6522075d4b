from django.core.exceptions import ValidationError
from django.test import TestCase

from experiments.models import Experiment, RunRecord


def make_run(experiment, **overrides):
    values = {
        "experiment": experiment,
        "benchmark_id": "sinusoidal",
        "algorithm": RunRecord.Algorithm.ADED,
        "strategy": "aded-default",
        "run_index": 0,
        "seed": 0,
        "best_f": -2.0,
        "best_x": [-1.5707963, -1.5707963],
        "n_evaluations": 5100,
        "n_local_evaluations": 100,
        "generations": 50,
        "terminated_by": RunRecord.Termination.MAX_GENERATIONS,
    }
    values.update(overrides)
    return RunRecord(**values)


class ExperimentModelTests(TestCase):
    def setUp(self):
        self.run_exp = Experiment.objects.create(command=Experiment.Command.RUN, config_hash="a" * 64, tool_version="0.3.0")
        self.moo_exp = Experiment.objects.create(command=Experiment.Command.MOO, config_hash="b" * 64, tool_version="0.3.0")

    def test_str(self):
        self.assertEqual(str(self.run_exp), f"run custom (#{self.run_exp.pk})")

    def test_querysets(self):
        self.assertEqual(list(Experiment.objects.of_command("moo")), [self.moo_exp])
        self.assertEqual(list(Experiment.objects.with_hash("a" * 64)), [self.run_exp])
        self.assertEqual(list(Experiment.objects.recent(1)), [self.moo_exp])

    def test_runs_deleted_with_experiment(self):
        make_run(self.run_exp).save()
        self.run_exp.delete()
        self.assertFalse(RunRecord.objects.exists())


class RunRecordModelTests(TestCase):
    def setUp(self):
        self.experiment = Experiment.objects.create(command=Experiment.Command.RUN, config_hash="c" * 64, tool_version="0.3.0")

    # -------------------------
    # Validation
    # -------------------------
    def test_valid_record(self):
        make_run(self.experiment).clean()

    def test_negative_evaluations(self):
        with self.assertRaises(ValidationError) as ctx:
            make_run(self.experiment, n_evaluations=-1, n_local_evaluations=0).clean()
        self.assertIn("n_evaluations", ctx.exception.message_dict)

    def test_local_exceeds_total(self):
        with self.assertRaises(ValidationError) as ctx:
            make_run(self.experiment, n_evaluations=10, n_local_evaluations=11).clean()
        self.assertIn("n_local_evaluations", ctx.exception.message_dict)

    def test_unknown_algorithm(self):
        with self.assertRaises(ValidationError) as ctx:
            make_run(self.experiment, algorithm="pso").clean()
        self.assertIn("algorithm", ctx.exception.message_dict)

    def test_seed_beyond_32_bits(self):
        make_run(self.experiment, seed=2**40 + 5).save()
        self.assertEqual(int(RunRecord.objects.get().seed), 2**40 + 5)

    # -------------------------
    # Querysets
    # -------------------------
    def test_querysets(self):
        hit = make_run(self.experiment, best_f=-1.99995)
        miss = make_run(self.experiment, run_index=1, best_f=-1.5, terminated_by=RunRecord.Termination.STAGNATION)
        other = make_run(self.experiment, run_index=2, benchmark_id="sphere", algorithm=RunRecord.Algorithm.CLASSIC_DE, best_f=0.0)
        RunRecord.objects.bulk_create([hit, miss, other])

        sinusoidal = RunRecord.objects.for_benchmark("SINUSOIDAL")
        self.assertEqual(sinusoidal.count(), 2)
        self.assertEqual(list(sinusoidal.successful(-2.0).values_list("run_index", flat=True)), [0])
        self.assertEqual(list(RunRecord.objects.terminated_early().values_list("run_index", flat=True)), [1])
        self.assertEqual(RunRecord.objects.for_algorithm("classic_de").get().benchmark_id, "sphere")
