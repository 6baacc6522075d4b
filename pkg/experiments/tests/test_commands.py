import csv
import json
import tempfile
from io import StringIO
from pathlib import Path

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase
from scipy.stats import rankdata

from experiments.models import Experiment, RunRecord
from experiments.reporting import COMPARISON_HEADER, GENERATION_HEADER, MO_RUN_HEADER, RUN_HEADER, TOURNAMENT_HEADER

SMALL = ["--pop", "10", "--gens", "5", "--jobs", "1"]


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


class CommandTestCase(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out = Path(self.tmp.name) / "results"

    def call(self, name, *args):
        stdout = StringIO()
        call_command(name, *args, stdout=stdout)
        return stdout.getvalue()


class RunCommandTests(CommandTestCase):
    def test_writes_artifacts_and_records(self):
        output = self.call("run", "--benchmark", "sphere,rastrigin", "--runs", "2", *SMALL, "--out", str(self.out))
        self.assertIn("Artifacts written to", output)
        for name in ("generations.csv", "runs.csv", "report.json", "report.txt"):
            self.assertTrue((self.out / name).is_file(), name)

        runs = read_rows(self.out / "runs.csv")
        self.assertEqual(runs[0], RUN_HEADER)
        self.assertEqual([(r[0], r[3], r[4]) for r in runs[1:]],
                         [("sphere", "0", "0"), ("sphere", "1", "1"), ("rastrigin", "0", "0"), ("rastrigin", "1", "1")])
        generations = read_rows(self.out / "generations.csv")
        self.assertEqual(generations[0], GENERATION_HEADER)
        self.assertEqual(generations[1][5], "1")
        self.assertEqual(len(generations) - 1, sum(int(r[RUN_HEADER.index("generations")]) for r in runs[1:]))

        experiment = Experiment.objects.get()
        self.assertEqual(experiment.command, "run")
        self.assertEqual(experiment.runs.count(), 4)
        self.assertEqual(experiment.config_hash, json.loads((self.out / "report.json").read_text())["config_hash"])

    def test_repeat_is_byte_identical(self):
        args = ["--benchmark", "ackley", "--runs", "2", "--seed", "7", *SMALL, "--out", str(self.out), "--no-record"]
        names = ("generations.csv", "runs.csv", "report.json", "report.txt")
        self.call("run", *args)
        first = {name: (self.out / name).read_bytes() for name in names}
        self.call("run", *args)
        for name in names:
            self.assertEqual((self.out / name).read_bytes(), first[name], name)

    @pytest.mark.slow
    def test_sinusoidal_preset(self):
        self.call("run", "--preset", "paper-sinusoidal", "--runs", "1", "--seed", "2", "--jobs", "1", "--out", str(self.out))
        record = RunRecord.objects.get()
        self.assertAlmostEqual(record.best_f, -2.0, delta=1e-3)
        self.assertEqual(record.experiment.label, "paper-sinusoidal")

    def test_no_record(self):
        self.call("run", *SMALL, "--out", str(self.out), "--no-record")
        self.assertFalse(Experiment.objects.exists())

    def test_json_format(self):
        output = self.call("run", *SMALL, "--out", str(self.out), "--format", "json", "--no-record")
        payload, _ = json.JSONDecoder().raw_decode(output)
        self.assertEqual(payload["command"], "run")
        self.assertEqual(payload["summaries"][0]["benchmark_id"], "sphere")
        self.assertEqual(payload["plan"]["pop"], "10")

    def test_plan_file_and_set(self):
        plan = Path(self.tmp.name) / "plan.env"
        plan.write_text("benchmark=booth\nruns=2\npop=12\n", encoding="utf-8")
        self.call("run", "--config", str(plan), "--set", "gens=4", "--set", "local_search=off",
                  "--out", str(self.out), "--jobs", "1")
        record = RunRecord.objects.filter(benchmark_id="booth")
        self.assertEqual(record.count(), 2)
        self.assertTrue(all(r.n_local_evaluations == 0 for r in record))
        self.assertEqual(Experiment.objects.get().plan["pop"], "12")

    def test_export_population(self):
        self.call("run", *SMALL, "--out", str(self.out), "--export-population", "--no-record")
        rows = read_rows(self.out / "population_sphere.csv")
        self.assertEqual(rows[0], ["label", "run", "generation", "individual", "x1", "x2"])
        self.assertEqual(len(rows) - 1, 10 * len(read_rows(self.out / "generations.csv")[1:]))

    def test_classic_algorithm(self):
        self.call("run", *SMALL, "--set", "algorithm=classic_de", "--out", str(self.out))
        record = RunRecord.objects.get()
        self.assertEqual((record.algorithm, record.strategy, record.n_local_evaluations), ("classic_de", "rand1bin", 0))

    # -------------------------
    # Exit codes
    # -------------------------
    def test_config_errors_exit_2(self):
        for args in (["--benchmark", "zdt99"], ["--set", "colour=blue"], ["--set", "gens"], ["--pop", "3"],
                     ["--config", str(Path(self.tmp.name) / "missing.env")]):
            with self.subTest(args=args):
                with self.assertRaises(CommandError) as ctx:
                    self.call("run", *args, "--out", str(self.out))
                self.assertEqual(ctx.exception.returncode, 2)

    def test_unwritable_output_exits_3(self):
        blocker = Path(self.tmp.name) / "file.txt"
        blocker.write_text("x")
        with self.assertRaises(CommandError) as ctx:
            self.call("run", *SMALL, "--out", str(blocker / "sub"), "--no-record")
        self.assertEqual(ctx.exception.returncode, 3)


class CompareCommandTests(CommandTestCase):
    def test_compare(self):
        output = self.call("compare", "--benchmark", "sphere", "--runs", "3", *SMALL, "--out", str(self.out))
        self.assertIn("ADED mean", output)
        rows = read_rows(self.out / "comparison.csv")
        self.assertEqual(len(rows), 2)
        self.assertEqual(rows[1][:3], ["sphere", "ADED", "DE"])
        algorithms = sorted(set(RunRecord.objects.values_list("algorithm", flat=True)))
        self.assertEqual(algorithms, ["aded", "classic_de"])
        self.assertEqual(RunRecord.objects.count(), 6)

    def test_plan_against_itself(self):
        self.call("compare", "--benchmark", "sphere,ackley", "--runs", "3", *SMALL,
                  "--against-algorithm", "aded", "--out", str(self.out))
        rows = read_rows(self.out / "comparison.csv")
        self.assertEqual(rows[0], COMPARISON_HEADER)
        self.assertEqual([r[0] for r in rows[1:]], ["sphere", "ackley"])
        t, p = COMPARISON_HEADER.index("t"), COMPARISON_HEADER.index("p")
        for row in rows[1:]:
            with self.subTest(benchmark=row[0]):
                self.assertEqual(row[1:3], ["ADED", "ADED"])
                self.assertEqual(float(row[t]), 0.0)
                self.assertAlmostEqual(float(row[p]), 1.0, places=12)
        self.assertEqual(set(RunRecord.objects.values_list("algorithm", flat=True)), {"aded"})
        self.assertEqual(RunRecord.objects.count(), 12)

    def test_variant_against_variant(self):
        self.call("compare", "--benchmark", "sphere", "--runs", "3", *SMALL,
                  "--against-set", "neighborhood=all", "--out", str(self.out))
        rows = read_rows(self.out / "comparison.csv")
        self.assertEqual(rows[1][:3], ["sphere", "ADED neighborhood=dynamic", "ADED neighborhood=all"])
        experiment = Experiment.objects.get()
        self.assertEqual(experiment.plan["neighborhood"], "dynamic")
        self.assertEqual(experiment.plan["against"]["neighborhood"], "all")
        self.assertEqual(experiment.config_hash, json.loads((self.out / "report.json").read_text())["config_hash"])

    def test_second_plan_errors_exit_2(self):
        for args in (["--against-set", "benchmark=ackley"], ["--against-preset", "paper-table99"],
                     ["--against-config", str(Path(self.tmp.name) / "missing.env")]):
            with self.subTest(args=args):
                with self.assertRaises(CommandError) as ctx:
                    self.call("compare", "--benchmark", "sphere", "--runs", "3", *SMALL, *args, "--out", str(self.out))
                self.assertEqual(ctx.exception.returncode, 2)

    def test_compare_needs_two_runs(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("compare", *SMALL, "--runs", "1", "--out", str(self.out))
        self.assertEqual(ctx.exception.returncode, 2)


class TournamentCommandTests(CommandTestCase):
    def test_tournament(self):
        self.call("tournament", "--benchmark", "sphere", "--local-search", "off", *SMALL, "--out", str(self.out))
        rows = read_rows(self.out / "tournament.csv")
        self.assertEqual(rows[0], TOURNAMENT_HEADER)
        self.assertEqual(len(rows) - 1, 14)
        averages = [float(r[-1]) for r in rows[1:]]
        self.assertEqual(averages, sorted(averages))
        # Ranks recomputed from the emitted AOV, Cs and Q columns.
        table = [[float(v) for v in r[1:4]] for r in rows[1:]]
        ranks = [rankdata([t[c] for t in table]) for c in range(3)]
        for i, row in enumerate(rows[1:]):
            self.assertEqual([float(v) for v in row[4:7]], [ranks[c][i] for c in range(3)])
            self.assertAlmostEqual(float(row[7]), sum(ranks[c][i] for c in range(3)) / 3, places=12)
        self.assertEqual(len(set(RunRecord.objects.values_list("strategy", flat=True))), 14)

    def test_tournament_needs_known_optimum(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("tournament", "--benchmark", "zdt1", *SMALL, "--out", str(self.out))
        self.assertEqual(ctx.exception.returncode, 2)


class MooCommandTests(CommandTestCase):
    def test_moo_defaults_to_zdt1(self):
        self.call("moo", "--gens", "3", "--pop", "10", "--local-search", "off", "--jobs", "1",
                  "--weight-mode", "random", "--out", str(self.out))
        front = read_rows(self.out / "front_zdt1.csv")
        self.assertEqual(front[0], ["run"] + [f"x{j}" for j in range(1, 31)] + ["f1", "f2"])
        self.assertGreater(len(front), 1)
        runs = read_rows(self.out / "runs.csv")
        self.assertEqual(runs[0], MO_RUN_HEADER)
        self.assertNotEqual(runs[1][MO_RUN_HEADER.index("gd")], "")

        record = RunRecord.objects.get()
        self.assertEqual(record.algorithm, "aded_mo")
        self.assertEqual(record.extra["front_size"], len(front) - 1)
        self.assertEqual(Experiment.objects.get().command, "moo")

    def test_weight_count_mismatch(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("moo", "--benchmark", "dltz1", "--weights", "0.5,0.5", *SMALL, "--out", str(self.out))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_demo_without_front(self):
        self.call("moo", "--benchmark", "paper_mo_demo", "--local-search", "off", *SMALL, "--out", str(self.out))
        runs = read_rows(self.out / "runs.csv")
        self.assertEqual(runs[1][MO_RUN_HEADER.index("gd")], "")
        self.assertTrue((self.out / "front_paper_mo_demo.csv").is_file())


class ListBenchmarksCommandTests(TestCase):
    def test_text(self):
        stdout = StringIO()
        call_command("list_benchmarks", "--family", "plate", stdout=stdout)
        lines = stdout.getvalue().splitlines()
        self.assertTrue(lines[0].startswith("id"))
        self.assertEqual([line.split()[0] for line in lines[1:4]], ["booth", "matyas", "mccormick"])
        self.assertIn("3 benchmarks", lines[-1])

    def test_json(self):
        stdout = StringIO()
        call_command("list_benchmarks", "--format", "json", "--kind", "multi", stdout=stdout)
        self.assertEqual([item["id"] for item in json.loads(stdout.getvalue())], ["zdt1", "zdt2", "dltz1", "paper_mo_demo"])

    def test_no_match(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("list_benchmarks", "--family", "plate", "--kind", "multi", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
