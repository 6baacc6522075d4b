from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from experiments.models import Experiment, RunRecord
from optimizer.benchmarks import Family, catalog, ids_in_family


class BenchmarkApiTests(APITestCase):
    def setUp(self):
        self.url = reverse("benchmark_list")

    def test_list_all(self):
        response = self.client.get(self.url)
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(len(response.data), len(catalog()))
        rastrigin = next(item for item in response.data if item["id"] == "rastrigin")
        self.assertEqual(rastrigin["bounds"], [[-5.12, 5.12], [-5.12, 5.12]])
        self.assertEqual(rastrigin["kind"], "single")
        self.assertFalse(rastrigin["has_front"])

    def test_filter_family(self):
        response = self.client.get(self.url, {"family": "plate"})
        self.assertEqual([item["id"] for item in response.data], ids_in_family(Family.PLATE))

    def test_filter_kind(self):
        response = self.client.get(self.url, {"kind": "multi"})
        self.assertEqual([item["id"] for item in response.data], ["zdt1", "zdt2", "dltz1", "paper_mo_demo"])
        zdt1 = response.data[0]
        self.assertEqual((zdt1["n_objectives"], zdt1["default_dim"]), (2, 30))
        self.assertIsNone(zdt1["known_optimum"])
        self.assertTrue(zdt1["has_front"])

    def test_bad_filters(self):
        self.assertEqual(self.client.get(self.url, {"family": "spiky"}).status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(self.client.get(self.url, {"kind": "both"}).status_code, status.HTTP_400_BAD_REQUEST)

    def test_read_only(self):
        response = self.client.post(self.url, {"id": "new"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_405_METHOD_NOT_ALLOWED)


class ExperimentApiTests(APITestCase):
    def setUp(self):
        self.run = Experiment.objects.create(
            command=Experiment.Command.RUN, label="paper-sinusoidal", config_hash="a" * 64,
            tool_version="0.3.0", plan={"pop": "50"},
        )
        self.moo = Experiment.objects.create(command=Experiment.Command.MOO, config_hash="b" * 64, tool_version="0.3.0")
        for i in range(2):
            RunRecord.objects.create(
                experiment=self.run, benchmark_id="sinusoidal", algorithm="aded", strategy="aded-default",
                run_index=i, seed=i, best_f=-2.0, best_x=[-1.57, -1.57], n_evaluations=5000,
                n_local_evaluations=50, generations=49, terminated_by="max-generations",
            )
        self.list_url = reverse("experiment_list")

    # -------------------------
    # List
    # -------------------------
    def test_list(self):
        response = self.client.get(self.list_url)
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(len(response.data), 2)
        counts = {item["command"]: item["run_count"] for item in response.data}
        self.assertEqual(counts, {"run": 2, "moo": 0})

    def test_filters(self):
        response = self.client.get(self.list_url, {"command": "moo"})
        self.assertEqual([item["id"] for item in response.data], [self.moo.id])
        response = self.client.get(self.list_url, {"hash": "a" * 64})
        self.assertEqual([item["id"] for item in response.data], [self.run.id])

    # -------------------------
    # Retrieve single
    # -------------------------
    def test_detail(self):
        response = self.client.get(reverse("experiment_detail", args=[self.run.id]))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["plan"], {"pop": "50"})
        self.assertEqual([run["run_index"] for run in response.data["runs"]], [0, 1])
        self.assertEqual(response.data["runs"][1]["seed"], 1)

    def test_detail_not_found(self):
        response = self.client.get(reverse("experiment_detail", args=[self.moo.id + 100]))
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
        self.assertEqual(response.data["detail"], "Not found.")
