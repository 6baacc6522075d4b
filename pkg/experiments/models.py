from django.core.exceptions import ValidationError
from django.db import models


class ExperimentQuerySet(models.QuerySet):
    def of_command(self, command):
        return self.filter(command=command)

    def with_hash(self, config_hash):
        return self.filter(config_hash=config_hash)

    def recent(self, limit=10):
        return self.order_by("-created_at", "-pk")[:limit]


class Experiment(models.Model):
    class Command(models.TextChoices):
        RUN = "run", "Run"
        COMPARE = "compare", "Compare"
        TOURNAMENT = "tournament", "Tournament"
        MOO = "moo", "Multi-objective"

    command = models.CharField(max_length=16, choices=Command.choices, db_index=True)
    label = models.CharField(max_length=200, blank=True, help_text="Preset the plan was resolved from.")
    config_hash = models.CharField(max_length=64, db_index=True)
    plan = models.JSONField(default=dict, blank=True)
    tool_version = models.CharField(max_length=32)
    output_dir = models.CharField(max_length=500, blank=True)

    created_at = models.DateTimeField(auto_now_add=True, db_index=True)

    objects = ExperimentQuerySet.as_manager()

    class Meta:
        ordering = ["-created_at"]

    def __str__(self):
        return f"{self.command} {self.label or 'custom'} (#{self.pk})"


class RunRecordQuerySet(models.QuerySet):
    # Facets
    def for_benchmark(self, benchmark_id):
        return self.filter(benchmark_id__iexact=str(benchmark_id))

    def for_algorithm(self, algorithm):
        return self.filter(algorithm=algorithm)

    # Outcomes
    def successful(self, optimum, tol=1e-4):
        return self.filter(best_f__gte=optimum - tol, best_f__lte=optimum + tol)

    def terminated_early(self):
        return self.filter(terminated_by=RunRecord.Termination.STAGNATION)


class RunRecord(models.Model):
    class Algorithm(models.TextChoices):
        ADED = "aded", "ADED"
        CLASSIC_DE = "classic_de", "Classic DE"
        ADED_MO = "aded_mo", "ADED multi-objective"

    class Termination(models.TextChoices):
        MAX_GENERATIONS = "max-generations", "Max generations"
        STAGNATION = "stagnation", "Stagnation"

    experiment = models.ForeignKey(Experiment, related_name="runs", on_delete=models.CASCADE)

    # What ran
    benchmark_id = models.CharField(max_length=64, db_index=True)
    algorithm = models.CharField(max_length=16, choices=Algorithm.choices)
    strategy = models.CharField(max_length=40, blank=True)
    run_index = models.PositiveIntegerField()
    seed = models.DecimalField(max_digits=20, decimal_places=0)

    # Outcome
    best_f = models.FloatField()
    best_x = models.JSONField(default=list)
    n_evaluations = models.IntegerField()
    n_local_evaluations = models.IntegerField(default=0)
    generations = models.PositiveIntegerField()
    terminated_by = models.CharField(max_length=20, choices=Termination.choices)
    wall_seconds = models.FloatField(default=0.0)
    extra = models.JSONField(default=dict, blank=True, help_text="Command-specific metrics, e.g. GD and spread.")

    created_at = models.DateTimeField(auto_now_add=True)

    objects = RunRecordQuerySet.as_manager()

    class Meta:
        ordering = ["experiment", "benchmark_id", "algorithm", "run_index"]
        indexes = [
            models.Index(fields=["benchmark_id", "algorithm"], name="runrecord_bench_algo_idx"),
        ]

    def __str__(self):
        return f"{self.algorithm} on {self.benchmark_id} run {self.run_index} (#{self.pk})"

    def clean(self):
        errors = {}
        if self.n_evaluations is not None and self.n_evaluations < 0:
            errors["n_evaluations"] = "Evaluation count cannot be negative."
        if self.n_local_evaluations is not None and self.n_evaluations is not None:
            if not 0 <= self.n_local_evaluations <= max(self.n_evaluations, 0):
                errors["n_local_evaluations"] = "Local evaluations must lie between 0 and the total count."
        if self.algorithm not in self.Algorithm.values:
            errors["algorithm"] = f"Unknown algorithm '{self.algorithm}'."
        if errors:
            raise ValidationError(errors)
