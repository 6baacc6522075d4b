import math

from rest_framework import serializers

from optimizer.benchmarks import MultiObjectiveSpec

from .models import Experiment, RunRecord


def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


class BenchmarkSerializer(serializers.Serializer):
    id = serializers.CharField()
    title = serializers.CharField()
    family = serializers.SerializerMethodField()
    kind = serializers.SerializerMethodField()
    dim_rule = serializers.SerializerMethodField()
    default_dim = serializers.IntegerField()
    n_objectives = serializers.IntegerField()
    bounds = serializers.SerializerMethodField()
    known_optimum = serializers.FloatField(allow_null=True)
    has_front = serializers.SerializerMethodField()

    def get_family(self, spec):
        return spec.family.value

    def get_kind(self, spec):
        return "multi" if isinstance(spec, MultiObjectiveSpec) else "single"

    def get_dim_rule(self, spec):
        return spec.dim_rule.value

    def get_bounds(self, spec):
        return [[float(lo), float(hi)] for lo, hi in spec.default_bounds.bounds()]

    def get_has_front(self, spec):
        return getattr(spec, "front_sampler", None) is not None


class RunRecordSerializer(serializers.ModelSerializer):
    seed = serializers.IntegerField()

    class Meta:
        model = RunRecord
        fields = [
            "id", "benchmark_id", "algorithm", "strategy",
            "run_index", "seed",
            "best_f", "best_x",
            "n_evaluations", "n_local_evaluations", "generations",
            "terminated_by", "wall_seconds", "extra",
            "created_at",
        ]
        read_only_fields = fields


class ExperimentSerializer(serializers.ModelSerializer):
    run_count = serializers.SerializerMethodField()

    class Meta:
        model = Experiment
        fields = ["id", "command", "label", "config_hash", "tool_version", "output_dir", "run_count", "created_at"]
        read_only_fields = fields

    def get_run_count(self, obj):
        return obj.runs.count()


class ExperimentDetailSerializer(ExperimentSerializer):
    runs = RunRecordSerializer(many=True, read_only=True)

    class Meta(ExperimentSerializer.Meta):
        fields = ExperimentSerializer.Meta.fields + ["plan", "runs"]
        read_only_fields = fields


# Harness aggregates (plain objects, never persisted)
class QMeasureSerializer(serializers.Serializer):
    C = serializers.SerializerMethodField()
    P = serializers.FloatField()
    Q = serializers.SerializerMethodField()
    infinite = serializers.BooleanField()

    def get_C(self, q):
        return _finite_or_none(q.C)

    def get_Q(self, q):
        return _finite_or_none(q.Q)


class BatchSummarySerializer(serializers.Serializer):
    benchmark_id = serializers.CharField()
    algorithm = serializers.CharField()
    label = serializers.CharField()
    runs = serializers.IntegerField()
    mean = serializers.FloatField()
    sd = serializers.FloatField()
    best = serializers.FloatField()
    worst = serializers.FloatField()
    aov = serializers.FloatField()
    convergence_speed = serializers.FloatField()
    known_optimum = serializers.FloatField(allow_null=True)
    success_rate = serializers.FloatField(allow_null=True)
    q = QMeasureSerializer(allow_null=True)
    mean_evaluations = serializers.FloatField()
    mean_generations = serializers.FloatField()
    mean_final_convergence_rate = serializers.FloatField()
    config_hash = serializers.CharField()


class ComparisonRowSerializer(serializers.Serializer):
    benchmark_id = serializers.CharField()
    label_a = serializers.CharField()
    label_b = serializers.CharField()
    mean_a = serializers.FloatField()
    sd_a = serializers.FloatField()
    mean_b = serializers.FloatField()
    sd_b = serializers.FloatField()
    t = serializers.FloatField()
    p = serializers.FloatField()
    df = serializers.FloatField()
    stars = serializers.CharField()


class VariantScoreSerializer(serializers.Serializer):
    variant = serializers.CharField()
    aov = serializers.FloatField()
    cs = serializers.FloatField()
    q = serializers.SerializerMethodField()
    aov_rank = serializers.FloatField()
    cs_rank = serializers.FloatField()
    q_rank = serializers.FloatField()
    average_rank = serializers.FloatField()

    def get_q(self, score):
        return _finite_or_none(score.q)


class MoSummarySerializer(serializers.Serializer):
    benchmark_id = serializers.CharField()
    run_index = serializers.IntegerField()
    seed = serializers.IntegerField()
    front_size = serializers.IntegerField()
    generations = serializers.IntegerField()
    n_evaluations = serializers.IntegerField()
    best_scalarized = serializers.FloatField()
    gd = serializers.FloatField(allow_null=True)
    spread = serializers.FloatField(allow_null=True)
    terminated_by = serializers.CharField()
