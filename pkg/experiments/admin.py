from django.contrib import admin

from .models import Experiment, RunRecord


class RunRecordInline(admin.TabularInline):
    model = RunRecord
    extra = 0
    fields = ("benchmark_id", "algorithm", "strategy", "run_index", "seed", "best_f", "n_evaluations", "generations", "terminated_by")
    readonly_fields = fields
    can_delete = False


@admin.register(Experiment)
class ExperimentAdmin(admin.ModelAdmin):
    list_display = ("id", "command", "label", "config_hash", "tool_version", "created_at")
    list_filter = ("command", "label", "created_at")
    search_fields = ("config_hash", "label")
    date_hierarchy = "created_at"
    ordering = ("-created_at",)
    inlines = [RunRecordInline]


@admin.register(RunRecord)
class RunRecordAdmin(admin.ModelAdmin):
    list_display = ("benchmark_id", "algorithm", "strategy", "run_index", "best_f", "n_evaluations", "terminated_by", "experiment")
    list_filter = ("algorithm", "terminated_by", "benchmark_id")
    search_fields = ("benchmark_id", "strategy")
    ordering = ("experiment", "benchmark_id", "run_index")
