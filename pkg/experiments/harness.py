"""Experiment orchestration behind the management commands.

Each ``*_experiment`` function executes a resolved plan, aggregates the runs,
writes the artifacts through ``reporting`` and, unless told otherwise, records
everything in the run ledger.
"""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from django.db import transaction

import adedbench
from optimizer.benchmarks import analytic_front, lookup
from optimizer.exceptions import InvalidConfigError, UndefinedMetricError
from optimizer.metrics import (
    FrontPair,
    QMeasure,
    RunBatch,
    aov,
    convergence_speed,
    generational_distance,
    pooled_q_measure,
    q_measure,
    spread,
    success_rate,
)
from optimizer.moo import pareto_dominates
from optimizer.stats import compare_batches, rank_variants
from optimizer.variation import ScheduleMode, ScheduleParams, table_variants

from . import reporting
from .config import ExperimentPlan
from .models import Experiment, RunRecord
from .presets import TOURNAMENT_PARAMETERS
from .runner import RunOutcome, RunTask, run_tasks

logger = logging.getLogger(__name__)

ALGORITHM_LABELS = {"aded": "ADED", "classic_de": "DE", "aded_mo": "ADED-MO"}


# -------------------------
# Aggregates
# -------------------------
@dataclass(frozen=True)
class BatchSummary:
    benchmark_id: str
    algorithm: str
    label: str
    runs: int
    mean: float
    sd: float
    best: float
    worst: float
    aov: float
    convergence_speed: float
    known_optimum: Optional[float]
    success_rate: Optional[float]
    q: Optional[QMeasure]
    mean_evaluations: float
    mean_generations: float
    mean_final_convergence_rate: float
    config_hash: str


@dataclass(frozen=True)
class MoSummary:
    benchmark_id: str
    run_index: int
    seed: int
    front_size: int
    generations: int
    n_evaluations: int
    best_scalarized: float
    gd: Optional[float]
    spread: Optional[float]
    terminated_by: str


@dataclass
class HarnessReport:
    command: str
    plan: ExperimentPlan
    outcomes: list = field(default_factory=list)
    summaries: list = field(default_factory=list)
    comparisons: list = field(default_factory=list)
    variants: list = field(default_factory=list)
    mo_rows: list = field(default_factory=list)
    experiment: Optional[Experiment] = None
    # Second plan of a comparison.
    against: Optional[ExperimentPlan] = None

    @property
    def output_dir(self):
        return self.plan.output_dir

    @property
    def config_hash(self) -> str:
        if self.against is None:
            return self.plan.config_hash()
        pair = f"{self.plan.config_hash()}:{self.against.config_hash()}"
        return hashlib.sha256(pair.encode("utf-8")).hexdigest()

    def plan_snapshot(self) -> dict:
        snapshot = self.plan.snapshot()
        if self.against is not None:
            snapshot["against"] = self.against.snapshot()
        return snapshot

    @property
    def tool_version(self) -> str:
        return adedbench.__version__


def build_tasks(plan: ExperimentPlan, algorithm: Optional[str] = None, config=None, label: str = "") -> list[RunTask]:
    algorithm = algorithm or plan.algorithm
    config = config or plan.config_for(algorithm)
    tasks = []
    for benchmark_id in plan.benchmarks:
        space = plan.space_for(benchmark_id)
        weights = plan.weights_for(benchmark_id) if algorithm == "aded_mo" else ()
        for run_index in range(plan.n_runs):
            tasks.append(
                RunTask(
                    benchmark_id=benchmark_id,
                    algorithm=algorithm,
                    config=config.replace(seed=plan.seed_for(run_index)),
                    space=space,
                    run_index=run_index,
                    weights=weights,
                    weight_mode=plan.weight_mode,
                    label=label,
                )
            )
    return tasks


def batch_for(plan: ExperimentPlan, outcomes: list[RunOutcome], benchmark_id: str) -> RunBatch:
    results = [o.result for o in outcomes if o.benchmark_id == benchmark_id]
    config_hash = outcomes[0].task.config.config_hash() if outcomes else ""
    return RunBatch(results, lookup(benchmark_id).known_optimum, plan.success_tol, benchmark_id, config_hash)


def summarize(batch: RunBatch, algorithm: str, label: str = "") -> BatchSummary:
    values = batch.best_values()
    has_optimum = batch.known_optimum is not None
    return BatchSummary(
        benchmark_id=batch.benchmark_id,
        algorithm=algorithm,
        label=label or ALGORITHM_LABELS[algorithm],
        runs=len(batch),
        mean=float(values.mean()),
        sd=float(values.std(ddof=1)) if len(values) > 1 else 0.0,
        best=float(values.min()),
        worst=float(values.max()),
        aov=aov(batch),
        convergence_speed=convergence_speed(batch),
        known_optimum=batch.known_optimum,
        success_rate=success_rate(batch) if has_optimum else None,
        q=q_measure(batch) if has_optimum else None,
        mean_evaluations=float(np.mean([r.n_evaluations for r in batch.results])),
        mean_generations=float(np.mean([r.generations for r in batch.results])),
        mean_final_convergence_rate=float(np.mean([r.final_convergence_rate for r in batch.results])),
        config_hash=batch.config_hash,
    )


def _summaries(plan: ExperimentPlan, outcomes: list[RunOutcome], algorithm: str, label: str = "") -> list[BatchSummary]:
    return [summarize(batch_for(plan, outcomes, b), algorithm, label) for b in plan.benchmarks]


# -------------------------
# Commands
# -------------------------
def run_experiment(plan: ExperimentPlan, record: bool = True) -> HarnessReport:
    if plan.algorithm == "aded_mo":
        return moo_experiment(plan, record)
    outcomes = run_tasks(build_tasks(plan), plan.jobs)
    report = HarnessReport(Experiment.Command.RUN, plan, outcomes, _summaries(plan, outcomes, plan.algorithm))
    return _finish(report, record)


def comparison_labels(plan_a: ExperimentPlan, plan_b: ExperimentPlan) -> tuple[str, str]:
    """Algorithm labels, qualified by the differing plan keys when both plans run the same algorithm."""
    label_a, label_b = ALGORITHM_LABELS[plan_a.algorithm], ALGORITHM_LABELS[plan_b.algorithm]
    if label_a == label_b:
        diff_a, diff_b = plan_a.differences(plan_b), plan_b.differences(plan_a)
        if diff_a:
            label_a = f"{label_a} {','.join(diff_a)}"
        if diff_b:
            label_b = f"{label_b} {','.join(diff_b)}"
    return label_a, label_b


def compare_experiment(plan: ExperimentPlan, against: Optional[ExperimentPlan] = None, record: bool = True) -> HarnessReport:
    """Plan ``plan`` against plan ``against`` on every shared benchmark, run for run.

    Without ``against`` the plan is compared with classic DE on the same seeds.
    """
    against = against or plan.with_algorithm("classic_de")
    for p in (plan, against):
        if p.algorithm == "aded_mo":
            raise InvalidConfigError("compare works on single-objective plans only")
        if p.n_runs < 2:
            raise InvalidConfigError(f"compare needs at least two runs per benchmark, got {p.n_runs}")
    if plan.benchmarks != against.benchmarks:
        raise InvalidConfigError(
            f"compared plans must share their benchmarks: {', '.join(plan.benchmarks)} vs {', '.join(against.benchmarks)}"
        )
    labels = comparison_labels(plan, against)
    first = run_tasks(build_tasks(plan), plan.jobs)
    second = run_tasks(build_tasks(against), plan.jobs)
    report = HarnessReport(Experiment.Command.COMPARE, plan, first + second, against=against)
    report.summaries = (
        _summaries(plan, first, plan.algorithm, labels[0]) + _summaries(against, second, against.algorithm, labels[1])
    )
    report.comparisons = [
        compare_batches(batch_for(plan, first, b), batch_for(against, second, b), labels) for b in plan.benchmarks
    ]
    return _finish(report, record)


def tournament_experiment(plan: ExperimentPlan, record: bool = True) -> HarnessReport:
    """Every mutation/crossover variant with its fixed {F, CR} pair, ranked on AOV, Cs and Q."""
    missing = [b for b in plan.benchmarks if lookup(b).known_optimum is None]
    if missing:
        raise InvalidConfigError(f"tournament needs benchmarks with a known optimum; missing for {', '.join(missing)}")
    report = HarnessReport(Experiment.Command.TOURNAMENT, plan)
    scores = []
    for variant in table_variants():
        F, CR = TOURNAMENT_PARAMETERS[variant.name]
        config = plan.engine.replace(strategy=variant, schedule=ScheduleParams(F, CR, ScheduleMode.FIXED))
        outcomes = run_tasks(build_tasks(plan, "aded", config, label=variant.name), plan.jobs)
        batches = [batch_for(plan, outcomes, b) for b in plan.benchmarks]
        report.outcomes += outcomes
        report.summaries += [summarize(batch, "aded", variant.name) for batch in batches]
        scores.append(
            (
                variant.name,
                float(np.mean([aov(b) for b in batches])),
                float(np.mean([convergence_speed(b) for b in batches])),
                pooled_q_measure(batches).Q,
            )
        )
    report.variants = rank_variants(scores)
    return _finish(report, record)


def moo_experiment(plan: ExperimentPlan, record: bool = True) -> HarnessReport:
    outcomes = run_tasks(build_tasks(plan, "aded_mo"), plan.jobs)
    report = HarnessReport(Experiment.Command.MOO, plan, outcomes)
    references = {}
    for benchmark_id in plan.benchmarks:
        if getattr(lookup(benchmark_id), "front_sampler", None) is not None:
            references[benchmark_id] = analytic_front(benchmark_id, plan.front_samples)
    for outcome in outcomes:
        result = outcome.result
        for i, a in enumerate(result.front_f):
            if any(pareto_dominates(b, a) for j, b in enumerate(result.front_f) if j != i):
                raise UndefinedMetricError(f"{outcome.benchmark_id} run {outcome.run_index}: front is not mutually non-dominated")
        gd = delta = None
        reference = references.get(outcome.benchmark_id)
        if reference is not None:
            pair = FrontPair(result.front_f, reference)
            gd = generational_distance(pair)
            try:
                delta = spread(pair)
            except UndefinedMetricError:
                logger.warning("spread undefined for %s run %d", outcome.benchmark_id, outcome.run_index)
        report.mo_rows.append(
            MoSummary(
                benchmark_id=outcome.benchmark_id,
                run_index=outcome.run_index,
                seed=outcome.task.config.seed,
                front_size=len(result.front_f),
                generations=result.generations,
                n_evaluations=result.n_evaluations,
                best_scalarized=float(result.best_scalarized[1]),
                gd=gd,
                spread=delta,
                terminated_by=result.terminated_by.value,
            )
        )
    return _finish(report, record)


# -------------------------
# Output and ledger
# -------------------------
def _finish(report: HarnessReport, record: bool) -> HarnessReport:
    if record:
        report.experiment = record_experiment(report)
    reporting.write_artifacts(report)
    logger.info("%s finished: %d runs, artifacts in %s", report.command, len(report.outcomes), report.output_dir)
    return report


@transaction.atomic
def record_experiment(report: HarnessReport) -> Experiment:
    experiment = Experiment.objects.create(
        command=report.command,
        label=report.plan.preset,
        config_hash=report.config_hash,
        plan=report.plan_snapshot(),
        tool_version=report.tool_version,
        output_dir=str(report.output_dir),
    )
    mo_rows = {(row.benchmark_id, row.run_index): row for row in report.mo_rows}
    records = []
    for outcome in report.outcomes:
        result, task = outcome.result, outcome.task
        if task.algorithm == "aded_mo":
            row = mo_rows.get((task.benchmark_id, task.run_index))
            best_x, best_f = result.best_scalarized
            extra = {"front_size": len(result.front_f), "gd": row.gd if row else None, "spread": row.spread if row else None}
            strategy, local = "aded-neighbors", 0
        else:
            best_x, best_f = result.best_x, result.best_f
            extra = {"final_convergence_rate": result.final_convergence_rate}
            strategy, local = task.label or task.config.strategy.name, result.n_local_evaluations
        records.append(
            RunRecord(
                experiment=experiment,
                benchmark_id=task.benchmark_id,
                algorithm=task.algorithm,
                strategy=strategy,
                run_index=task.run_index,
                seed=task.config.seed,
                best_f=float(best_f),
                best_x=[float(v) for v in best_x],
                n_evaluations=result.n_evaluations,
                n_local_evaluations=local,
                generations=result.generations,
                terminated_by=result.terminated_by.value,
                wall_seconds=result.wall_seconds,
                extra=extra,
            )
        )
    RunRecord.objects.bulk_create(records)
    logger.info("recorded experiment #%d with %d runs", experiment.pk, len(records))
    return experiment
