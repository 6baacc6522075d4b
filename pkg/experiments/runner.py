"""Seeded batch execution.

Kept free of ORM access so the worker function can run in a process pool.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

from optimizer.benchmarks import lookup_multi, lookup_single
from optimizer.core import SearchSpace
from optimizer.engine import EngineConfig, RunResult, run_aded, run_classic_de
from optimizer.moo import MoResult, MoSettings, WeightMode, run_aded_mo

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunTask:
    benchmark_id: str
    algorithm: str
    config: EngineConfig
    space: SearchSpace
    run_index: int
    # Multi-objective runs only.
    weights: tuple = ()
    weight_mode: WeightMode = WeightMode.FIXED
    # Free-form tag carried through to the outcome, e.g. a tournament variant.
    label: str = ""


@dataclass(frozen=True)
class RunOutcome:
    task: RunTask
    result: Union[RunResult, MoResult]

    @property
    def benchmark_id(self) -> str:
        return self.task.benchmark_id

    @property
    def algorithm(self) -> str:
        return self.task.algorithm

    @property
    def run_index(self) -> int:
        return self.task.run_index


def execute(task: RunTask) -> RunOutcome:
    if task.algorithm == "aded_mo":
        result = run_aded_mo(
            lookup_multi(task.benchmark_id), task.space, task.config, task.weights, MoSettings(task.weight_mode)
        )
        summary = f"best_scalarized={result.best_scalarized[1]:.10g} front={len(result.front_f)}"
    else:
        engine = run_classic_de if task.algorithm == "classic_de" else run_aded
        result = engine(lookup_single(task.benchmark_id), task.space, task.config)
        summary = f"best_f={result.best_f:.10g}"
    logger.info(
        "run complete: benchmark=%s algorithm=%s%s run=%d seed=%d %s wall=%.2fs",
        task.benchmark_id, task.algorithm, f" [{task.label}]" if task.label else "",
        task.run_index, task.config.seed, summary, result.wall_seconds,
    )
    return RunOutcome(task, result)


def run_tasks(tasks: Sequence[RunTask], jobs: int = 1) -> list[RunOutcome]:
    """Execute ``tasks``; outcomes come back in task order whatever the worker count."""
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [execute(task) for task in tasks]
    logger.info("dispatching %d runs to %d workers", len(tasks), min(jobs, len(tasks)))
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(execute, tasks))
