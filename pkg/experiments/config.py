"""Experiment plans: preset defaults, ``key = value`` plan files and CLI overrides.

Resolution order is preset < plan file < command-line flags. Plan files use the
same dotenv syntax as the project's ``.env``::

    preset = paper-table14
    runs = 10
    benchmark = rastrigin,ackley
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from django.conf import settings
from dotenv import dotenv_values

from optimizer.benchmarks import BenchmarkSpec, MultiObjectiveSpec, lookup
from optimizer.core import MAX_SEED, SearchSpace
from optimizer.engine import EngineConfig, NeighborhoodMode
from optimizer.exceptions import InvalidConfigError
from optimizer.moo import WeightMode
from optimizer.variation import CLASSIC_STRATEGY, LocalSearchBudget, Mutation, ScheduleMode, ScheduleParams, StrategyId

from .presets import DEFAULTS, PRESETS

logger = logging.getLogger(__name__)

ALGORITHMS = ("aded", "classic_de", "aded_mo")
FORMATS = ("csv", "json")
PLAN_KEYS = frozenset(DEFAULTS)
# Keys that change where or how output is written, not what is computed.
_PRESENTATION_KEYS = frozenset({"out", "jobs", "format", "export_population"})

_TRUE = {"on", "true", "yes", "1"}
_FALSE = {"off", "false", "no", "0"}


# -------------------------
# Value parsing
# -------------------------
def _blank(value) -> bool:
    return value is None or str(value).strip() == ""


def _as_int(key, value) -> int:
    try:
        return int(str(value).strip())
    except ValueError:
        raise InvalidConfigError(f"{key}: expected an integer, got '{value}'") from None


def _as_float(key, value) -> float:
    try:
        return float(str(value).strip())
    except ValueError:
        raise InvalidConfigError(f"{key}: expected a number, got '{value}'") from None


def _as_bool(key, value) -> bool:
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise InvalidConfigError(f"{key}: expected on/off, got '{value}'")


def _as_choice(key, value, choices) -> str:
    text = str(value).strip().lower()
    if text not in choices:
        raise InvalidConfigError(f"{key}: expected one of {', '.join(choices)}, got '{value}'")
    return text


def _as_list(value) -> list[str]:
    return [part.strip() for part in str(value).split(",") if part.strip()]


# -------------------------
# Plan
# -------------------------
@dataclass(frozen=True)
class ExperimentPlan:
    benchmarks: tuple
    algorithm: str
    engine: EngineConfig
    classic: EngineConfig
    n_runs: int
    base_seed: int
    output_dir: Path
    dim: Optional[int] = None
    bounds: Optional[tuple] = None
    jobs: int = 1
    fmt: str = "csv"
    weights: tuple = ()
    weight_mode: WeightMode = WeightMode.FIXED
    front_samples: int = 1000
    success_tol: float = 1e-4
    preset: str = "default"
    export_population: bool = False
    values: dict = field(default_factory=dict, repr=False)

    def config_for(self, algorithm: Optional[str] = None) -> EngineConfig:
        return self.classic if (algorithm or self.algorithm) == "classic_de" else self.engine

    def seed_for(self, run_index: int) -> int:
        return self.base_seed + run_index

    def space_for(self, benchmark_id: str) -> SearchSpace:
        spec = lookup(benchmark_id)
        if self.bounds is None:
            return spec.space(self.dim)
        dim = self.dim or spec.default_dim
        if spec.space(dim).dim != dim:
            raise InvalidConfigError(f"{spec.id} cannot run in {dim} dimensions")
        return SearchSpace.uniform(self.bounds[0], self.bounds[1], dim)

    def weights_for(self, benchmark_id: str) -> tuple:
        spec = lookup(benchmark_id)
        if not self.weights:
            return tuple([1.0 / spec.n_objectives] * spec.n_objectives)
        if len(self.weights) != spec.n_objectives:
            raise InvalidConfigError(
                f"{spec.id} has {spec.n_objectives} objectives but {len(self.weights)} weights were given"
            )
        return self.weights

    def snapshot(self) -> dict:
        """Resolved plan values, normalized to strings, for reports and the ledger."""
        data = {key: str(self.values.get(key, "")) for key in sorted(PLAN_KEYS)}
        data["preset"] = self.preset
        return data

    def config_hash(self) -> str:
        canonical = {k: v for k, v in self.snapshot().items() if k not in _PRESENTATION_KEYS}
        return hashlib.sha256(json.dumps(canonical, sort_keys=True).encode("utf-8")).hexdigest()

    def with_algorithm(self, algorithm: str) -> "ExperimentPlan":
        """Same plan run by another single-objective algorithm."""
        algorithm = _as_choice("algorithm", algorithm, ALGORITHMS)
        if (algorithm == "aded_mo") != (self.algorithm == "aded_mo"):
            raise InvalidConfigError(f"cannot switch a {self.algorithm} plan to {algorithm}")
        return replace(self, algorithm=algorithm, values={**self.values, "algorithm": algorithm})

    def differences(self, other: "ExperimentPlan") -> list[str]:
        """Computed plan keys whose values differ from ``other``, as ``key=value`` of this plan."""
        mine, theirs = self.snapshot(), other.snapshot()
        return [
            f"{key}={mine[key]}"
            for key in sorted(mine)
            if key not in _PRESENTATION_KEYS and key != "algorithm" and mine[key] != theirs.get(key)
        ]


def load_plan_file(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise InvalidConfigError(f"plan file not found: {path}")
    values = dotenv_values(path)
    missing = [key for key, value in values.items() if value is None]
    if missing:
        raise InvalidConfigError(f"{path}: keys without a value: {', '.join(missing)}")
    return dict(values)


def _check_keys(values: dict, origin: str) -> None:
    unknown = sorted(set(values) - PLAN_KEYS - {"preset"})
    if unknown:
        raise InvalidConfigError(f"unknown plan keys in {origin}: {', '.join(unknown)}")


def resolve_plan(preset: Optional[str] = None, config_file=None, **overrides) -> ExperimentPlan:
    """Merge preset, plan file and overrides (``None`` values are ignored) into a plan."""
    file_values = load_plan_file(config_file) if config_file else {}
    _check_keys(file_values, str(config_file))
    cli_values = {key: value for key, value in overrides.items() if value is not None}
    _check_keys(cli_values, "command-line flags")

    name = preset or file_values.pop("preset", None) or "default"
    file_values.pop("preset", None)
    if name not in PRESETS:
        raise InvalidConfigError(f"unknown preset '{name}'; available: {', '.join(PRESETS)}")
    values = {**DEFAULTS, **PRESETS[name], **file_values, **cli_values}
    logger.debug("resolved plan from preset %s: %s", name, values)
    return _build_plan(name, values)


def _build_plan(preset: str, values: dict) -> ExperimentPlan:
    harness = settings.ADEDBENCH
    values = dict(values)
    # Project-wide defaults; written back so snapshots and hashes record them.
    if _blank(values["success_tol"]):
        values["success_tol"] = harness["SUCCESS_TOL"]
    if _blank(values["front_samples"]):
        values["front_samples"] = harness["FRONT_SAMPLES"]

    algorithm = _as_choice("algorithm", values["algorithm"], ALGORITHMS)
    benchmarks = tuple(lookup(b).id for b in _as_list(values["benchmark"]))
    if not benchmarks:
        raise InvalidConfigError("benchmark: at least one benchmark id is required")
    expected = MultiObjectiveSpec if algorithm == "aded_mo" else BenchmarkSpec
    for benchmark_id in benchmarks:
        if not isinstance(lookup(benchmark_id), expected):
            kind = "multi-objective" if algorithm == "aded_mo" else "single-objective"
            raise InvalidConfigError(f"{algorithm} needs {kind} benchmarks; '{benchmark_id}' is not")

    n_runs = _as_int("runs", values["runs"])
    if n_runs < 1:
        raise InvalidConfigError(f"runs must be >= 1, got {n_runs}")
    base_seed = _as_int("seed", values["seed"])
    if not 0 <= base_seed <= MAX_SEED - n_runs:
        raise InvalidConfigError(
            f"seed must lie in [0, 2**64 - runs] so every run seed fits in 64 bits; got {base_seed} with {n_runs} runs"
        )
    pop = _as_int("pop", values["pop"])
    gens = _as_int("gens", values["gens"])
    neighborhood_size = _as_int("neighborhood_size", values["neighborhood_size"])
    stagnation_limit = _as_int("stagnation_limit", values["stagnation_limit"])
    stagnation_tol = _as_float("stagnation_tol", values["stagnation_tol"])
    export_population = _as_bool("export_population", values["export_population"])
    strategy = StrategyId.parse(values["strategy"])

    engine = EngineConfig(
        population_size=pop,
        max_generations=gens,
        schedule=ScheduleParams(
            _as_float("F", values["F"]),
            _as_float("CR", values["CR"]),
            ScheduleMode(_as_choice("schedule", values["schedule"], [m.value for m in ScheduleMode])),
        ),
        strategy=strategy,
        neighborhood=NeighborhoodMode(_as_choice("neighborhood", values["neighborhood"], [m.value for m in NeighborhoodMode])),
        neighborhood_size=neighborhood_size,
        local_search=LocalSearchBudget(
            max_iterations=_as_int("local_search_iterations", values["local_search_iterations"]),
            enabled=_as_bool("local_search", values["local_search"]),
            probability=_as_float("local_search_probability", values["local_search_probability"]),
        ),
        stagnation_limit=stagnation_limit,
        stagnation_tol=stagnation_tol,
        seed=base_seed,
        record_population=export_population,
    )
    classic = EngineConfig.classic(
        population_size=pop,
        max_generations=gens,
        schedule=ScheduleParams(
            _as_float("classic_F", values["classic_F"]),
            _as_float("classic_CR", values["classic_CR"]),
            ScheduleMode.FIXED,
        ),
        strategy=CLASSIC_STRATEGY if strategy.mutation in (Mutation.ADED_DEFAULT, Mutation.ADED_NEIGHBORS) else strategy,
        neighborhood_size=neighborhood_size,
        stagnation_limit=stagnation_limit,
        stagnation_tol=stagnation_tol,
        seed=base_seed,
        record_population=export_population,
    )

    bounds = None
    if not (_blank(values["low"]) and _blank(values["high"])):
        if _blank(values["low"]) or _blank(values["high"]):
            raise InvalidConfigError("low and high must be given together")
        bounds = (_as_float("low", values["low"]), _as_float("high", values["high"]))

    plan = ExperimentPlan(
        benchmarks=benchmarks,
        algorithm=algorithm,
        engine=engine,
        classic=classic,
        n_runs=n_runs,
        base_seed=base_seed,
        output_dir=Path(values["out"]) if not _blank(values["out"]) else Path(harness["OUTPUT_DIR"]),
        dim=None if _blank(values["dim"]) else _as_int("dim", values["dim"]),
        bounds=bounds,
        jobs=harness["JOBS"] if _blank(values["jobs"]) else _as_int("jobs", values["jobs"]),
        fmt=_as_choice("format", values["format"], FORMATS),
        weights=tuple(_as_float("weights", w) for w in _as_list(values["weights"])),
        weight_mode=WeightMode(_as_choice("weight_mode", values["weight_mode"], [m.value for m in WeightMode])),
        front_samples=_as_int("front_samples", values["front_samples"]),
        success_tol=_as_float("success_tol", values["success_tol"]),
        preset=preset,
        export_population=export_population,
        values=values,
    )
    if plan.jobs < 1:
        raise InvalidConfigError(f"jobs must be >= 1, got {plan.jobs}")
    if plan.front_samples < 2:
        raise InvalidConfigError(f"front_samples must be >= 2, got {plan.front_samples}")
    # Surfaces bad dims or bounds before any run starts.
    for benchmark_id in benchmarks:
        plan.space_for(benchmark_id)
        if algorithm == "aded_mo":
            plan.weights_for(benchmark_id)
    return plan
