"""Single-objective evolution loops: ADED and the classic DE baseline."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .core import MAX_SEED, Candidate, RngStream, SearchSpace, clip_to_bounds, distinct_indices, init_population
from .exceptions import DomainError, InvalidConfigError, UndefinedMetricError
from .metrics import convergence_rate, diversity, fdc
from .variation import (
    CLASSIC_STRATEGY,
    DEFAULT_STRATEGY,
    LocalSearchBudget,
    Mutation,
    ScheduleMode,
    ScheduleParams,
    StrategyId,
    crossover,
    local_refine,
    mutate,
)

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


class NeighborhoodMode(str, Enum):
    DYNAMIC = "dynamic"
    ALL = "all"


class Termination(str, Enum):
    MAX_GENERATIONS = "max-generations"
    STAGNATION = "stagnation"


# -------------------------
# Configuration
# -------------------------
@dataclass(frozen=True)
class EngineConfig:
    population_size: int = 100
    max_generations: int = 100
    schedule: ScheduleParams = field(default_factory=ScheduleParams)
    strategy: StrategyId = DEFAULT_STRATEGY
    neighborhood: NeighborhoodMode = NeighborhoodMode.DYNAMIC
    neighborhood_size: int = 5
    local_search: LocalSearchBudget = field(default_factory=LocalSearchBudget)
    stagnation_limit: int = 10
    stagnation_tol: float = 1e-12
    seed: int = 0
    record_population: bool = False

    def __post_init__(self):
        object.__setattr__(self, "neighborhood", NeighborhoodMode(self.neighborhood))
        if isinstance(self.strategy, str):
            object.__setattr__(self, "strategy", StrategyId.parse(self.strategy))
        if self.population_size < 6:
            raise InvalidConfigError(f"population_size must be >= 6, got {self.population_size}")
        if self.population_size < self.strategy.min_population:
            raise InvalidConfigError(f"{self.strategy.name} needs population_size >= {self.strategy.min_population}")
        if self.max_generations < 1:
            raise InvalidConfigError(f"max_generations must be >= 1, got {self.max_generations}")
        if self.stagnation_limit < 2:
            raise InvalidConfigError(f"stagnation_limit must be >= 2, got {self.stagnation_limit}")
        if self.stagnation_tol < 0:
            raise InvalidConfigError(f"stagnation_tol must be non-negative, got {self.stagnation_tol}")
        if not 1 <= self.neighborhood_size <= self.population_size - 1:
            raise InvalidConfigError(
                f"neighborhood_size must lie in [1, {self.population_size - 1}], got {self.neighborhood_size}"
            )
        if not 0 <= self.seed < MAX_SEED:
            raise InvalidConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @classmethod
    def classic(cls, **changes) -> "EngineConfig":
        """Canonical DE settings: rand/1/bin, F = 0.8, CR = 0.9, no local search."""
        base = cls(
            schedule=ScheduleParams(0.8, 0.9, ScheduleMode.FIXED),
            strategy=CLASSIC_STRATEGY,
            local_search=LocalSearchBudget(enabled=False),
        )
        return base.replace(**changes)

    def replace(self, **changes) -> "EngineConfig":
        return dataclasses.replace(self, **changes)

    def as_dict(self, include_seed: bool = True) -> dict:
        data = {
            "population_size": self.population_size,
            "max_generations": self.max_generations,
            "initial_F": self.schedule.initial_F,
            "initial_CR": self.schedule.initial_CR,
            "schedule": self.schedule.mode.value,
            "strategy": self.strategy.name,
            "neighborhood": self.neighborhood.value,
            "neighborhood_size": self.neighborhood_size,
            "local_search": self.local_search.enabled,
            "local_search_iterations": self.local_search.max_iterations,
            "local_search_probability": self.local_search.probability,
            "gradient_step": self.local_search.gradient_step,
            "stagnation_limit": self.stagnation_limit,
            "stagnation_tol": self.stagnation_tol,
        }
        if include_seed:
            data["seed"] = self.seed
        return data

    def config_hash(self) -> str:
        """SHA-256 over the canonical config; the seed is left out so a batch shares one hash."""
        canonical = json.dumps(self.as_dict(include_seed=False), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# -------------------------
# Neighborhoods
# -------------------------
class NeighborhoodState:
    """Per-individual map of neighbor index -> best trial fitness seen over that link.

    Only written, never read back by selection. Each map keeps the links of the
    most recent neighbor draw.
    """

    def __init__(self, population_size: int):
        self.links: list[dict[int, float]] = [{} for _ in range(population_size)]

    def __getitem__(self, owner: int) -> dict[int, float]:
        return self.links[owner]

    def __len__(self):
        return len(self.links)

    def total_links(self) -> int:
        return sum(len(m) for m in self.links)


def dynamic_neighborhood(i: int, n: int, k: int, rng: RngStream) -> list[int]:
    if n < 2:
        raise InvalidConfigError(f"a neighborhood needs a population of at least 2, got {n}")
    if k < 1:
        raise InvalidConfigError(f"neighborhood size must be positive, got {k}")
    return distinct_indices(n, min(k, n - 1), {i}, rng)


def update_neighborhoods(state: NeighborhoodState, i: int, neighbors: Sequence[int], trial_f: float) -> NeighborhoodState:
    previous = state.links[i]
    current = {}
    for j in neighbors:
        if j == i:
            continue
        stored = previous.get(j, float("inf"))
        current[j] = trial_f if trial_f < stored else stored
    state.links[i] = current
    return state


# -------------------------
# Selection and stopping
# -------------------------
def crowding_select(a: Candidate, b: Candidate) -> Candidate:
    """The fitter of incumbent ``a`` and challenger ``b``; ``a`` keeps ties."""
    if b.require_fitness() < a.require_fitness():
        return b
    return a


def has_converged(history: Sequence[float], stagnation_limit: int, tol: float) -> bool:
    if stagnation_limit < 2:
        raise InvalidConfigError(f"stagnation_limit must be >= 2, got {stagnation_limit}")
    if len(history) < stagnation_limit:
        return False
    tail = np.asarray(history[-stagnation_limit:], dtype=float)
    return bool(np.all(np.abs(tail - tail[-1]) <= tol))


# -------------------------
# Results
# -------------------------
@dataclass(frozen=True)
class RunResult:
    best_x: np.ndarray
    best_f: float
    best_f_history: np.ndarray
    diversity_history: np.ndarray
    fdc_history: np.ndarray
    convergence_rate_history: np.ndarray
    n_evaluations: int
    n_local_evaluations: int
    wall_seconds: float
    terminated_by: Termination
    seed: int = 0
    population_snapshots: tuple = ()

    @property
    def generations(self) -> int:
        return int(len(self.best_f_history))

    @property
    def final_convergence_rate(self) -> float:
        if len(self.convergence_rate_history) == 0:
            return 0.0
        return float(self.convergence_rate_history[-1])


class CountingObjective:
    """Wraps an objective, counts every call and rejects non-finite values."""

    def __init__(self, objective: Objective):
        self.objective = objective
        self.calls = 0

    def __call__(self, x) -> float:
        self.calls += 1
        value = float(self.objective(x))
        if not np.isfinite(value):
            raise DomainError(f"objective returned {value} at {np.asarray(x).tolist()}")
        return value


# -------------------------
# Engines
# -------------------------
def _fdc_or_gap(X: np.ndarray, fit: np.ndarray) -> float:
    try:
        return fdc(X, fit, X[int(np.argmin(fit))])
    except UndefinedMetricError:
        return float("nan")


def _evolve(objective: Objective, space: SearchSpace, cfg: EngineConfig, classic: bool) -> RunResult:
    started = time.perf_counter()
    rng = RngStream(cfg.seed)
    counter = CountingObjective(objective)
    schedule = cfg.schedule.resolved(rng)
    strategy = cfg.strategy
    n, G = cfg.population_size, cfg.max_generations
    use_local = not classic and cfg.local_search.enabled
    label = "classic DE" if classic else "ADED"
    logger.info(
        "%s start: dim=%d pop=%d gens=%d strategy=%s F=%.4g CR=%.4g schedule=%s seed=%d",
        label, space.dim, n, G, strategy.name, schedule.initial_F, schedule.initial_CR,
        schedule.mode.value, cfg.seed,
    )
    if not classic and cfg.neighborhood is NeighborhoodMode.DYNAMIC and cfg.neighborhood_size < strategy.index_count:
        logger.debug(
            "%s needs %d peers but neighborhoods hold %d; drawing peers from the whole population",
            strategy.name, strategy.index_count, cfg.neighborhood_size,
        )

    X = init_population(space, n, rng).matrix()
    try:
        fit = np.array([counter(x) for x in X])
    except DomainError as exc:
        raise DomainError(exc.message, generation=0) from exc
    state = NeighborhoodState(n)
    best_history, diversity_history, fdc_history = [], [], []
    snapshots = []
    initial_best = float(fit.min())
    local_evals = 0
    terminated_by = Termination.MAX_GENERATIONS

    for g in range(G):
        F, CR = schedule.rates(g, G)
        best_x = X[int(np.argmin(fit))]
        X_next, fit_next = X.copy(), fit.copy()
        for i in range(n):
            if classic or cfg.neighborhood is NeighborhoodMode.ALL:
                neighbors = [j for j in range(n) if j != i]
            else:
                neighbors = dynamic_neighborhood(i, n, cfg.neighborhood_size, rng)
            pool = None if classic or len(neighbors) < strategy.index_count else neighbors
            K = float(rng.random()) if strategy.uses_K else 0.0
            if strategy.uses_K:
                logger.debug("generation %d individual %d K=%.6f", g, i, K)
            donor = mutate(strategy, X, i, best_x, F, K, rng, pool)
            trial = clip_to_bounds(crossover(strategy.crossover, X[i], donor, CR, rng), space)
            try:
                f_trial = counter(trial)
                if use_local and (cfg.local_search.probability >= 1 or rng.random() < cfg.local_search.probability):
                    refined = local_refine(counter, trial, space, cfg.local_search, f0=f_trial)
                    local_evals += refined.evals
                    trial, f_trial = refined.x, refined.f
            except DomainError as exc:
                raise DomainError(exc.message, generation=g, individual=i) from exc

            if classic:
                # Canonical greedy replacement lets the trial keep ties.
                if f_trial <= fit[i]:
                    X_next[i], fit_next[i] = trial, f_trial
            else:
                winner = crowding_select(Candidate(X[i], fit[i]), Candidate(trial, f_trial))
                X_next[i], fit_next[i] = winner.x, winner.fitness
                update_neighborhoods(state, i, neighbors, f_trial)

        X, fit = X_next, fit_next
        best_history.append(float(fit.min()))
        diversity_history.append(diversity(X, space))
        fdc_history.append(_fdc_or_gap(X, fit))
        if cfg.record_population:
            snapshots.append(X.copy())
        logger.debug("%s generation %d: best=%.10g diversity=%.4g", label, g, best_history[-1], diversity_history[-1])
        if has_converged(best_history, cfg.stagnation_limit, cfg.stagnation_tol):
            terminated_by = Termination.STAGNATION
            break

    if not classic:
        logger.debug("neighborhood links held at end of run: %d", state.total_links())
    best = int(np.argmin(fit))
    result = RunResult(
        best_x=X[best].copy(),
        best_f=float(fit[best]),
        best_f_history=np.array(best_history),
        diversity_history=np.array(diversity_history),
        fdc_history=np.array(fdc_history),
        convergence_rate_history=convergence_rate([initial_best] + best_history),
        n_evaluations=counter.calls,
        n_local_evaluations=local_evals,
        wall_seconds=time.perf_counter() - started,
        terminated_by=terminated_by,
        seed=cfg.seed,
        population_snapshots=tuple(snapshots),
    )
    logger.info(
        "%s finished after %d generations (%s): best_f=%.10g evaluations=%d",
        label, result.generations, terminated_by.value, result.best_f, result.n_evaluations,
    )
    return result


def run_aded(objective: Objective, space: SearchSpace, cfg: Optional[EngineConfig] = None) -> RunResult:
    """Adaptive differential evolution with dynamic neighborhoods and local refinement."""
    return _evolve(objective, space, cfg or EngineConfig(), classic=False)


def run_classic_de(objective: Objective, space: SearchSpace, cfg: Optional[EngineConfig] = None) -> RunResult:
    """Canonical DE: fixed F and CR, greedy replacement, no neighborhoods or local search."""
    cfg = cfg or EngineConfig.classic()
    if cfg.schedule.mode is ScheduleMode.SCHEDULED:
        raise InvalidConfigError("classic DE runs with fixed F and CR; got a scheduled config")
    if cfg.strategy.mutation in (Mutation.ADED_DEFAULT, Mutation.ADED_NEIGHBORS):
        raise InvalidConfigError(f"classic DE cannot use the {cfg.strategy.name} trial form")
    return _evolve(objective, space, cfg, classic=True)
