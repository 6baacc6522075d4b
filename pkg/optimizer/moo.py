"""Multi-objective ADED: Pareto dominance, weighted scalarization, archive front."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .core import RngStream, SearchSpace, clip_to_bounds, init_population
from .engine import EngineConfig, Termination, has_converged
from .exceptions import DomainError, InvalidConfigError, ShapeError
from .variation import Mutation, StrategyId, local_refine, mutate

logger = logging.getLogger(__name__)

MultiObjective = Callable[[np.ndarray], np.ndarray]

# Two distinct peers around the current individual, no crossover.
_MO_STRATEGY = StrategyId(Mutation.ADED_NEIGHBORS)


def _vectors(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ShapeError(f"objective vectors differ in length: {a.shape} vs {b.shape}")
    return a, b


def pareto_dominates(a, b) -> bool:
    """True when ``a`` is no worse than ``b`` everywhere and strictly better somewhere."""
    a, b = _vectors(a, b)
    return bool(np.all(a <= b) and np.any(a < b))


def scalarize(objs, weights) -> float:
    objs, weights = _vectors(objs, weights)
    if np.any(weights < 0) or weights.sum() <= 0:
        raise InvalidConfigError(f"weights must be non-negative with a positive sum, got {weights.tolist()}")
    return float(objs @ weights)


def nondominated_filter(points) -> list[int]:
    """Indices of the points no other point dominates, in input order."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[0] == 0:
        raise ShapeError("nondominated_filter needs at least one point")
    keep = []
    for i in range(P.shape[0]):
        dominated_by = np.all(P <= P[i], axis=1) & np.any(P < P[i], axis=1)
        if not dominated_by.any():
            keep.append(i)
    return keep


class WeightMode(str, Enum):
    FIXED = "fixed"
    # Fresh uniform draw on the weight simplex for every trial's local search.
    RANDOM = "random"


@dataclass(frozen=True)
class MoSettings:
    weight_mode: WeightMode = WeightMode.FIXED
    refill: bool = True

    def __post_init__(self):
        object.__setattr__(self, "weight_mode", WeightMode(self.weight_mode))


@dataclass(frozen=True)
class MoResult:
    front_x: np.ndarray
    front_f: np.ndarray
    best_x: np.ndarray
    best_f: np.ndarray
    best_scalarized: tuple
    history: tuple
    scalarized_history: tuple
    n_evaluations: int
    wall_seconds: float
    terminated_by: Termination
    weights: tuple
    seed: int = 0

    @property
    def front(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.front_x, self.front_f))

    @property
    def generations(self) -> int:
        return len(self.history)


def front_csv_rows(result: MoResult) -> list[list[float]]:
    """One row per front member: decision variables then objectives, sorted by f1."""
    order = np.argsort(result.front_f[:, 0], kind="stable")
    return [list(map(float, result.front_x[i])) + list(map(float, result.front_f[i])) for i in order]


class _Archive:
    """Mutually non-dominated set of every admitted point."""

    def __init__(self, dim: int, n_objectives: int):
        self.X = np.empty((0, dim))
        self.F = np.empty((0, n_objectives))

    def offer(self, x: np.ndarray, f: np.ndarray) -> None:
        if self.F.shape[0]:
            if np.any(np.all(self.F <= f, axis=1) & np.any(self.F < f, axis=1)):
                return
            survivors = ~(np.all(f <= self.F, axis=1) & np.any(f < self.F, axis=1))
            self.X, self.F = self.X[survivors], self.F[survivors]
        self.X = np.vstack([self.X, x])
        self.F = np.vstack([self.F, f])

    def __len__(self):
        return self.F.shape[0]


def run_aded_mo(
    objectives: MultiObjective,
    space: SearchSpace,
    cfg: Optional[EngineConfig] = None,
    weights: Sequence[float] = (0.5, 0.5),
    settings: Optional[MoSettings] = None,
) -> MoResult:
    cfg = cfg or EngineConfig()
    settings = settings or MoSettings()
    weights = np.asarray(weights, dtype=float)
    started = time.perf_counter()
    rng = RngStream(cfg.seed)
    schedule = cfg.schedule.resolved(rng)
    n, G = cfg.population_size, cfg.max_generations
    calls = 0

    def evaluate(x, generation=None, individual=None) -> np.ndarray:
        nonlocal calls
        calls += 1
        f = np.asarray(objectives(x), dtype=float)
        if f.shape != weights.shape:
            raise ShapeError(f"objective returned {f.size} values for {weights.size} weights")
        if not np.all(np.isfinite(f)):
            raise DomainError(f"non-finite objective vector {f.tolist()}", generation=generation, individual=individual)
        return f

    scalarize(np.zeros_like(weights), weights)
    logger.info(
        "ADED-MO start: dim=%d objectives=%d pop=%d gens=%d weights=%s weight_mode=%s seed=%d",
        space.dim, weights.size, n, G, weights.tolist(), settings.weight_mode.value, cfg.seed,
    )

    X = init_population(space, n, rng).matrix()
    FX = np.array([evaluate(x, 0) for x in X])
    archive = _Archive(space.dim, weights.size)
    for x, f in zip(X, FX):
        archive.offer(x, f)

    best_x, best_f = X[0], FX[0]
    for x, f in zip(X[1:], FX[1:]):
        if pareto_dominates(f, best_f):
            best_x, best_f = x, f
    best_s = min(((scalarize(f, weights), i) for i, f in enumerate(FX)))
    best_scalarized = (X[best_s[1]].copy(), best_s[0])

    front_sizes, scalarized_history = [], []
    terminated_by = Termination.MAX_GENERATIONS
    for g in range(G):
        F, _ = schedule.rates(g, G)
        admitted_x, admitted_f = [], []
        for i in range(n):
            donor = mutate(_MO_STRATEGY, X, i, X[i], F, 0.0, rng)
            trial = clip_to_bounds(donor, space)
            f_trial = evaluate(trial, g, i)
            if cfg.local_search.enabled and (
                cfg.local_search.probability >= 1 or rng.random() < cfg.local_search.probability
            ):
                w = rng.dirichlet(np.ones(weights.size)) if settings.weight_mode is WeightMode.RANDOM else weights
                refined = local_refine(
                    lambda x: scalarize(evaluate(x, g, i), w), trial, space, cfg.local_search,
                    f0=scalarize(f_trial, w),
                )
                if not np.array_equal(refined.x, trial):
                    trial, f_trial = refined.x, evaluate(refined.x, g, i)

            dominated = any(pareto_dominates(other, f_trial) for other in admitted_f)
            if not dominated:
                admitted_x.append(trial)
                admitted_f.append(f_trial)
                archive.offer(trial, f_trial)
                s = scalarize(f_trial, weights)
                if s < best_scalarized[1]:
                    best_scalarized = (trial.copy(), s)
            if pareto_dominates(f_trial, best_f):
                best_x, best_f = trial, f_trial

        if settings.refill and len(admitted_x) < n:
            fresh = rng.uniform(space.lows, space.highs, size=(n - len(admitted_x), space.dim))
            for x in fresh:
                admitted_x.append(x)
                admitted_f.append(evaluate(x, g))
            logger.debug("generation %d: refilled %d members", g, len(fresh))
        if len(admitted_x) < _MO_STRATEGY.min_population:
            raise InvalidConfigError("population collapsed below four members; enable refill")
        X, FX = np.array(admitted_x), np.array(admitted_f)
        n = len(X)

        front_sizes.append(len(archive))
        scalarized_history.append(best_scalarized[1])
        logger.debug("ADED-MO generation %d: archive=%d best_scalarized=%.10g", g, len(archive), best_scalarized[1])
        if has_converged(scalarized_history, cfg.stagnation_limit, cfg.stagnation_tol):
            terminated_by = Termination.STAGNATION
            break

    keep = nondominated_filter(archive.F)
    result = MoResult(
        front_x=archive.X[keep],
        front_f=archive.F[keep],
        best_x=np.asarray(best_x).copy(),
        best_f=np.asarray(best_f).copy(),
        best_scalarized=best_scalarized,
        history=tuple(front_sizes),
        scalarized_history=tuple(scalarized_history),
        n_evaluations=calls,
        wall_seconds=time.perf_counter() - started,
        terminated_by=terminated_by,
        weights=tuple(weights.tolist()),
        seed=cfg.seed,
    )
    logger.info(
        "ADED-MO finished after %d generations (%s): front=%d evaluations=%d",
        result.generations, terminated_by.value, len(keep), calls,
    )
    return result
