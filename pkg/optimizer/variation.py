"""Variation machinery: F/CR schedules, mutation strategies, crossovers and the
bounded local refinement step."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .core import Candidate, Population, RngStream, SearchSpace, distinct_indices
from .exceptions import DomainError, InvalidConfigError, ShapeError

logger = logging.getLogger(__name__)


# -------------------------
# Schedules
# -------------------------
class ScheduleMode(str, Enum):
    SCHEDULED = "scheduled"
    FIXED = "fixed"
    # F ~ U(0.5, 2.0), CR ~ U(0.1, 0.9) drawn once per run, then held constant.
    FIXED_RANDOM = "fixed-random"


FIXED_RANDOM_F = (0.5, 2.0)
FIXED_RANDOM_CR = (0.1, 0.9)


def _check_generation(generation: int, max_generations: int) -> None:
    if max_generations <= 0:
        raise InvalidConfigError(f"max_generations must be positive, got {max_generations}")
    if not 0 <= generation <= max_generations:
        raise InvalidConfigError(f"generation {generation} outside [0, {max_generations}]")


def adaptive_mutation_rate(generation: int, max_generations: int, initial_F: float) -> float:
    """Linearly decreasing F: ``initial_F`` at generation 0, zero at ``max_generations``."""
    _check_generation(generation, max_generations)
    return initial_F * (1 - generation / max_generations)


def adaptive_crossover_rate(generation: int, max_generations: int, initial_CR: float) -> float:
    """Linearly increasing CR: zero at generation 0, ``initial_CR`` at ``max_generations``."""
    _check_generation(generation, max_generations)
    return initial_CR * (generation / max_generations)


@dataclass(frozen=True)
class ScheduleParams:
    initial_F: float = 0.5
    initial_CR: float = 0.5
    mode: ScheduleMode = ScheduleMode.SCHEDULED

    def __post_init__(self):
        object.__setattr__(self, "mode", ScheduleMode(self.mode))
        if not 0 < self.initial_F <= 2:
            raise InvalidConfigError(f"initial_F must lie in (0, 2], got {self.initial_F}")
        if not 0 <= self.initial_CR <= 1:
            raise InvalidConfigError(f"initial_CR must lie in [0, 1], got {self.initial_CR}")

    @staticmethod
    def draw_fixed(rng: RngStream) -> "ScheduleParams":
        F = float(rng.uniform(*FIXED_RANDOM_F))
        CR = float(rng.uniform(*FIXED_RANDOM_CR))
        logger.debug("drew fixed parameters F=%.6f CR=%.6f", F, CR)
        return ScheduleParams(F, CR, ScheduleMode.FIXED)

    def resolved(self, rng: RngStream) -> "ScheduleParams":
        """Concrete parameters for one run; draws the fixed-random pair if needed."""
        if self.mode is not ScheduleMode.FIXED_RANDOM:
            return self
        return self.draw_fixed(rng)

    def rates(self, generation: int, max_generations: int) -> tuple[float, float]:
        if self.mode is ScheduleMode.SCHEDULED:
            return (
                adaptive_mutation_rate(generation, max_generations, self.initial_F),
                adaptive_crossover_rate(generation, max_generations, self.initial_CR),
            )
        if self.mode is ScheduleMode.FIXED_RANDOM:
            raise InvalidConfigError("resolve fixed-random parameters before asking for rates")
        return self.initial_F, self.initial_CR


# -------------------------
# Strategies
# -------------------------
class Mutation(str, Enum):
    RAND_1 = "rand/1"
    BEST_1 = "best/1"
    RAND_2 = "rand/2"
    BEST_2 = "best/2"
    CURRENT_TO_RAND_1 = "current-to-rand/1"
    CURRENT_TO_BEST_1 = "current-to-best/1"
    RAND_TO_BEST_1 = "rand-to-best/1"
    # x_i + F(x_r1 - x_i) + F(x_r2 - x_r3)
    ADED_DEFAULT = "aded-default"
    # x_i + F(n1 - x_i) + F(n2 - x_i)
    ADED_NEIGHBORS = "aded-neighbors"


class Crossover(str, Enum):
    BIN = "bin"
    EXP = "exp"


# Number of distinct non-self indices each mutation draws.
_INDEX_COUNT = {
    Mutation.RAND_1: 3,
    Mutation.BEST_1: 2,
    Mutation.RAND_2: 5,
    Mutation.BEST_2: 4,
    Mutation.CURRENT_TO_RAND_1: 3,
    Mutation.CURRENT_TO_BEST_1: 2,
    Mutation.RAND_TO_BEST_1: 3,
    Mutation.ADED_DEFAULT: 3,
    Mutation.ADED_NEIGHBORS: 2,
}

_VARIANT_TOKENS = {
    Mutation.RAND_1: "rand1",
    Mutation.BEST_1: "best1",
    Mutation.RAND_2: "rand2",
    Mutation.BEST_2: "best2",
    Mutation.CURRENT_TO_RAND_1: "currenttorand1",
    Mutation.CURRENT_TO_BEST_1: "currenttobest1",
    Mutation.RAND_TO_BEST_1: "randtobest1",
}

_ADED_FORMS = (Mutation.ADED_DEFAULT, Mutation.ADED_NEIGHBORS)


@dataclass(frozen=True)
class StrategyId:
    mutation: Mutation
    crossover: Crossover = Crossover.BIN

    def __post_init__(self):
        object.__setattr__(self, "mutation", Mutation(self.mutation))
        object.__setattr__(self, "crossover", Crossover(self.crossover))

    @property
    def name(self) -> str:
        if self.mutation in _ADED_FORMS:
            suffix = "" if self.crossover is Crossover.BIN else f"-{self.crossover.value}"
            return f"{self.mutation.value}{suffix}"
        return f"{_VARIANT_TOKENS[self.mutation]}{self.crossover.value}"

    @property
    def uses_K(self) -> bool:
        return self.mutation in (Mutation.CURRENT_TO_RAND_1, Mutation.CURRENT_TO_BEST_1)

    @property
    def index_count(self) -> int:
        return _INDEX_COUNT[self.mutation]

    @property
    def min_population(self) -> int:
        # rand/2 and best/2 are held to six members, every other form to four.
        return 6 if self.mutation in (Mutation.RAND_2, Mutation.BEST_2) else 4

    @classmethod
    def parse(cls, name: str) -> "StrategyId":
        key = str(name).strip().lower()
        try:
            return STRATEGIES[key]
        except KeyError:
            raise InvalidConfigError(
                f"unknown strategy '{name}'; expected one of {', '.join(STRATEGIES)}"
            ) from None

    def __str__(self):
        return self.name


def table_variants() -> list[StrategyId]:
    """The fourteen mutation x crossover variants, in tournament order."""
    return [StrategyId(m, c) for m in _VARIANT_TOKENS for c in (Crossover.BIN, Crossover.EXP)]


STRATEGIES: dict[str, StrategyId] = {s.name: s for s in table_variants()}
for _form in _ADED_FORMS:
    for _cx in Crossover:
        _strategy = StrategyId(_form, _cx)
        STRATEGIES[_strategy.name] = _strategy
STRATEGIES["aded-default-bin"] = StrategyId(Mutation.ADED_DEFAULT, Crossover.BIN)
STRATEGIES["aded-neighbors-bin"] = StrategyId(Mutation.ADED_NEIGHBORS, Crossover.BIN)

DEFAULT_STRATEGY = StrategyId(Mutation.ADED_DEFAULT, Crossover.BIN)
CLASSIC_STRATEGY = StrategyId(Mutation.RAND_1, Crossover.BIN)


def mutate(
    strategy: StrategyId,
    pop,
    i: int,
    best,
    F: float,
    K: float,
    rng: RngStream,
    pool: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """Donor vector for individual ``i``; not bound-repaired.

    ``pop`` is a ``Population`` or an ``(n, dim)`` array. Random indices come
    from ``pool`` when given (e.g. the individual's neighborhood) and from the
    whole population otherwise; they are always distinct and never ``i``.
    """
    X = pop.matrix() if isinstance(pop, Population) else np.asarray(pop, dtype=float)
    n = X.shape[0]
    if n < strategy.min_population:
        raise InvalidConfigError(
            f"{strategy.name} needs a population of at least {strategy.min_population}, got {n}"
        )
    count = strategy.index_count
    if pool is None:
        r = distinct_indices(n, count, {i}, rng)
    else:
        candidates = [j for j in pool if j != i]
        if len(set(candidates)) < count:
            raise InvalidConfigError(f"{strategy.name} needs {count} distinct peers, pool has {len(set(candidates))}")
        picks = rng.choice(len(candidates), size=count, replace=False)
        r = [candidates[k] for k in picks]

    best_x = best.x if isinstance(best, Candidate) else np.asarray(best, dtype=float)
    x_i = X[i]
    m = strategy.mutation
    if m is Mutation.RAND_1:
        return X[r[0]] + F * (X[r[1]] - X[r[2]])
    if m is Mutation.BEST_1:
        return best_x + F * (X[r[0]] - X[r[1]])
    if m is Mutation.RAND_2:
        return X[r[0]] + F * (X[r[1]] - X[r[2]] + X[r[3]] - X[r[4]])
    if m is Mutation.BEST_2:
        return best_x + F * (X[r[0]] - X[r[1]] + X[r[2]] - X[r[3]])
    if m is Mutation.CURRENT_TO_RAND_1:
        return x_i + K * (X[r[2]] - x_i) + F * (X[r[0]] - X[r[1]])
    if m is Mutation.CURRENT_TO_BEST_1:
        return x_i + K * (best_x - x_i) + F * (X[r[0]] - X[r[1]])
    if m is Mutation.RAND_TO_BEST_1:
        return X[r[0]] + F * (best_x - X[r[0]]) + F * (X[r[1]] - X[r[2]])
    if m is Mutation.ADED_DEFAULT:
        return x_i + F * (X[r[0]] - x_i) + F * (X[r[1]] - X[r[2]])
    if m is Mutation.ADED_NEIGHBORS:
        return x_i + F * (X[r[0]] - x_i) + F * (X[r[1]] - x_i)
    raise InvalidConfigError(f"unsupported mutation {m}")


# -------------------------
# Crossover
# -------------------------
def _pair(target, donor) -> tuple[np.ndarray, np.ndarray]:
    target = np.asarray(target, dtype=float)
    donor = np.asarray(donor, dtype=float)
    if target.shape != donor.shape or target.ndim != 1:
        raise ShapeError(f"target {target.shape} and donor {donor.shape} must be equal-length vectors")
    return target, donor


def _check_cr(CR: float) -> None:
    if not 0 <= CR <= 1:
        raise InvalidConfigError(f"CR must lie in [0, 1], got {CR}")


def crossover_binomial(target, donor, CR: float, rng: RngStream) -> np.ndarray:
    target, donor = _pair(target, donor)
    _check_cr(CR)
    D = target.size
    j_rand = int(rng.integers(D))
    take = rng.random(D) < CR
    take[j_rand] = True
    return np.where(take, donor, target)


def crossover_exponential(target, donor, CR: float, rng: RngStream) -> np.ndarray:
    target, donor = _pair(target, donor)
    _check_cr(CR)
    D = target.size
    trial = target.copy()
    start = int(rng.integers(D))
    length = 0
    while True:
        j = (start + length) % D
        trial[j] = donor[j]
        length += 1
        if length >= D or rng.random() >= CR:
            break
    return trial


def crossover(kind: Crossover, target, donor, CR: float, rng: RngStream) -> np.ndarray:
    if Crossover(kind) is Crossover.BIN:
        return crossover_binomial(target, donor, CR, rng)
    return crossover_exponential(target, donor, CR, rng)


# -------------------------
# Local refinement
# -------------------------
@dataclass(frozen=True)
class LocalSearchBudget:
    max_iterations: int = 25
    gradient_step: float = 1e-6
    enabled: bool = True
    # Chance that a given trial is refined.
    probability: float = 1.0

    def __post_init__(self):
        if self.enabled and self.max_iterations < 1:
            raise InvalidConfigError("local search needs max_iterations >= 1 when enabled")
        if self.gradient_step <= 0:
            raise InvalidConfigError(f"gradient_step must be positive, got {self.gradient_step}")
        if not 0 <= self.probability <= 1:
            raise InvalidConfigError(f"probability must lie in [0, 1], got {self.probability}")


class LocalRefineResult(NamedTuple):
    x: np.ndarray
    f: float
    evals: int


def finite_difference_gradient(
    objective: Callable[[np.ndarray], float],
    x,
    space: SearchSpace,
    step_scale: float = 1e-6,
    f_x: Optional[float] = None,
) -> tuple[np.ndarray, int]:
    """Central-difference gradient with step ``step_scale * max(1, |x_j|)``.

    The stencil never leaves the box: on a coordinate that is closer to a bound
    than one step, a one-sided difference is taken instead. Returns the gradient
    and the number of objective calls made.
    """
    x = np.asarray(x, dtype=float)
    h = step_scale * np.maximum(1.0, np.abs(x))
    grad = np.empty_like(x)
    calls = 0
    for j in range(x.size):
        room_low = x[j] - space.lows[j] >= h[j]
        room_high = space.highs[j] - x[j] >= h[j]
        step = np.zeros_like(x)
        step[j] = h[j]
        if room_low and room_high:
            grad[j] = (objective(x + step) - objective(x - step)) / (2 * h[j])
            calls += 2
            continue
        if f_x is None:
            f_x = objective(x)
            calls += 1
        if room_high:
            grad[j] = (objective(x + step) - f_x) / h[j]
        else:
            grad[j] = (f_x - objective(x - step)) / h[j]
        calls += 1
    return grad, calls


def local_refine(
    objective: Callable[[np.ndarray], float],
    x0,
    space: SearchSpace,
    budget: LocalSearchBudget,
    f0: Optional[float] = None,
) -> LocalRefineResult:
    """Bounded L-BFGS-B descent from ``x0`` with finite-difference gradients.

    ``evals`` counts every objective call made here, finite-difference calls included.
    When ``f0`` is supplied it is trusted as ``objective(x0)`` and not re-counted.
    The returned point is the best one visited, so ``f <= objective(x0)``.
    """
    x0 = np.asarray(x0, dtype=float)
    evals = 0

    def counted(x):
        nonlocal evals
        evals += 1
        value = float(objective(x))
        if not np.isfinite(value):
            raise DomainError(f"non-finite objective value at {x}")
        return value

    if f0 is None:
        f0 = counted(x0)
    elif not np.isfinite(f0):
        raise DomainError(f"non-finite objective value at starting point {x0}")
    best_x, best_f = x0.copy(), float(f0)
    if not budget.enabled:
        return LocalRefineResult(best_x, best_f, evals)

    def value_and_gradient(x):
        nonlocal best_x, best_f
        x = np.clip(x, space.lows, space.highs)
        f_x = f0 if np.array_equal(x, x0) else counted(x)
        if f_x < best_f:
            best_x, best_f = x.copy(), f_x
        grad, _ = finite_difference_gradient(counted, x, space, budget.gradient_step, f_x)
        return f_x, grad

    minimize(
        value_and_gradient,
        x0,
        jac=True,
        method="L-BFGS-B",
        bounds=space.bounds(),
        options={
            "maxiter": budget.max_iterations,
            "maxfun": 20 * budget.max_iterations,
            "ftol": 1e-15,
            "gtol": 1e-10,
        },
    )
    return LocalRefineResult(np.clip(best_x, space.lows, space.highs), best_f, evals)
