"""Domain types, bounded initialization, bound repair and the random stream.

All vectors are ``numpy`` float arrays. ``SearchSpace`` and ``Candidate`` are
immutable; ``RngStream`` is the only stateful object and belongs to exactly
one run at a time.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .exceptions import InvalidConfigError, InvalidSpaceError, ShapeError, StateError

logger = logging.getLogger(__name__)

MIN_POPULATION = 4
MAX_SEED = 2**64


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


# -------------------------
# Search space
# -------------------------
@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Per-dimension box bounds of the feasible region."""

    lows: np.ndarray
    highs: np.ndarray

    def __post_init__(self):
        lows = np.atleast_1d(np.asarray(self.lows, dtype=float))
        highs = np.atleast_1d(np.asarray(self.highs, dtype=float))
        if lows.ndim != 1 or lows.shape != highs.shape or lows.size == 0:
            raise InvalidSpaceError(
                f"lows and highs must be non-empty vectors of equal length, got {lows.shape} and {highs.shape}"
            )
        if not (np.all(np.isfinite(lows)) and np.all(np.isfinite(highs))):
            raise InvalidSpaceError("bounds must be finite")
        bad = np.flatnonzero(~(lows < highs))
        if bad.size:
            j = int(bad[0])
            raise InvalidSpaceError(f"dimension {j}: low {lows[j]} must be < high {highs[j]}")
        object.__setattr__(self, "lows", _frozen(lows))
        object.__setattr__(self, "highs", _frozen(highs))

    @classmethod
    def from_bounds(cls, bounds: Sequence[Sequence[float]]) -> "SearchSpace":
        pairs = [tuple(b) for b in bounds]
        if any(len(p) != 2 for p in pairs):
            raise InvalidSpaceError("bounds must be (low, high) pairs")
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @classmethod
    def uniform(cls, low: float, high: float, dim: int) -> "SearchSpace":
        if dim < 1:
            raise InvalidSpaceError(f"dim must be positive, got {dim}")
        return cls([low] * dim, [high] * dim)

    @property
    def dim(self) -> int:
        return int(self.lows.size)

    @property
    def widths(self) -> np.ndarray:
        return self.highs - self.lows

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.widths))

    def bounds(self) -> list[tuple[float, float]]:
        return [(float(lo), float(hi)) for lo, hi in zip(self.lows, self.highs)]

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == self.lows.shape and bool(np.all((x >= self.lows) & (x <= self.highs)))

    def __eq__(self, other):
        if not isinstance(other, SearchSpace):
            return NotImplemented
        return np.array_equal(self.lows, other.lows) and np.array_equal(self.highs, other.highs)

    def __hash__(self):
        return hash((self.lows.tobytes(), self.highs.tobytes()))

    def __repr__(self):
        return f"SearchSpace({self.bounds()})"


# -------------------------
# Candidates and populations
# -------------------------
@dataclass(frozen=True, eq=False)
class Candidate:
    """Decision vector with its cached objective value (``None`` until evaluated)."""

    x: np.ndarray
    fitness: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "x", _frozen(self.x))

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    def with_fitness(self, fitness: float) -> "Candidate":
        return replace(self, fitness=float(fitness))

    def require_fitness(self) -> float:
        if self.fitness is None:
            raise StateError("candidate fitness has not been evaluated")
        return self.fitness


@dataclass
class Population:
    members: list[Candidate] = field(default_factory=list)
    generation: int = 0

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.members)

    def __getitem__(self, index: int) -> Candidate:
        return self.members[index]

    def matrix(self) -> np.ndarray:
        """Members stacked as an ``(n, dim)`` array."""
        return np.vstack([m.x for m in self.members])

    def fitnesses(self) -> np.ndarray:
        return np.array([m.require_fitness() for m in self.members], dtype=float)

    def best_index(self) -> int:
        # argmin keeps the lowest index on ties.
        return int(np.argmin(self.fitnesses()))

    def best(self) -> Candidate:
        return self.members[self.best_index()]


# -------------------------
# Random stream
# -------------------------
class RngStream:
    """Seeded, splittable random stream.

    Backed by the counter-based Philox generator, so a given seed yields the
    same draws on every platform, and ``spawn`` hands out statistically
    independent child streams (e.g. one per parallel run).
    """

    def __init__(self, seed):
        if isinstance(seed, np.random.SeedSequence):
            self._sequence = seed
            self.seed = int(seed.entropy) if seed.entropy is not None else None
        else:
            if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
                raise InvalidConfigError(f"seed must be an integer, got {seed!r}")
            seed = int(seed)
            if not 0 <= seed < MAX_SEED:
                raise InvalidConfigError(f"seed must be a 64-bit unsigned integer, got {seed}")
            self._sequence = np.random.SeedSequence(seed)
            self.seed = seed
        self._generator = np.random.Generator(np.random.Philox(self._sequence))

    @classmethod
    def for_run(cls, base_seed: int, run_index: int) -> "RngStream":
        return cls(base_seed + run_index)

    def spawn(self, n: int) -> list["RngStream"]:
        return [RngStream(child) for child in self._sequence.spawn(n)]

    # Draws
    def random(self, size=None):
        return self._generator.random(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._generator.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self._generator.integers(low, high, size)

    def choice(self, a, size=None, replace=True):
        return self._generator.choice(a, size=size, replace=replace)

    def dirichlet(self, alpha):
        return self._generator.dirichlet(alpha)

    def __repr__(self):
        return f"RngStream(seed={self.seed})"


# -------------------------
# Operations
# -------------------------
def init_population(space: SearchSpace, n: int, rng: RngStream) -> Population:
    """Draw ``n`` candidates uniformly inside ``space``; fitness left unset."""
    if n < MIN_POPULATION:
        raise InvalidConfigError(f"population size must be >= {MIN_POPULATION}, got {n}")
    points = rng.uniform(space.lows, space.highs, size=(n, space.dim))
    return Population(members=[Candidate(row) for row in points], generation=0)


def clip_to_bounds(x, space: SearchSpace) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (space.dim,):
        raise ShapeError(f"expected a vector of length {space.dim}, got shape {x.shape}")
    return np.clip(x, space.lows, space.highs)


def distinct_indices(n: int, count: int, exclude: Iterable[int], rng: RngStream) -> list[int]:
    """``count`` pairwise-distinct indices from ``range(n)`` avoiding ``exclude``."""
    excluded = set(exclude)
    pool = [i for i in range(n) if i not in excluded]
    if count < 0 or count > len(pool):
        raise InvalidConfigError(
            f"cannot draw {count} distinct indices from {n} with {len(excluded & set(range(n)))} excluded"
        )
    if count == 0:
        return []
    return [int(pool[k]) for k in rng.choice(len(pool), size=count, replace=False)]
