"""Diagnostics over populations, run batches and Pareto fronts."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple, Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .core import Population, SearchSpace
from .exceptions import InvalidConfigError, ShapeError, UndefinedMetricError

if TYPE_CHECKING:
    from .engine import RunResult

logger = logging.getLogger(__name__)

DEFAULT_SUCCESS_TOL = 1e-4


def _as_matrix(population) -> np.ndarray:
    if isinstance(population, Population):
        return population.matrix()
    return np.atleast_2d(np.asarray(population, dtype=float))


# -------------------------
# Population diagnostics
# -------------------------
def fdc(population, fitnesses, reference) -> float:
    """Pearson correlation between fitness and distance to ``reference``."""
    X = _as_matrix(population)
    f = np.asarray(fitnesses, dtype=float)
    if X.shape[0] < 3:
        raise UndefinedMetricError(f"fitness-distance correlation needs >= 3 individuals, got {X.shape[0]}")
    if f.shape != (X.shape[0],):
        raise ShapeError(f"expected {X.shape[0]} fitness values, got shape {f.shape}")
    d = np.linalg.norm(X - np.asarray(reference, dtype=float), axis=1)
    if np.all(f == f[0]) or np.all(d == d[0]):
        raise UndefinedMetricError("fitness-distance correlation undefined for zero variance")
    r = np.corrcoef(f, d)[0, 1]
    return float(np.clip(r, -1.0, 1.0))


def diversity(population, space: SearchSpace) -> float:
    """Mean pairwise distance, normalized by the box diagonal."""
    X = _as_matrix(population)
    if X.shape[0] < 2:
        raise UndefinedMetricError("diversity needs at least two individuals")
    if X.shape[1] != space.dim:
        raise ShapeError(f"population has dimension {X.shape[1]}, space has {space.dim}")
    return float(pdist(X).mean() / space.diagonal)


def convergence_rate(history) -> np.ndarray:
    h = np.asarray(history, dtype=float)
    if h.ndim != 1 or h.size < 2:
        raise ShapeError("convergence rate needs a history of at least two entries")
    return np.diff(h)


def final_convergence_rate(history) -> float:
    return float(convergence_rate(history)[-1])


# -------------------------
# Batches of runs
# -------------------------
@dataclass(frozen=True)
class RunBatch:
    results: Sequence["RunResult"]
    known_optimum: Optional[float] = None
    success_tol: float = DEFAULT_SUCCESS_TOL
    benchmark_id: str = ""
    config_hash: str = ""

    def __post_init__(self):
        object.__setattr__(self, "results", tuple(self.results))
        if not self.results:
            raise InvalidConfigError("a run batch needs at least one result")
        if self.success_tol < 0:
            raise InvalidConfigError(f"success_tol must be non-negative, got {self.success_tol}")

    def __len__(self):
        return len(self.results)

    def best_values(self) -> np.ndarray:
        return np.array([r.best_f for r in self.results], dtype=float)

    def successes(self) -> np.ndarray:
        if self.known_optimum is None:
            raise InvalidConfigError(f"benchmark '{self.benchmark_id}' has no known optimum")
        return np.abs(self.best_values() - self.known_optimum) <= self.success_tol

    def evaluations(self, include_local: bool = True) -> np.ndarray:
        if include_local:
            return np.array([r.n_evaluations for r in self.results], dtype=float)
        return np.array([r.n_evaluations - r.n_local_evaluations for r in self.results], dtype=float)


class QMeasure(NamedTuple):
    C: float
    P: float
    Q: float
    infinite: bool = False


def success_rate(batch: RunBatch) -> float:
    return float(batch.successes().mean())


def q_measure(batch: RunBatch, include_local: bool = True) -> QMeasure:
    """Convergence cost C, success probability P and Q = C / P.

    With no successful run Q is infinite and flagged.
    """
    hits = batch.successes()
    R = int(hits.sum())
    if R == 0:
        return QMeasure(float("inf"), 0.0, float("inf"), True)
    C = float(batch.evaluations(include_local)[hits].sum() / R)
    P = R / len(batch)
    return QMeasure(C, P, C / P, False)


def pooled_q_measure(batches: Sequence[RunBatch], include_local: bool = True) -> QMeasure:
    """Q-measure over several batches at once, each judged against its own optimum."""
    hits = np.concatenate([b.successes() for b in batches])
    evals = np.concatenate([b.evaluations(include_local) for b in batches])
    R = int(hits.sum())
    if R == 0:
        return QMeasure(float("inf"), 0.0, float("inf"), True)
    C = float(evals[hits].sum() / R)
    P = R / hits.size
    return QMeasure(C, P, C / P, False)


def convergence_speed(batch: RunBatch) -> float:
    return float(batch.best_values().min())


def aov(batch: RunBatch) -> float:
    return float(batch.best_values().mean())


# -------------------------
# Fronts
# -------------------------
@dataclass(frozen=True)
class FrontPair:
    """Obtained front Q against reference front P*; rows are objective vectors."""

    obtained: np.ndarray
    reference: np.ndarray = field(repr=False)

    def __post_init__(self):
        Q = np.atleast_2d(np.asarray(self.obtained, dtype=float))
        P = np.atleast_2d(np.asarray(self.reference, dtype=float))
        if Q.size == 0 or P.size == 0:
            raise ShapeError("both fronts must be non-empty")
        if Q.shape[1] != P.shape[1]:
            raise ShapeError(f"obtained front has {Q.shape[1]} objectives, reference has {P.shape[1]}")
        object.__setattr__(self, "obtained", Q)
        object.__setattr__(self, "reference", P)


def generational_distance(pair: FrontPair) -> float:
    """Root mean squared distance from each reference point to the obtained front."""
    nearest = cdist(pair.reference, pair.obtained).min(axis=1)
    return float(np.sqrt(np.mean(nearest**2)))


def spread(pair: FrontPair) -> float:
    Q = pair.obtained[np.argsort(pair.obtained[:, 0], kind="stable")]
    if Q.shape[0] < 2:
        raise UndefinedMetricError("spread needs at least two obtained points")
    P = pair.reference
    first, last = P[np.argmin(P[:, 0])], P[np.argmax(P[:, 0])]
    d_f = float(np.linalg.norm(first - Q[0]))
    d_l = float(np.linalg.norm(last - Q[-1]))
    gaps = np.linalg.norm(np.diff(Q, axis=0), axis=1)
    d_mean = float(gaps.mean())
    denominator = d_f + d_l + (Q.shape[0] - 1) * d_mean
    if denominator == 0:
        raise UndefinedMetricError("spread undefined for a collapsed front")
    return float((d_f + d_l + np.abs(gaps - d_mean).sum()) / denominator)
