"""Benchmark catalog: single-objective test functions, demo objectives and the
multi-objective ZDT/DTLZ suite with analytic Pareto fronts.

Formulas follow the canonical literature forms whose optima match the values
stated alongside the functions (e.g. Drop-wave has its minimum at -1, Bukin N.6
uses absolute values). All evaluators are pure.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np
from scipy.stats import qmc

from .core import SearchSpace
from .exceptions import BenchmarkNotFound, DomainError, InvalidConfigError, ShapeError

logger = logging.getLogger(__name__)

DEFAULT_DIM = 2


class DimRule(str, Enum):
    FIXED_1D = "fixed-1D"
    FIXED_2D = "fixed-2D"
    ANY_N = "any-n"


class Family(str, Enum):
    MANY_LOCAL_OPTIMA = "many-local-optima"
    PLATE = "plate"
    VALLEY = "valley"
    OTHER = "other"
    DEMO = "demo"
    MULTI_OBJECTIVE = "multi-objective"


# -------------------------
# Single-objective functions
# -------------------------
def ackley(x):
    out = (
        -20 * np.exp(-0.2 * np.sqrt(np.mean(x**2)))
        - np.exp(np.mean(np.cos(2 * np.pi * x)))
        + 20
        + np.exp(1)
    )
    return out


def bukin_n6(x):
    x_1, x_2 = x
    return 100 * np.sqrt(np.abs(x_2 - 0.01 * x_1**2)) + 0.01 * np.abs(x_1 + 10)


def rastrigin(x):
    return 10 * x.size + np.sum(x**2 - 10 * np.cos(2 * np.pi * x))


def cross_in_tray(x):
    x_1, x_2 = x
    inner = np.abs(100 - np.sqrt(x_1**2 + x_2**2) / np.pi)
    return -0.0001 * (np.abs(np.sin(x_1) * np.sin(x_2) * np.exp(inner)) + 1) ** 0.1


def levy_n13(x):
    x_1, x_2 = x
    out = (
        np.sin(3 * np.pi * x_1) ** 2
        + (x_1 - 1) ** 2 * (1 + np.sin(3 * np.pi * x_2) ** 2)
        + (x_2 - 1) ** 2 * (1 + np.sin(2 * np.pi * x_2) ** 2)
    )
    return out


def eggholder(x):
    x_1, x_2 = x
    out = -(x_2 + 47) * np.sin(np.sqrt(np.abs(x_2 + x_1 / 2 + 47))) - x_1 * np.sin(
        np.sqrt(np.abs(x_1 - (x_2 + 47)))
    )
    return out


def schaffer_n2(x):
    x_1, x_2 = x
    num = np.sin(x_1**2 - x_2**2) ** 2 - 0.5
    den = (1 + 0.001 * (x_1**2 + x_2**2)) ** 2
    return 0.5 + num / den


def schwefel(x):
    return 418.9829 * x.size - np.sum(x * np.sin(np.sqrt(np.abs(x))))


def shubert(x):
    x_1, x_2 = x
    i = np.arange(1, 6)
    return np.sum(i * np.cos((i + 1) * x_1 + i)) * np.sum(i * np.cos((i + 1) * x_2 + i))


def drop_wave(x):
    x_1, x_2 = x
    r2 = x_1**2 + x_2**2
    return -(1 + np.cos(12 * np.sqrt(r2))) / (0.5 * r2 + 2)


def himmelblau(x):
    x_1, x_2 = x
    return (x_1**2 + x_2 - 11) ** 2 + (x_1 + x_2**2 - 7) ** 2


def booth(x):
    x_1, x_2 = x
    return (x_1 + 2 * x_2 - 7) ** 2 + (2 * x_1 + x_2 - 5) ** 2


def matyas(x):
    x_1, x_2 = x
    return 0.26 * (x_1**2 + x_2**2) - 0.48 * x_1 * x_2


def mccormick(x):
    x_1, x_2 = x
    return np.sin(x_1 + x_2) + (x_1 - x_2) ** 2 - 1.5 * x_1 + 2.5 * x_2 + 1


def three_hump_camel(x):
    x_1, x_2 = x
    return 2 * x_1**2 - 1.05 * x_1**4 + x_1**6 / 6 + x_1 * x_2 + x_2**2


def six_hump_camel(x):
    x_1, x_2 = x
    return (4 - 2.1 * x_1**2 + x_1**4 / 3) * x_1**2 + x_1 * x_2 + (-4 + 4 * x_2**2) * x_2**2


def rosenbrock(x):
    return np.sum(100 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1) ** 2)


def dixon_price(x):
    i = np.arange(2, x.size + 1)
    return (x[0] - 1) ** 2 + np.sum(i * (2 * x[1:] ** 2 - x[:-1]) ** 2)


def beale(x):
    x_1, x_2 = x
    out = (
        (1.5 - x_1 + x_1 * x_2) ** 2
        + (2.25 - x_1 + x_1 * x_2**2) ** 2
        + (2.625 - x_1 + x_1 * x_2**3) ** 2
    )
    return out


def goldstein_price(x):
    x_1, x_2 = x
    a = 1 + (x_1 + x_2 + 1) ** 2 * (
        19 - 14 * x_1 + 3 * x_1**2 - 14 * x_2 + 6 * x_1 * x_2 + 3 * x_2**2
    )
    b = 30 + (2 * x_1 - 3 * x_2) ** 2 * (
        18 - 32 * x_1 + 12 * x_1**2 + 48 * x_2 - 36 * x_1 * x_2 + 27 * x_2**2
    )
    return a * b


def forrester(x):
    (x_1,) = x
    return (6 * x_1 - 2) ** 2 * np.sin(12 * x_1 - 4)


def devilliersglasser02_paper(x):
    # Literal two-variable quadratic; not the five-parameter curve fit that
    # usually carries this name.
    x_1, x_2 = x
    return (2 * x_1 - 3 * x_2) ** 2 + 18 * x_1 - 32 * x_2 + 12 * x_1**2 + 48 * x_2 + 27 * x_2**2


def sphere(x):
    return np.sum(x**2)


def sinusoidal(x):
    return np.sum(np.sin(x))


# -------------------------
# Multi-objective functions
# -------------------------
def _zdt_g(x):
    return 1 + 9 * np.sum(x[1:]) / (x.size - 1)


def zdt1(x):
    f1 = x[0]
    g = _zdt_g(x)
    return np.array([f1, g * (1 - np.sqrt(f1 / g))])


def zdt2(x):
    f1 = x[0]
    g = _zdt_g(x)
    return np.array([f1, g * (1 - (f1 / g) ** 2)])


def _dtlz1_objectives(position, g):
    """Objectives of DTLZ1 from the M-1 position variables and the distance term g."""
    m = position.size + 1
    scale = 0.5 * (1 + g)
    out = np.empty(m)
    for k in range(m):
        # f_{k+1} = scale * prod(x_1..x_{M-1-k}) * (1 - x_{M-k}) for k > 0
        value = scale * np.prod(position[: m - 1 - k])
        if k > 0:
            value *= 1 - position[m - 1 - k]
        out[k] = value
    return out


def dltz1(x, n_objectives=3):
    position = x[: n_objectives - 1]
    tail = x[n_objectives - 1 :]
    g = 100 * (tail.size + np.sum((tail - 0.5) ** 2 - np.cos(20 * np.pi * (tail - 0.5))))
    return _dtlz1_objectives(position, g)


def paper_mo_demo(x):
    x_1, x_2 = x
    return np.array([np.sin(x_1) + np.cos(x_2), np.exp(-((x_1 - 5) ** 2) - (x_2 - 5) ** 2)])


# -------------------------
# Analytic fronts
# -------------------------
def _zdt1_front(k):
    f1 = np.linspace(0.0, 1.0, k)
    return np.column_stack([f1, 1 - np.sqrt(f1)])


def _zdt2_front(k):
    f1 = np.linspace(0.0, 1.0, k)
    return np.column_stack([f1, 1 - f1**2])


def _dltz1_front(k, n_objectives=3):
    # Deterministic low-discrepancy positions mapped through the g = 0 surface,
    # so every point satisfies sum(f) == 0.5.
    positions = qmc.Halton(d=n_objectives - 1, scramble=False).random(k)
    return np.vstack([_dtlz1_objectives(p, 0.0) for p in positions])


# -------------------------
# Specs
# -------------------------
@dataclass(frozen=True)
class BenchmarkSpec:
    id: str
    function: Callable = field(repr=False)
    dim_rule: DimRule
    default_bounds: SearchSpace
    known_optimum: Optional[float]
    argmin_examples: tuple = ()
    family: Family = Family.OTHER
    title: str = ""
    min_dim: int = 1

    n_objectives = 1

    @property
    def default_dim(self) -> int:
        return self.default_bounds.dim

    def space(self, dim: Optional[int] = None) -> SearchSpace:
        """Bounds for ``dim`` dimensions (any-n functions repeat the first range)."""
        if dim is None or dim == self.default_dim:
            return self.default_bounds
        if self.dim_rule is not DimRule.ANY_N:
            raise InvalidConfigError(f"{self.id} is {self.dim_rule.value}; cannot use dim={dim}")
        if dim < self.min_dim:
            raise InvalidConfigError(f"{self.id} needs at least {self.min_dim} dimensions")
        return SearchSpace.uniform(self.default_bounds.lows[0], self.default_bounds.highs[0], dim)

    def check_shape(self, x: np.ndarray) -> None:
        if x.ndim != 1:
            raise ShapeError(f"{self.id}: expected a vector, got shape {x.shape}")
        if self.dim_rule is DimRule.FIXED_1D and x.size != 1:
            raise ShapeError(f"{self.id} is one-dimensional, got {x.size} values")
        if self.dim_rule is DimRule.FIXED_2D and x.size != 2:
            raise ShapeError(f"{self.id} is two-dimensional, got {x.size} values")
        if x.size < self.min_dim:
            raise ShapeError(f"{self.id} needs at least {self.min_dim} values, got {x.size}")

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        self.check_shape(x)
        if not np.all(np.isfinite(x)):
            raise DomainError(f"{self.id}: non-finite input {x}")
        value = float(self.function(x))
        if not math.isfinite(value):
            raise DomainError(f"{self.id}: non-finite value at {x}")
        return value


@dataclass(frozen=True)
class MultiObjectiveSpec:
    id: str
    function: Callable = field(repr=False)
    n_vars: int
    n_objectives: int
    bounds: SearchSpace
    front_sampler: Optional[Callable[[int], np.ndarray]] = field(default=None, repr=False)
    family: Family = Family.MULTI_OBJECTIVE
    title: str = ""
    fixed_vars: bool = False

    dim_rule = DimRule.ANY_N
    known_optimum = None

    @property
    def default_bounds(self) -> SearchSpace:
        return self.bounds

    @property
    def default_dim(self) -> int:
        return self.n_vars

    def space(self, dim: Optional[int] = None) -> SearchSpace:
        if dim is None or dim == self.n_vars:
            return self.bounds
        if self.fixed_vars:
            raise InvalidConfigError(f"{self.id} has exactly {self.n_vars} variables")
        if dim < self.n_objectives:
            raise InvalidConfigError(f"{self.id} needs at least {self.n_objectives} variables")
        return SearchSpace.uniform(self.bounds.lows[0], self.bounds.highs[0], dim)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size < self.n_objectives or (self.fixed_vars and x.size != self.n_vars):
            raise ShapeError(f"{self.id}: unsupported input shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DomainError(f"{self.id}: non-finite input {x}")
        values = np.asarray(self.function(x), dtype=float)
        if not np.all(np.isfinite(values)):
            raise DomainError(f"{self.id}: non-finite objectives at {x}")
        return values


Spec = Union[BenchmarkSpec, MultiObjectiveSpec]


def _box(*pairs) -> SearchSpace:
    return SearchSpace.from_bounds(pairs)


_HIMMELBLAU_ROOTS = (
    (3.0, 2.0),
    (-2.805118, 3.131312),
    (-3.779310, -3.283186),
    (3.584428, -1.848126),
)

_CATALOG: tuple[Spec, ...] = (
    # Many local optima
    BenchmarkSpec("ackley", ackley, DimRule.ANY_N, _box((-32.768, 32.768), (-32.768, 32.768)),
                  0.0, ((0.0, 0.0),), Family.MANY_LOCAL_OPTIMA, "Ackley"),
    BenchmarkSpec("bukin_n6", bukin_n6, DimRule.FIXED_2D, _box((-15.0, -5.0), (-3.0, 3.0)),
                  0.0, ((-10.0, 1.0),), Family.MANY_LOCAL_OPTIMA, "Bukin N.6"),
    BenchmarkSpec("rastrigin", rastrigin, DimRule.ANY_N, _box((-5.12, 5.12), (-5.12, 5.12)),
                  0.0, ((0.0, 0.0),), Family.MANY_LOCAL_OPTIMA, "Rastrigin"),
    BenchmarkSpec("cross_in_tray", cross_in_tray, DimRule.FIXED_2D, _box((-10.0, 10.0), (-10.0, 10.0)),
                  -2.06262,
                  tuple((sx * 1.349406608602084, sy * 1.349406608602084) for sx in (1, -1) for sy in (1, -1)),
                  Family.MANY_LOCAL_OPTIMA, "Cross-in-tray"),
    BenchmarkSpec("levy_n13", levy_n13, DimRule.FIXED_2D, _box((-10.0, 10.0), (-10.0, 10.0)),
                  0.0, ((1.0, 1.0),), Family.MANY_LOCAL_OPTIMA, "Levy N.13"),
    BenchmarkSpec("eggholder", eggholder, DimRule.FIXED_2D, _box((-512.0, 512.0), (-512.0, 512.0)),
                  -959.6407, ((512.0, 404.2319),), Family.MANY_LOCAL_OPTIMA, "Egg-holder"),
    BenchmarkSpec("schaffer_n2", schaffer_n2, DimRule.FIXED_2D, _box((-100.0, 100.0), (-100.0, 100.0)),
                  0.0, ((0.0, 0.0),), Family.MANY_LOCAL_OPTIMA, "Schaffer N.2"),
    BenchmarkSpec("schwefel", schwefel, DimRule.ANY_N, _box((-500.0, 500.0), (-500.0, 500.0)),
                  0.0, ((420.9687, 420.9687),), Family.MANY_LOCAL_OPTIMA, "Schwefel"),
    BenchmarkSpec("shubert", shubert, DimRule.FIXED_2D, _box((-10.0, 10.0), (-10.0, 10.0)),
                  -186.7309088, ((-7.08350641, 4.85805688), (-1.42512843, -0.80032110)),
                  Family.MANY_LOCAL_OPTIMA, "Shubert"),
    BenchmarkSpec("drop_wave", drop_wave, DimRule.FIXED_2D, _box((-5.12, 5.12), (-5.12, 5.12)),
                  -1.0, ((0.0, 0.0),), Family.MANY_LOCAL_OPTIMA, "Drop-wave"),
    BenchmarkSpec("himmelblau", himmelblau, DimRule.FIXED_2D, _box((-5.0, 5.0), (-5.0, 5.0)),
                  0.0, _HIMMELBLAU_ROOTS, Family.MANY_LOCAL_OPTIMA, "Himmelblau"),
    # Plate shaped
    BenchmarkSpec("booth", booth, DimRule.FIXED_2D, _box((-10.0, 10.0), (-10.0, 10.0)),
                  0.0, ((1.0, 3.0),), Family.PLATE, "Booth"),
    BenchmarkSpec("matyas", matyas, DimRule.FIXED_2D, _box((-10.0, 10.0), (-10.0, 10.0)),
                  0.0, ((0.0, 0.0),), Family.PLATE, "Matyas"),
    BenchmarkSpec("mccormick", mccormick, DimRule.FIXED_2D, _box((-1.5, 4.0), (-3.0, 4.0)),
                  -1.9133, ((-0.54719, -1.54719),), Family.PLATE, "McCormick"),
    # Valley shaped
    BenchmarkSpec("three_hump_camel", three_hump_camel, DimRule.FIXED_2D, _box((-5.0, 5.0), (-5.0, 5.0)),
                  0.0, ((0.0, 0.0),), Family.VALLEY, "Three-hump camel"),
    BenchmarkSpec("six_hump_camel", six_hump_camel, DimRule.FIXED_2D, _box((-3.0, 3.0), (-2.0, 2.0)),
                  -1.0316285, ((0.08984201, -0.71265640), (-0.08984201, 0.71265640)),
                  Family.VALLEY, "Six-hump camel"),
    BenchmarkSpec("rosenbrock", rosenbrock, DimRule.ANY_N, _box((-5.0, 10.0), (-5.0, 10.0)),
                  0.0, ((1.0, 1.0),), Family.VALLEY, "Rosenbrock", min_dim=2),
    BenchmarkSpec("dixon_price", dixon_price, DimRule.ANY_N, _box((-10.0, 10.0), (-10.0, 10.0)),
                  0.0, ((1.0, 2 ** -0.5),), Family.VALLEY, "Dixon-Price", min_dim=2),
    # Other
    BenchmarkSpec("beale", beale, DimRule.FIXED_2D, _box((-4.5, 4.5), (-4.5, 4.5)),
                  0.0, ((3.0, 0.5),), Family.OTHER, "Beale"),
    BenchmarkSpec("goldstein_price", goldstein_price, DimRule.FIXED_2D, _box((-2.0, 2.0), (-2.0, 2.0)),
                  3.0, ((0.0, -1.0),), Family.OTHER, "Goldstein-Price"),
    BenchmarkSpec("forrester", forrester, DimRule.FIXED_1D, _box((0.0, 1.0)),
                  -6.02074, ((0.7572487,),), Family.OTHER, "Forrester"),
    # Convex quadratic whose unconstrained minimum lies outside the box; the
    # constrained minimum is on the corner (1, 1), confirmed by a grid scan.
    BenchmarkSpec("devilliersglasser02_paper", devilliersglasser02_paper, DimRule.FIXED_2D,
                  _box((1.0, 60.0), (1.0, 60.0)), 74.0, ((1.0, 1.0),), Family.OTHER,
                  "DeVilliersGlasser02 (literal two-variable form)"),
    # Demo objectives
    BenchmarkSpec("sphere", sphere, DimRule.ANY_N, _box((-10.0, 10.0), (-10.0, 10.0)),
                  0.0, ((0.0, 0.0),), Family.DEMO, "Convex sphere"),
    BenchmarkSpec("sinusoidal", sinusoidal, DimRule.ANY_N, _box((-10.0, 10.0), (-10.0, 10.0)),
                  -2.0, ((-math.pi / 2, -math.pi / 2),), Family.DEMO, "Sinusoidal sum of sines"),
    # Multi-objective
    MultiObjectiveSpec("zdt1", zdt1, 30, 2, SearchSpace.uniform(0.0, 1.0, 30), _zdt1_front, title="ZDT1"),
    MultiObjectiveSpec("zdt2", zdt2, 30, 2, SearchSpace.uniform(0.0, 1.0, 30), _zdt2_front, title="ZDT2"),
    MultiObjectiveSpec("dltz1", dltz1, 7, 3, SearchSpace.uniform(0.0, 1.0, 7), _dltz1_front, title="DTLZ1 (M=3)"),
    MultiObjectiveSpec("paper_mo_demo", paper_mo_demo, 2, 2, _box((-10.0, 10.0), (-10.0, 10.0)),
                       None, Family.DEMO, "Sine/cosine vs Gaussian bump", fixed_vars=True),
)

_BY_ID: dict[str, Spec] = {spec.id: spec for spec in _CATALOG}


def catalog() -> tuple[Spec, ...]:
    return _CATALOG


def single_objective_ids(include_demos: bool = True) -> list[str]:
    return [
        s.id for s in _CATALOG
        if isinstance(s, BenchmarkSpec) and (include_demos or s.family is not Family.DEMO)
    ]


def multi_objective_ids() -> list[str]:
    return [s.id for s in _CATALOG if isinstance(s, MultiObjectiveSpec)]


def ids_in_family(family: Family) -> list[str]:
    return [s.id for s in _CATALOG if s.family is family and isinstance(s, BenchmarkSpec)]


def lookup(benchmark_id: str) -> Spec:
    key = str(benchmark_id).strip().lower()
    try:
        return _BY_ID[key]
    except KeyError:
        raise BenchmarkNotFound(benchmark_id, _BY_ID) from None


def lookup_single(benchmark_id: str) -> BenchmarkSpec:
    spec = lookup(benchmark_id)
    if not isinstance(spec, BenchmarkSpec):
        raise InvalidConfigError(f"{spec.id} is multi-objective")
    return spec


def lookup_multi(benchmark_id: str) -> MultiObjectiveSpec:
    spec = lookup(benchmark_id)
    if not isinstance(spec, MultiObjectiveSpec):
        raise InvalidConfigError(f"{spec.id} is single-objective")
    return spec


def evaluate_single(benchmark_id: str, x) -> float:
    return lookup_single(benchmark_id)(x)


def evaluate_multi(benchmark_id: str, x) -> np.ndarray:
    return lookup_multi(benchmark_id)(x)


def analytic_front(benchmark_id: str, k: int) -> np.ndarray:
    """``k`` points on the true Pareto front as a ``(k, n_objectives)`` array."""
    spec = lookup(benchmark_id)
    sampler = getattr(spec, "front_sampler", None)
    if sampler is None:
        raise BenchmarkNotFound(
            benchmark_id, [s.id for s in _CATALOG if getattr(s, "front_sampler", None) is not None]
        )
    if k < 2:
        raise InvalidConfigError(f"front sample size must be >= 2, got {k}")
    return sampler(k)


def resolve_space(benchmark_id: str, dim: Optional[int] = None) -> SearchSpace:
    """Bounds of ``benchmark_id`` at ``dim`` dimensions (its default when ``None``)."""
    return lookup(benchmark_id).space(dim)
