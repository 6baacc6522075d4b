"""Two-sample comparison and variant ranking."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import stats as st

from .exceptions import DegenerateSampleError, InvalidConfigError
from .metrics import RunBatch

logger = logging.getLogger(__name__)


class WelchResult(NamedTuple):
    t: float
    p: float
    df: float


def welch_t(sample_a: Sequence[float], sample_b: Sequence[float]) -> WelchResult:
    """Welch's unequal-variance t test, two-sided."""
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise InvalidConfigError(f"each sample needs at least two values, got {a.size} and {b.size}")
    va, vb = a.var(ddof=1) / a.size, b.var(ddof=1) / b.size
    diff = a.mean() - b.mean()
    se2 = va + vb
    if se2 == 0:
        if diff == 0:
            return WelchResult(0.0, 1.0, float(a.size + b.size - 2))
        raise DegenerateSampleError(
            f"both samples are constant with different means ({a.mean()} vs {b.mean()})"
        )
    t = diff / np.sqrt(se2)
    df = se2**2 / (va**2 / (a.size - 1) + vb**2 / (b.size - 1))
    p = 2 * st.t.sf(abs(t), df)
    return WelchResult(float(t), float(min(p, 1.0)), float(df))


def significance_stars(p: float) -> str:
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    return ""


@dataclass(frozen=True)
class ComparisonRow:
    benchmark_id: str
    label_a: str
    label_b: str
    mean_a: float
    sd_a: float
    mean_b: float
    sd_b: float
    t: float
    p: float
    df: float

    @property
    def stars(self) -> str:
        return significance_stars(self.p)


def compare_batches(batch_a: RunBatch, batch_b: RunBatch, labels: tuple[str, str] = ("A", "B")) -> ComparisonRow:
    if batch_a.benchmark_id != batch_b.benchmark_id:
        raise InvalidConfigError(
            f"cannot compare batches on different benchmarks: {batch_a.benchmark_id} vs {batch_b.benchmark_id}"
        )
    a, b = batch_a.best_values(), batch_b.best_values()
    result = welch_t(a, b)
    return ComparisonRow(
        benchmark_id=batch_a.benchmark_id,
        label_a=labels[0],
        label_b=labels[1],
        mean_a=float(a.mean()),
        sd_a=float(a.std(ddof=1)),
        mean_b=float(b.mean()),
        sd_b=float(b.std(ddof=1)),
        t=result.t,
        p=result.p,
        df=result.df,
    )


def render_comparison_table(rows: Iterable[ComparisonRow]) -> str:
    """Aligned text table: benchmark, per-algorithm mean and sd, t, p and stars."""
    rows = list(rows)
    if not rows:
        return ""
    la, lb = rows[0].label_a, rows[0].label_b
    header = ["benchmark", f"{la} mean", f"{la} sd", f"{lb} mean", f"{lb} sd", "t", "p", ""]
    body = [
        [
            r.benchmark_id,
            f"{r.mean_a:.3f}",
            f"{r.sd_a:.3f}",
            f"{r.mean_b:.3f}",
            f"{r.sd_b:.3f}",
            f"{r.t:.3f}",
            f"{r.p:.4f}",
            r.stars,
        ]
        for r in rows
    ]
    widths = [max(len(line[c]) for line in [header] + body) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in [header] + body]
    return "\n".join(lines) + "\n"


# -------------------------
# Ranking
# -------------------------
@dataclass(frozen=True)
class VariantScore:
    variant: str
    aov: float
    cs: float
    q: float
    aov_rank: float
    cs_rank: float
    q_rank: float
    average_rank: float


def rank_variants(scores: Sequence[tuple[str, float, float, float]]) -> list[VariantScore]:
    """Rank each column ascending (midranks on ties) and sort by the mean rank."""
    scores = list(scores)
    if len(scores) < 2:
        raise InvalidConfigError("ranking needs at least two variants")
    table = np.array([[s[1], s[2], s[3]] for s in scores], dtype=float)
    ranks = np.column_stack([st.rankdata(table[:, c], method="average") for c in range(3)])
    ranked = [
        VariantScore(
            variant=s[0],
            aov=float(s[1]),
            cs=float(s[2]),
            q=float(s[3]),
            aov_rank=float(r[0]),
            cs_rank=float(r[1]),
            q_rank=float(r[2]),
            average_rank=float(r.sum() / 3),
        )
        for s, r in zip(scores, ranks)
    ]
    return sorted(ranked, key=lambda v: v.average_rank)
