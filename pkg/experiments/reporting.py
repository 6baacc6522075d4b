"""Artifact writers for harness reports.

Every file written here is a pure function of the plan and the seeded results:
no wall-clock times or timestamps, so repeated invocations are byte-identical.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path

from rest_framework.utils.encoders import JSONEncoder

from optimizer.benchmarks import lookup
from optimizer.moo import front_csv_rows
from optimizer.stats import render_comparison_table

from .serializers import (
    BatchSummarySerializer,
    ComparisonRowSerializer,
    MoSummarySerializer,
    VariantScoreSerializer,
)

logger = logging.getLogger(__name__)

GENERATION_HEADER = ["benchmark", "algorithm", "label", "run", "seed", "generation", "best_f", "diversity", "fdc", "convergence_rate"]
MO_GENERATION_HEADER = ["benchmark", "run", "seed", "generation", "front_size", "best_scalarized"]
RUN_HEADER = [
    "benchmark", "algorithm", "label", "run", "seed", "best_f", "generations",
    "n_evaluations", "n_local_evaluations", "terminated_by", "final_convergence_rate", "best_x",
]
MO_RUN_HEADER = ["benchmark", "run", "seed", "front_size", "generations", "n_evaluations", "best_scalarized", "gd", "spread", "terminated_by"]
TOURNAMENT_HEADER = ["variant", "aov", "cs", "q", "aov_rank", "cs_rank", "q_rank", "average_rank"]
COMPARISON_HEADER = ["benchmark", "label_a", "label_b", "mean_a", "sd_a", "mean_b", "sd_b", "t", "p", "df", "stars"]


def _num(value) -> str:
    """CSV cell for a number: shortest round-trip repr, blank for missing or NaN."""
    if value is None:
        return ""
    value = float(value)
    if math.isnan(value):
        return ""
    return repr(value)


def _write_csv(path: Path, header, rows) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    logger.debug("wrote %s", path)
    return path


# -------------------------
# Raw rows
# -------------------------
def generation_rows(outcomes):
    for o in outcomes:
        r, t = o.result, o.task
        for g in range(r.generations):
            yield [
                t.benchmark_id, t.algorithm, t.label, t.run_index, t.config.seed, g + 1,
                _num(r.best_f_history[g]), _num(r.diversity_history[g]),
                _num(r.fdc_history[g]), _num(r.convergence_rate_history[g]),
            ]


def mo_generation_rows(outcomes):
    for o in outcomes:
        r, t = o.result, o.task
        for g, (size, value) in enumerate(zip(r.history, r.scalarized_history)):
            yield [t.benchmark_id, t.run_index, t.config.seed, g + 1, int(size), _num(value)]


def run_rows(outcomes):
    for o in outcomes:
        r, t = o.result, o.task
        yield [
            t.benchmark_id, t.algorithm, t.label, t.run_index, t.config.seed, _num(r.best_f), r.generations,
            r.n_evaluations, r.n_local_evaluations, r.terminated_by.value, _num(r.final_convergence_rate),
            " ".join(_num(v) for v in r.best_x),
        ]


def mo_run_rows(mo_rows):
    for m in mo_rows:
        yield [
            m.benchmark_id, m.run_index, m.seed, m.front_size, m.generations, m.n_evaluations,
            _num(m.best_scalarized), _num(m.gd), _num(m.spread), m.terminated_by,
        ]


def population_rows(outcomes, benchmark_id):
    for o in outcomes:
        if o.benchmark_id != benchmark_id:
            continue
        for g, X in enumerate(o.result.population_snapshots):
            for i, x in enumerate(X):
                yield [o.task.label, o.run_index, g + 1, i] + [_num(v) for v in x]


# -------------------------
# Aggregate report
# -------------------------
def report_payload(report) -> dict:
    return {
        "command": str(report.command),
        "tool_version": report.tool_version,
        "config_hash": report.config_hash,
        "plan": report.plan_snapshot(),
        "summaries": BatchSummarySerializer(report.summaries, many=True).data,
        "comparisons": ComparisonRowSerializer(report.comparisons, many=True).data,
        "variants": VariantScoreSerializer(report.variants, many=True).data,
        "fronts": MoSummarySerializer(report.mo_rows, many=True).data,
    }


def render_json(report) -> str:
    return json.dumps(report_payload(report), cls=JSONEncoder, indent=2, sort_keys=True) + "\n"


def _table(header, rows) -> str:
    rows = [[str(c) for c in row] for row in rows]
    widths = [max(len(line[c]) for line in [header] + rows) for c in range(len(header))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in [header] + rows) + "\n"


def _short(value, spec=".6g") -> str:
    if value is None:
        return "-"
    if not math.isfinite(value):
        return str(float(value))
    return format(value, spec)


def render_text(report) -> str:
    parts = [f"{report.command} | preset {report.plan.preset} | config {report.config_hash[:12]}\n"]
    if report.summaries:
        parts.append(
            _table(
                ["benchmark", "label", "runs", "mean", "sd", "best", "worst", "success", "Q"],
                [
                    [
                        s.benchmark_id, s.label, s.runs, _short(s.mean), _short(s.sd), _short(s.best), _short(s.worst),
                        _short(s.success_rate, ".2f"), _short(s.q.Q if s.q else None, ".1f"),
                    ]
                    for s in report.summaries
                ],
            )
        )
    if report.comparisons:
        parts.append(render_comparison_table(report.comparisons))
    if report.variants:
        parts.append(
            _table(
                ["variant", "AOV", "Cs", "Q", "rank AOV", "rank Cs", "rank Q", "average"],
                [
                    [v.variant, _short(v.aov), _short(v.cs), _short(v.q, ".1f"),
                     _short(v.aov_rank, ".1f"), _short(v.cs_rank, ".1f"), _short(v.q_rank, ".1f"), _short(v.average_rank, ".2f")]
                    for v in report.variants
                ],
            )
        )
    if report.mo_rows:
        parts.append(
            _table(
                ["benchmark", "run", "front", "generations", "best scalarized", "GD", "spread"],
                [
                    [m.benchmark_id, m.run_index, m.front_size, m.generations, _short(m.best_scalarized), _short(m.gd), _short(m.spread)]
                    for m in report.mo_rows
                ],
            )
        )
    return "\n".join(parts)


# -------------------------
# Entry point
# -------------------------
def write_artifacts(report) -> list[Path]:
    out = Path(report.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if report.mo_rows or report.command == "moo":
        written.append(_write_csv(out / "generations.csv", MO_GENERATION_HEADER, mo_generation_rows(report.outcomes)))
        written.append(_write_csv(out / "runs.csv", MO_RUN_HEADER, mo_run_rows(report.mo_rows)))
        for benchmark_id in report.plan.benchmarks:
            spec = lookup(benchmark_id)
            header = ["run"] + [f"x{j + 1}" for j in range(report.plan.space_for(benchmark_id).dim)]
            header += [f"f{m + 1}" for m in range(spec.n_objectives)]
            rows = (
                [o.run_index] + [_num(v) for v in row]
                for o in report.outcomes if o.benchmark_id == benchmark_id
                for row in front_csv_rows(o.result)
            )
            written.append(_write_csv(out / f"front_{benchmark_id}.csv", header, rows))
    else:
        written.append(_write_csv(out / "generations.csv", GENERATION_HEADER, generation_rows(report.outcomes)))
        written.append(_write_csv(out / "runs.csv", RUN_HEADER, run_rows(report.outcomes)))
        if report.plan.export_population:
            for benchmark_id in report.plan.benchmarks:
                dim = report.plan.space_for(benchmark_id).dim
                header = ["label", "run", "generation", "individual"] + [f"x{j + 1}" for j in range(dim)]
                written.append(
                    _write_csv(out / f"population_{benchmark_id}.csv", header, population_rows(report.outcomes, benchmark_id))
                )
    if report.comparisons:
        rows = (
            [c.benchmark_id, c.label_a, c.label_b, _num(c.mean_a), _num(c.sd_a), _num(c.mean_b), _num(c.sd_b),
             _num(c.t), _num(c.p), _num(c.df), c.stars]
            for c in report.comparisons
        )
        written.append(_write_csv(out / "comparison.csv", COMPARISON_HEADER, rows))
    if report.variants:
        rows = (
            [v.variant, _num(v.aov), _num(v.cs), _num(v.q), _num(v.aov_rank), _num(v.cs_rank), _num(v.q_rank), _num(v.average_rank)]
            for v in report.variants
        )
        written.append(_write_csv(out / "tournament.csv", TOURNAMENT_HEADER, rows))

    (out / "report.json").write_text(render_json(report), encoding="utf-8")
    (out / "report.txt").write_text(render_text(report), encoding="utf-8")
    written += [out / "report.json", out / "report.txt"]
    logger.info("wrote %d artifacts to %s", len(written), out)
    return written
