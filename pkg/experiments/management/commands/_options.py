"""Flags and error handling shared by the harness commands."""
import logging
from concurrent.futures.process import BrokenProcessPool

from django.core.management.base import BaseCommand, CommandError

from optimizer.exceptions import BenchmarkNotFound, InvalidConfigError, OptimizerError

from experiments import reporting
from experiments.config import resolve_plan
from experiments.presets import preset_names

logger = logging.getLogger(__name__)

CONFIG_ERROR = 2
RUNTIME_ERROR = 3

# Flag dest -> plan key, where they differ.
_FLAG_KEYS = {"fmt": "format"}
_PLAN_FLAGS = (
    "benchmark", "pop", "gens", "runs", "seed", "strategy", "neighborhood", "local_search",
    "stagnation_limit", "jobs", "out", "fmt", "dim",
)


def parse_assignments(items) -> dict:
    values = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InvalidConfigError(f"--set expects KEY=VALUE, got '{item}'")
        values[key.strip()] = value.strip()
    return values


class HarnessCommand(BaseCommand):
    # Algorithm the command runs; None lets the plan decide.
    algorithm = None
    default_benchmark = None

    def add_arguments(self, parser):
        parser.add_argument("--preset", choices=preset_names())
        parser.add_argument("--config", dest="config_file", help="Plan file of KEY = VALUE lines.")
        parser.add_argument("--benchmark", help="Comma-separated benchmark ids.")
        parser.add_argument("--pop", type=int)
        parser.add_argument("--gens", type=int)
        parser.add_argument("--runs", type=int)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--strategy")
        parser.add_argument("--neighborhood", choices=["dynamic", "all"])
        parser.add_argument("--local-search", dest="local_search", choices=["on", "off"])
        parser.add_argument("--stagnation-limit", dest="stagnation_limit", type=int)
        parser.add_argument("--dim", type=int)
        parser.add_argument("--jobs", type=int)
        parser.add_argument("--out")
        parser.add_argument("--format", dest="fmt", choices=["csv", "json"])
        parser.add_argument("--export-population", action="store_true")
        parser.add_argument("--no-record", action="store_true", help="Skip the run ledger.")
        parser.add_argument("--set", dest="assignments", action="append", metavar="KEY=VALUE", help="Any other plan key.")

    def execute_plan(self, plan, record):
        raise NotImplementedError

    def plan_overrides(self, options) -> dict:
        overrides = parse_assignments(options.get("assignments"))
        for flag in _PLAN_FLAGS:
            if options.get(flag) is not None:
                overrides[_FLAG_KEYS.get(flag, flag)] = options[flag]
        if options.get("export_population"):
            overrides["export_population"] = "on"
        if self.algorithm:
            overrides["algorithm"] = self.algorithm
        if self.default_benchmark and not (options.get("preset") or options.get("config_file") or "benchmark" in overrides):
            overrides["benchmark"] = self.default_benchmark
        return overrides

    def build_plan(self, options):
        return resolve_plan(options.get("preset"), options.get("config_file"), **self.plan_overrides(options))

    def handle(self, *args, **options):
        try:
            plan = self.build_plan(options)
            report = self.execute_plan(plan, record=not options.get("no_record"))
        except (InvalidConfigError, BenchmarkNotFound) as exc:
            raise CommandError(str(exc), returncode=CONFIG_ERROR) from exc
        except (OptimizerError, OSError, BrokenProcessPool) as exc:
            logger.exception("%s failed", self.__module__.rsplit(".", 1)[-1])
            raise CommandError(f"run failed: {exc}", returncode=RUNTIME_ERROR) from exc

        if plan.fmt == "json":
            self.stdout.write(reporting.render_json(report), ending="")
        else:
            self.stdout.write(reporting.render_text(report), ending="")
        self.stdout.write(self.style.SUCCESS(f"Artifacts written to {plan.output_dir}"))
