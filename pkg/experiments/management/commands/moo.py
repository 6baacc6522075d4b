from experiments.harness import moo_experiment

from ._options import HarnessCommand


class Command(HarnessCommand):
    help = "Multi-objective ADED; reports GD and spread against the analytic front."
    algorithm = "aded_mo"
    default_benchmark = "zdt1"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--weights", help="Comma-separated scalarization weights.")
        parser.add_argument("--weight-mode", dest="weight_mode", choices=["fixed", "random"])
        parser.add_argument("--front-samples", dest="front_samples", type=int)

    def build_plan(self, options):
        extra = [f"{key}={options[key]}" for key in ("weights", "weight_mode", "front_samples") if options.get(key) is not None]
        options["assignments"] = (options.get("assignments") or []) + extra
        return super().build_plan(options)

    def execute_plan(self, plan, record):
        return moo_experiment(plan, record)
