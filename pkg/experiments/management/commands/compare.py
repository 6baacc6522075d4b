from experiments.config import resolve_plan
from experiments.harness import compare_experiment

from ._options import HarnessCommand, parse_assignments


class Command(HarnessCommand):
    help = (
        "Compare two plans run for run with matched seeds; Welch t-test per benchmark. "
        "The second plan starts from the same flags and is changed with the --against-* options; "
        "without them it is the same plan run by classic DE."
    )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--against-preset", help="Preset of the second plan (default: the first plan's).")
        parser.add_argument("--against-config", help="Plan file of the second plan (default: the first plan's).")
        parser.add_argument("--against-algorithm", choices=["aded", "classic_de"])
        parser.add_argument("--against-set", action="append", metavar="KEY=VALUE", help="Plan key of the second plan.")

    def build_plan(self, options):
        plan = super().build_plan(options)
        against_options = ("against_preset", "against_config", "against_algorithm", "against_set")
        if not any(options.get(name) for name in against_options):
            self.against = plan.with_algorithm("classic_de")
            return plan

        overrides = {key: value for key, value in self.plan_overrides(options).items() if key != "algorithm"}
        overrides.update(parse_assignments(options.get("against_set")))
        if options.get("against_algorithm"):
            overrides["algorithm"] = options["against_algorithm"]
        self.against = resolve_plan(
            options.get("against_preset") or options.get("preset"),
            options.get("against_config") or options.get("config_file"),
            **overrides,
        )
        return plan

    def execute_plan(self, plan, record):
        return compare_experiment(plan, self.against, record)
