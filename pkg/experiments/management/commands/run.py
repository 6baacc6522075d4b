from experiments.harness import run_experiment

from ._options import HarnessCommand


class Command(HarnessCommand):
    help = "Run ADED (or classic DE / ADED-MO via --set algorithm=...) on the plan's benchmarks."

    def execute_plan(self, plan, record):
        return run_experiment(plan, record)
