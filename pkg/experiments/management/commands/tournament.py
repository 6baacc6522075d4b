from experiments.harness import tournament_experiment

from ._options import HarnessCommand


class Command(HarnessCommand):
    help = "Rank the fourteen mutation/crossover variants on AOV, convergence speed and Q."
    algorithm = "aded"

    def execute_plan(self, plan, record):
        return tournament_experiment(plan, record)
