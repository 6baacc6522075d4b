import json

from django.core.management.base import BaseCommand, CommandError

from optimizer.benchmarks import Family, MultiObjectiveSpec, catalog

from experiments.serializers import BenchmarkSerializer

from ._options import CONFIG_ERROR


class Command(BaseCommand):
    help = "List the benchmark catalog (the list-benchmarks command; Django command names use underscores)."

    def add_arguments(self, parser):
        parser.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
        parser.add_argument("--family", choices=[f.value for f in Family])
        parser.add_argument("--kind", choices=["single", "multi"])

    def handle(self, *args, **options):
        specs = [
            s for s in catalog()
            if (not options.get("family") or s.family.value == options["family"])
            and (not options.get("kind") or isinstance(s, MultiObjectiveSpec) == (options["kind"] == "multi"))
        ]
        if not specs:
            raise CommandError("no benchmark matches the filters", returncode=CONFIG_ERROR)
        data = BenchmarkSerializer(specs, many=True).data
        if options["fmt"] == "json":
            self.stdout.write(json.dumps(data, indent=2))
            return

        header = ["id", "family", "kind", "dim", "bounds", "optimum"]
        rows = [
            [
                d["id"], d["family"], d["kind"], str(d["default_dim"]),
                " ".join(f"[{lo:g},{hi:g}]" for lo, hi in d["bounds"]),
                "-" if d["known_optimum"] is None else f"{d['known_optimum']:.6g}",
            ]
            for d in data
        ]
        widths = [max(len(r[c]) for r in [header] + rows) for c in range(len(header))]
        for r in [header] + rows:
            self.stdout.write("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
        self.stdout.write(self.style.SUCCESS(f"{len(rows)} benchmarks"))
