from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from optimizer.benchmarks import Family, MultiObjectiveSpec, catalog

from .models import Experiment
from .serializers import BenchmarkSerializer, ExperimentDetailSerializer, ExperimentSerializer


@api_view(["GET"])
def benchmark_list(request):
    """
    Benchmark catalog.
    - ?family=many-local-optima   one family only
    - ?kind=single|multi          objective count
    """
    specs = list(catalog())
    family = request.query_params.get("family")
    if family:
        if family not in {f.value for f in Family}:
            return Response({"detail": f"Unknown family '{family}'."}, status=status.HTTP_400_BAD_REQUEST)
        specs = [s for s in specs if s.family.value == family]
    kind = request.query_params.get("kind")
    if kind in ("single", "multi"):
        specs = [s for s in specs if isinstance(s, MultiObjectiveSpec) == (kind == "multi")]
    elif kind:
        return Response({"detail": "kind must be 'single' or 'multi'."}, status=status.HTTP_400_BAD_REQUEST)
    return Response(BenchmarkSerializer(specs, many=True).data)


@api_view(["GET"])
def experiment_list(request):
    qs = Experiment.objects.all()
    command = request.query_params.get("command")
    if command:
        qs = qs.of_command(command)
    config_hash = request.query_params.get("hash")
    if config_hash:
        qs = qs.with_hash(config_hash)
    return Response(ExperimentSerializer(qs, many=True).data)


@api_view(["GET"])
def experiment_detail(request, pk: int):
    try:
        experiment = Experiment.objects.prefetch_related("runs").get(pk=pk)
    except Experiment.DoesNotExist:
        return Response({"detail": "Not found."}, status=status.HTTP_404_NOT_FOUND)
    return Response(ExperimentDetailSerializer(experiment).data)
