"""Named experiment presets.

A preset is a flat mapping over the plan-key vocabulary in ``experiments.config``.
Presets prefixed ``paper-`` pin the population, generations, bounds and run
counts of the published experiments they reproduce.
"""
from optimizer.benchmarks import Family, ids_in_family

# Per-variant {F, CR} pairs for the strategy tournament.
TOURNAMENT_PARAMETERS = {
    "rand1bin": (0.9, 0.5),
    "rand1exp": (0.9, 0.0),
    "best1bin": (0.1, 0.1),
    "best1exp": (0.9, 0.7),
    "rand2bin": (0.3, 0.2),
    "rand2exp": (0.9, 0.3),
    "best2bin": (0.1, 0.7),
    "best2exp": (0.9, 0.3),
    "currenttorand1bin": (0.5, 0.4),
    "currenttorand1exp": (0.9, 0.3),
    "currenttobest1bin": (0.2, 0.8),
    "currenttobest1exp": (0.9, 0.1),
    "randtobest1bin": (0.1, 0.8),
    "randtobest1exp": (0.9, 0.4),
}

DEFAULTS = {
    "benchmark": "sphere",
    "algorithm": "aded",
    "dim": "",
    "low": "",
    "high": "",
    "pop": 100,
    "gens": 100,
    "runs": 1,
    "seed": 0,
    "strategy": "aded-default",
    "schedule": "scheduled",
    "F": 0.5,
    "CR": 0.5,
    "classic_F": 0.8,
    "classic_CR": 0.9,
    "neighborhood": "dynamic",
    "neighborhood_size": 5,
    "local_search": "on",
    "local_search_iterations": 25,
    "local_search_probability": 1.0,
    "stagnation_limit": 10,
    "stagnation_tol": 1e-12,
    "weights": "",
    "weight_mode": "fixed",
    "front_samples": "",
    "success_tol": "",
    "jobs": "",
    "out": "",
    "format": "csv",
    "export_population": "off",
}

_FAMILY_STUDY = {"pop": 300, "gens": 200, "runs": 30}


def _family(family: Family) -> str:
    return ",".join(ids_in_family(family))


PRESETS = {
    "default": {},
    "paper-sinusoidal": {
        "benchmark": "sinusoidal",
        "pop": 50,
        "gens": 100,
        "low": -10,
        "high": 10,
        "runs": 10,
        "neighborhood": "dynamic",
        "local_search": "on",
    },
    "paper-sinusoidal-all-neighbors": {
        "benchmark": "sinusoidal",
        "pop": 50,
        "gens": 100,
        "low": -10,
        "high": 10,
        "runs": 10,
        "neighborhood": "all",
        "local_search": "on",
    },
    "paper-convex-vs-nonconvex": {
        "benchmark": "sphere,sinusoidal",
        **_FAMILY_STUDY,
        "schedule": "fixed-random",
        "classic_F": 0.8,
        "classic_CR": 0.9,
    },
    "paper-table14": {"benchmark": _family(Family.MANY_LOCAL_OPTIMA), **_FAMILY_STUDY},
    "paper-table16": {"benchmark": _family(Family.PLATE), **_FAMILY_STUDY},
    "paper-table18": {"benchmark": _family(Family.VALLEY), **_FAMILY_STUDY},
    "paper-table20": {"benchmark": _family(Family.OTHER), **_FAMILY_STUDY},
    "paper-tournament": {
        "benchmark": "sphere,sinusoidal",
        "pop": 100,
        "gens": 100,
        "runs": 30,
        "schedule": "fixed",
    },
    "paper-table25": {
        "benchmark": "zdt1,zdt2,dltz1",
        "algorithm": "aded_mo",
        "pop": 100,
        "gens": 100,
        "runs": 1,
        "weight_mode": "random",
        "stagnation_limit": 100,
    },
}


def preset_names() -> list[str]:
    return list(PRESETS)
