"""Seed-driven evolutionary search engines over bounded real vectors.

Two engines share the population tooling here: an elitist non-dominated
sorting GA over the three recipe objectives, and DE/best/1 over the summed
scalar error. A single ``numpy.random.Generator`` (PCG64) drives each run,
so a fixed seed reproduces a run bit-for-bit on any platform.
"""

from revbrew.evolve.de import DeConfig, de_best1_run, de_minimize
from revbrew.evolve.nsga2 import GENOME_TOL, NsgaConfig, nsga2_minimize, nsga2_run
from revbrew.evolve.operators import (
    polynomial_mutation,
    polynomial_mutation_batch,
    sbx_crossover,
    sbx_crossover_batch,
    tournament_select,
)
from revbrew.evolve.pareto import (
    crowding_distance,
    dominates,
    fast_nondominated_sort,
    nondominated_mask,
    rank_and_crowding,
)
from revbrew.evolve.result import GenerationStat, Individual, RunResult

__all__ = [
    "DeConfig",
    "GENOME_TOL",
    "GenerationStat",
    "Individual",
    "NsgaConfig",
    "RunResult",
    "crowding_distance",
    "de_best1_run",
    "de_minimize",
    "dominates",
    "fast_nondominated_sort",
    "nondominated_mask",
    "nsga2_minimize",
    "nsga2_run",
    "polynomial_mutation",
    "polynomial_mutation_batch",
    "rank_and_crowding",
    "sbx_crossover",
    "sbx_crossover_batch",
    "tournament_select",
]
