"""Differential evolution, best/1 mutation with binomial crossover."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from revbrew.evolve.pareto import nondominated_mask, rank_and_crowding
from revbrew.evolve.result import GenerationStat, RunResult
from revbrew.model import BrewConfig, Inventory, RecipeEvaluator, TargetProfile

ProgressCallback = Callable[[int, float, int], None]


@dataclass(frozen=True)
class DeConfig:
    """Search parameters; fitness is the summed objective error."""

    seed: int
    population_size: int = 100
    f_weight: float = 0.5
    cr: float = 0.5
    max_evaluations: int = 100_000
    success_threshold: float = 0.05

    def __post_init__(self):
        if self.population_size < 4:
            raise ValueError("population_size must be >= 4")
        if not 0.0 <= self.f_weight <= 2.0:
            raise ValueError("f_weight must be in [0, 2]")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("cr must be in [0, 1]")
        if self.max_evaluations < self.population_size:
            raise ValueError("max_evaluations must cover at least initialization")
        if self.success_threshold < 0:
            raise ValueError("success_threshold must be >= 0")


def _distinct_pairs(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Per target index i: two random indices r1 != r2, both != i."""
    idx = np.arange(n)
    r1 = rng.integers(0, n, size=n)
    while True:
        bad = r1 == idx
        if not bad.any():
            break
        r1[bad] = rng.integers(0, n, size=int(bad.sum()))
    r2 = rng.integers(0, n, size=n)
    while True:
        bad = (r2 == idx) | (r2 == r1)
        if not bad.any():
            break
        r2[bad] = rng.integers(0, n, size=int(bad.sum()))
    return r1, r2


def de_minimize(
    objective_batch: Callable[[np.ndarray], np.ndarray],
    lower: np.ndarray,
    upper: np.ndarray,
    cfg: DeConfig,
    initial_population: Optional[np.ndarray] = None,
    on_generation: Optional[ProgressCallback] = None,
) -> dict:
    """Greedy best/1 DE over a batched objective.

    ``objective_batch`` may return an (m,) fitness vector or an (m, k)
    objective matrix whose row sums serve as fitness. Stops after the first
    full generation whose best fitness reaches ``success_threshold``, or when
    another generation would exceed ``max_evaluations``.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != upper.shape or np.any(lower > upper):
        raise ValueError("invalid bounds")
    d = lower.shape[0]
    n = cfg.population_size
    rng = np.random.default_rng(cfg.seed)

    def evaluate(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        out = np.asarray(objective_batch(X), dtype=float)
        if out.ndim == 1:
            out = out[:, np.newaxis]
        return out, out.sum(axis=1)

    if initial_population is not None:
        X = np.clip(np.asarray(initial_population, dtype=float), lower, upper)
        if X.shape != (n, d):
            raise ValueError(f"initial population must have shape {(n, d)}")
        X = X.copy()
    else:
        X = lower + rng.random((n, d)) * (upper - lower)
    F, fitness = evaluate(X)
    evaluations = n

    trace: list[GenerationStat] = []
    generation = 0
    while (
        fitness.min() > cfg.success_threshold
        and evaluations + n <= cfg.max_evaluations
    ):
        best = int(np.argmin(fitness))
        r1, r2 = _distinct_pairs(n, rng)
        mutant = X[best] + cfg.f_weight * (X[r1] - X[r2])

        inherit = rng.random((n, d)) < cfg.cr
        inherit[np.arange(n), rng.integers(0, d, size=n)] = True
        trial = np.clip(np.where(inherit, mutant, X), lower, upper)

        F_trial, fit_trial = evaluate(trial)
        evaluations += n
        improved = fit_trial <= fitness
        X[improved] = trial[improved]
        F[improved] = F_trial[improved]
        fitness[improved] = fit_trial[improved]

        generation += 1
        best_e = float(fitness.min())
        front0 = int(nondominated_mask(F).sum())
        trace.append(GenerationStat(generation, best_e, front0))
        if on_generation is not None:
            on_generation(generation, best_e, front0)

    return {
        "genomes": X,
        "objectives": F,
        "evaluations": evaluations,
        "trace": tuple(trace),
    }


def de_best1_run(
    target: TargetProfile,
    inventory: Inventory,
    config: BrewConfig,
    cfg: DeConfig,
    initial_population: Optional[np.ndarray] = None,
    on_generation: Optional[ProgressCallback] = None,
) -> RunResult:
    """Search the recipe space for a target, minimizing the scalar error."""
    evaluator = RecipeEvaluator(inventory, config)
    upper = inventory.bounds()
    lower = np.zeros_like(upper)
    raw = de_minimize(
        lambda X: evaluator.objectives_matrix(X, target),
        lower,
        upper,
        cfg,
        initial_population=initial_population,
        on_generation=on_generation,
    )
    ranks, crowd, _ = rank_and_crowding(raw["objectives"])
    return RunResult(
        algorithm="de-best1",
        genomes=raw["genomes"],
        objectives=raw["objectives"],
        ranks=ranks,
        crowding=crowd,
        evaluations_used=raw["evaluations"],
        config=cfg,
        seed=cfg.seed,
        trace=raw["trace"],
    )
