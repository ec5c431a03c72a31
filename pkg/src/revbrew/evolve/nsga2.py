"""Elitist non-dominated-sorting genetic algorithm over bounded real vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from revbrew.evolve.operators import (
    polynomial_mutation_batch,
    sbx_crossover_batch,
    tournament_select,
)
from revbrew.evolve.pareto import crowding_distance, fast_nondominated_sort, rank_and_crowding
from revbrew.evolve.result import GenerationStat, RunResult
from revbrew.model import BrewConfig, Inventory, RecipeEvaluator, TargetProfile

# Genomes equal within this per-variable tolerance count as duplicates.
GENOME_TOL = 1e-12

# Mutation-based refill attempts per generation before falling back to
# fresh uniform samples.
_REFILL_ATTEMPTS = 50

ProgressCallback = Callable[[int, float, int], None]


@dataclass(frozen=True)
class NsgaConfig:
    """Search parameters; the seed is mandatory so every run is reproducible.

    ``mutation_prob`` of None means 1/dimension, resolved at run time.
    """

    seed: int
    population_size: int = 100
    generations: int = 1000
    crossover_prob: float = 0.9
    eta_c: float = 15.0
    eta_m: float = 20.0
    mutation_prob: Optional[float] = None

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must be in [0, 1]")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ValueError("distribution indexes must be > 0")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must be in [0, 1]")


def _near_matrix(A: np.ndarray, B: np.ndarray, tol: float) -> np.ndarray:
    """Boolean (len(A), len(B)): rows equal within tol in every variable.

    Accumulated column by column to avoid a (m, k, d) temporary; bails out
    as soon as no pair is still close.
    """
    near = np.abs(A[:, 0, np.newaxis] - B[np.newaxis, :, 0]) <= tol
    for j in range(1, A.shape[1]):
        if not near.any():
            break
        np.logical_and(
            near, np.abs(A[:, j, np.newaxis] - B[np.newaxis, :, j]) <= tol, out=near
        )
    return near


def deduplicate_rows(X: np.ndarray, tol: float = GENOME_TOL) -> np.ndarray:
    """Indices of rows to keep so no two kept rows are equal within ``tol``
    in every variable; earlier rows win over later duplicates."""
    n = X.shape[0]
    if n <= 1:
        return np.arange(n)
    close = _near_matrix(X, X, tol)
    keep = np.zeros(n, dtype=bool)
    for i in range(n):
        if not (close[i] & keep).any():
            keep[i] = True
    return np.flatnonzero(keep)


def _append_unique(
    base: np.ndarray,
    base_F: np.ndarray,
    cand: np.ndarray,
    cand_F: np.ndarray,
    tol: float = GENOME_TOL,
) -> tuple[np.ndarray, np.ndarray]:
    """Extend a pairwise-unique pool with the candidates that stay unique.

    A candidate is dropped when it matches (within ``tol`` per variable) a
    base row or an earlier-kept candidate.
    """
    m = cand.shape[0]
    if m == 0:
        return base, base_F
    near_base = _near_matrix(cand, base, tol).any(axis=1)
    near_cand = _near_matrix(cand, cand, tol)
    keep = np.zeros(m, dtype=bool)
    for i in range(m):
        if not near_base[i] and not (near_cand[i] & keep).any():
            keep[i] = True
    return np.vstack([base, cand[keep]]), np.vstack([base_F, cand_F[keep]])


def _environmental_selection(
    F: np.ndarray, n_keep: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pick n_keep indices by (front, crowding); returns (picked, ranks, crowding)."""
    fronts = fast_nondominated_sort(F)
    picked: list[np.ndarray] = []
    picked_rank: list[np.ndarray] = []
    picked_crowd: list[np.ndarray] = []
    taken = 0
    for k, front in enumerate(fronts):
        crowd = crowding_distance(F[front])
        if taken + len(front) <= n_keep:
            picked.append(front)
            picked_rank.append(np.full(len(front), k, dtype=np.int64))
            picked_crowd.append(crowd)
            taken += len(front)
            if taken == n_keep:
                break
        else:
            need = n_keep - taken
            order = np.argsort(-crowd, kind="stable")[:need]
            picked.append(front[order])
            picked_rank.append(np.full(need, k, dtype=np.int64))
            picked_crowd.append(crowd[order])
            break
    return (
        np.concatenate(picked),
        np.concatenate(picked_rank),
        np.concatenate(picked_crowd),
    )


def nsga2_minimize(
    objective_batch: Callable[[np.ndarray], np.ndarray],
    lower: np.ndarray,
    upper: np.ndarray,
    cfg: NsgaConfig,
    on_generation: Optional[ProgressCallback] = None,
) -> dict:
    """Run the search on a generic batched objective; minimizes all columns.

    ``objective_batch`` maps an (m, d) matrix of candidates to an (m, k)
    matrix of objective values. Returns a dict with the final arrays, the
    trace and the evaluation count.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != upper.shape or np.any(lower > upper):
        raise ValueError("invalid bounds")
    d = lower.shape[0]
    n = cfg.population_size
    pm = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / d
    rng = np.random.default_rng(cfg.seed)

    X = lower + rng.random((n, d)) * (upper - lower)
    unique = deduplicate_rows(X)
    while len(unique) < n:  # vanishingly rare with continuous sampling
        refill = lower + rng.random((n - len(unique), d)) * (upper - lower)
        X = np.vstack([X[unique], refill])
        unique = deduplicate_rows(X)
    X = X[unique]
    F = np.asarray(objective_batch(X), dtype=float)
    evaluations = n
    ranks, crowd, _ = rank_and_crowding(F)

    trace: list[GenerationStat] = []
    n_pairs = (n + 1) // 2
    for gen in range(1, cfg.generations + 1):
        parents = tournament_select(ranks, crowd, 2 * n_pairs, rng)
        P1 = X[parents[0::2]]
        P2 = X[parents[1::2]]
        C1, C2 = sbx_crossover_batch(P1, P2, lower, upper, cfg.eta_c, cfg.crossover_prob, rng)
        children = np.empty((2 * n_pairs, d))
        children[0::2] = C1
        children[1::2] = C2
        children = children[:n]
        children = polynomial_mutation_batch(children, lower, upper, cfg.eta_m, pm, rng)
        FC = np.asarray(objective_batch(children), dtype=float)
        evaluations += n

        # Survivors are pairwise-unique by construction, so only the new
        # children need duplicate checks.
        pool, pool_F = _append_unique(X, F, children, FC)

        # Replace removed duplicates with mutants of survivors so the
        # population stays full-sized.
        attempts = 0
        while pool.shape[0] < n and attempts < _REFILL_ATTEMPTS:
            need = n - pool.shape[0]
            src = rng.integers(0, pool.shape[0], size=need)
            extra = polynomial_mutation_batch(pool[src], lower, upper, cfg.eta_m, pm, rng)
            extra_F = np.asarray(objective_batch(extra), dtype=float)
            evaluations += need
            pool, pool_F = _append_unique(pool, pool_F, extra, extra_F)
            attempts += 1
        if pool.shape[0] < n:
            need = n - pool.shape[0]
            extra = lower + rng.random((need, d)) * (upper - lower)
            extra_F = np.asarray(objective_batch(extra), dtype=float)
            evaluations += need
            pool = np.vstack([pool, extra])
            pool_F = np.vstack([pool_F, extra_F])

        sel, ranks, crowd = _environmental_selection(pool_F, n)
        X, F = pool[sel], pool_F[sel]

        best_e = float(F.sum(axis=1).min())
        front0 = int((ranks == 0).sum())
        trace.append(GenerationStat(gen, best_e, front0))
        if on_generation is not None:
            on_generation(gen, best_e, front0)

    final_ranks, final_crowd, _ = rank_and_crowding(F)
    return {
        "genomes": X,
        "objectives": F,
        "ranks": final_ranks,
        "crowding": final_crowd,
        "evaluations": evaluations,
        "trace": tuple(trace),
    }


def nsga2_run(
    target: TargetProfile,
    inventory: Inventory,
    config: BrewConfig,
    cfg: NsgaConfig,
    on_generation: Optional[ProgressCallback] = None,
) -> RunResult:
    """Search the inventory-bounded recipe space for a target profile."""
    evaluator = RecipeEvaluator(inventory, config)
    upper = inventory.bounds()
    lower = np.zeros_like(upper)
    raw = nsga2_minimize(
        lambda X: evaluator.objectives_matrix(X, target),
        lower,
        upper,
        cfg,
        on_generation=on_generation,
    )
    return RunResult(
        algorithm="nsga2",
        genomes=raw["genomes"],
        objectives=raw["objectives"],
        ranks=raw["ranks"],
        crowding=raw["crowding"],
        evaluations_used=raw["evaluations"],
        config=cfg,
        seed=cfg.seed,
        trace=raw["trace"],
    )
