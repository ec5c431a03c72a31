"""Real-coded variation operators: bounded SBX, polynomial mutation, tournaments.

The batch forms operate on whole parent matrices so a generation is a handful
of array operations; the single-vector forms wrap them. All randomness comes
from the caller's generator, drawn in a fixed order.
"""

from __future__ import annotations

import numpy as np

# Parents closer than this per variable are treated as identical by SBX.
_SBX_EPS = 1e-14


def sbx_crossover_batch(
    P1: np.ndarray,
    P2: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    eta_c: float,
    crossover_prob: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover on paired parent matrices (m, d).

    Each pair crosses with probability ``crossover_prob``; within a crossing
    pair each variable participates with probability 1/2. The bounded spread
    keeps children inside [lower, upper].
    """
    P1 = np.asarray(P1, dtype=float)
    P2 = np.asarray(P2, dtype=float)
    m, d = P1.shape
    exponent = 1.0 / (eta_c + 1.0)

    pair_on = rng.random(m) < crossover_prob
    var_on = rng.random((m, d)) <= 0.5
    u = rng.random((m, d))

    x1 = np.minimum(P1, P2)
    x2 = np.maximum(P1, P2)
    spread = x2 - x1
    active = pair_on[:, np.newaxis] & var_on & (spread > _SBX_EPS)
    safe_spread = np.where(spread > _SBX_EPS, spread, 1.0)

    def _betaq(beta: np.ndarray) -> np.ndarray:
        alpha = 2.0 - beta ** -(eta_c + 1.0)
        return np.where(
            u <= 1.0 / alpha,
            (u * alpha) ** exponent,
            (1.0 / (2.0 - u * alpha)) ** exponent,
        )

    bq1 = _betaq(1.0 + 2.0 * (x1 - lower) / safe_spread)
    bq2 = _betaq(1.0 + 2.0 * (upper - x2) / safe_spread)
    c1 = np.clip(0.5 * ((x1 + x2) - bq1 * spread), lower, upper)
    c2 = np.clip(0.5 * ((x1 + x2) + bq2 * spread), lower, upper)

    return np.where(active, c1, P1), np.where(active, c2, P2)


def polynomial_mutation_batch(
    X: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    eta_m: float,
    mutation_prob: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Bounded polynomial mutation of each variable with probability pm."""
    X = np.asarray(X, dtype=float)
    span = upper - lower
    positive = span > 0
    safe_span = np.where(positive, span, 1.0)

    mutate = (rng.random(X.shape) < mutation_prob) & positive
    u = rng.random(X.shape)

    exponent = 1.0 / (eta_m + 1.0)
    d1 = (X - lower) / safe_span
    d2 = (upper - X) / safe_span
    left = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta_m + 1.0)) ** exponent - 1.0
    right = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta_m + 1.0)) ** exponent
    deltaq = np.where(u < 0.5, left, right)

    mutated = np.clip(X + deltaq * safe_span, lower, upper)
    return np.where(mutate, mutated, X)


def sbx_crossover(p1, p2, lower, upper, eta_c, crossover_prob, rng):
    """SBX of one parent pair; see the batch form."""
    c1, c2 = sbx_crossover_batch(
        np.asarray(p1, dtype=float)[np.newaxis, :],
        np.asarray(p2, dtype=float)[np.newaxis, :],
        np.asarray(lower, dtype=float),
        np.asarray(upper, dtype=float),
        eta_c,
        crossover_prob,
        rng,
    )
    return c1[0], c2[0]


def polynomial_mutation(x, lower, upper, eta_m, mutation_prob, rng):
    """Polynomial mutation of one vector; see the batch form."""
    return polynomial_mutation_batch(
        np.asarray(x, dtype=float)[np.newaxis, :],
        np.asarray(lower, dtype=float),
        np.asarray(upper, dtype=float),
        eta_m,
        mutation_prob,
        rng,
    )[0]


def tournament_select(
    ranks: np.ndarray,
    crowding: np.ndarray,
    n_picks: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Crowded binary tournament: lower rank wins, then larger crowding.

    Full ties resolve by coin flip. Returns ``n_picks`` winner indices.
    """
    n = len(ranks)
    i = rng.integers(0, n, size=n_picks)
    j = rng.integers(0, n, size=n_picks)
    coin = rng.random(n_picks) < 0.5
    i_wins = (ranks[i] < ranks[j]) | ((ranks[i] == ranks[j]) & (crowding[i] > crowding[j]))
    tie = (ranks[i] == ranks[j]) & (crowding[i] == crowding[j])
    return np.where(i_wins | (tie & coin), i, j)
