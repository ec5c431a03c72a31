"""Dominance sorting and crowding for minimization problems."""

from __future__ import annotations

import numpy as np


def dominates(a, b) -> bool:
    """True iff a <= b componentwise and a < b somewhere (minimization)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"objective vectors differ in shape: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def domination_matrix(F: np.ndarray) -> np.ndarray:
    """Boolean matrix D with D[i, j] = row i dominates row j."""
    le = np.all(F[:, np.newaxis, :] <= F[np.newaxis, :, :], axis=-1)
    lt = np.any(F[:, np.newaxis, :] < F[np.newaxis, :, :], axis=-1)
    return le & lt


def nondominated_mask(F) -> np.ndarray:
    """Boolean mask of rows not dominated by any other row."""
    F = np.asarray(F, dtype=float)
    return domination_matrix(F).sum(axis=0) == 0


def fast_nondominated_sort(F) -> list[np.ndarray]:
    """Partition rows of F into fronts of increasing domination depth.

    Front k holds exactly the rows dominated only by members of fronts < k;
    indices within a front come back in ascending order.
    """
    F = np.asarray(F, dtype=float)
    if F.ndim != 2 or F.shape[0] == 0:
        raise ValueError("population of objective vectors must be a non-empty matrix")
    D = domination_matrix(F)
    counts = D.sum(axis=0).astype(np.int64)
    assigned = np.zeros(F.shape[0], dtype=bool)
    fronts: list[np.ndarray] = []
    while not assigned.all():
        current = np.flatnonzero((counts == 0) & ~assigned)
        fronts.append(current)
        assigned[current] = True
        counts[current] = -1
        counts -= D[current].sum(axis=0)
    return fronts


def ranks_from_fronts(fronts: list[np.ndarray], n: int) -> np.ndarray:
    ranks = np.empty(n, dtype=np.int64)
    for k, idx in enumerate(fronts):
        ranks[idx] = k
    return ranks


def crowding_distance(F) -> np.ndarray:
    """Crowding of each member of one front.

    Boundary members per objective get +inf; interior members accumulate
    the normalized gap between their sorted neighbors. An objective with
    zero range across the front contributes nothing.
    """
    F = np.asarray(F, dtype=float)
    if F.ndim != 2 or F.shape[0] == 0:
        raise ValueError("front must be a non-empty matrix")
    n = F.shape[0]
    if n <= 2:
        return np.full(n, np.inf)
    d = np.zeros(n)
    for j in range(F.shape[1]):
        order = np.argsort(F[:, j], kind="stable")
        fj = F[order, j]
        d[order[0]] = np.inf
        d[order[-1]] = np.inf
        span = fj[-1] - fj[0]
        if span <= 0:
            continue
        d[order[1:-1]] += (fj[2:] - fj[:-2]) / span
    return d


def rank_and_crowding(F) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    """Ranks, crowding values and the front partition of a whole population."""
    F = np.asarray(F, dtype=float)
    fronts = fast_nondominated_sort(F)
    ranks = ranks_from_fronts(fronts, F.shape[0])
    crowd = np.empty(F.shape[0])
    for idx in fronts:
        crowd[idx] = crowding_distance(F[idx])
    return ranks, crowd, fronts
