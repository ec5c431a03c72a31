"""Post-run statistics: success counting, deviations, distances, aggregation.

Everything operates on immutable run results. Deviations use the population
standard deviation (divide by n) since they describe complete per-run
solution sets, not samples. A report with no successful solutions carries
NaN values and renders as "NA" in the delimited outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from revbrew.evolve.result import RunResult

DEFAULT_SUCCESS_THRESHOLD = 0.05


@dataclass(frozen=True, eq=False)
class RunSummary:
    """Counts and the successful solution set of one run.

    A successful solution is a front-0 individual whose overall error is at
    or below the threshold (inclusive).
    """

    nondominated_count: int
    successful_count: int
    successful_genomes: np.ndarray
    successful_objectives: np.ndarray

    def __post_init__(self):
        if self.successful_count > self.nondominated_count:
            raise ValueError("successful solutions must be non-dominated")

    def successful_errors(self) -> np.ndarray:
        return self.successful_objectives.sum(axis=1)


@dataclass(frozen=True, eq=False)
class DeviationReport:
    """Per-objective and per-dimension spread of one run's successful set."""

    per_objective_stdev: np.ndarray
    per_dimension_stdev: np.ndarray

    @property
    def is_na(self) -> bool:
        return bool(np.all(np.isnan(self.per_objective_stdev)))


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric pairwise Euclidean distances between solution vectors."""

    labels: tuple[str, ...]
    values: np.ndarray

    @property
    def max_off_diagonal(self) -> float:
        if self.values.shape[0] < 2:
            return 0.0
        mask = ~np.eye(self.values.shape[0], dtype=bool)
        return float(self.values[mask].max())


def summarize_run(result: RunResult, threshold: float = DEFAULT_SUCCESS_THRESHOLD) -> RunSummary:
    """Count front-0 individuals and the successful subset among them."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    front0 = result.ranks == 0
    errors = result.errors()
    successful = front0 & (errors <= threshold)
    return RunSummary(
        nondominated_count=int(front0.sum()),
        successful_count=int(successful.sum()),
        successful_genomes=result.genomes[successful].copy(),
        successful_objectives=result.objectives[successful].copy(),
    )


def deviation_report(summary: RunSummary) -> DeviationReport:
    """Spread of one run's successful solutions; NA when the set is empty."""
    n_dims = summary.successful_genomes.shape[1] if summary.successful_genomes.ndim == 2 else 0
    n_objs = summary.successful_objectives.shape[1] if summary.successful_objectives.ndim == 2 else 0
    if summary.successful_count == 0:
        return DeviationReport(
            per_objective_stdev=np.full(max(n_objs, 1), np.nan),
            per_dimension_stdev=np.full(max(n_dims, 1), np.nan),
        )
    return DeviationReport(
        per_objective_stdev=summary.successful_objectives.std(axis=0),
        per_dimension_stdev=summary.successful_genomes.std(axis=0),
    )


def distance_matrix(
    solutions,
    labels: Optional[Sequence[str]] = None,
    bounds: Optional[np.ndarray] = None,
) -> DistanceMatrix:
    """Pairwise Euclidean distances between raw genomes.

    With ``bounds`` given, each coordinate is first divided by its stock
    bound (the --normalize-genome switch).
    """
    X = np.asarray(solutions, dtype=float)
    if X.ndim != 2:
        raise ValueError("solutions must form a matrix")
    if bounds is not None:
        bounds = np.asarray(bounds, dtype=float)
        if bounds.shape[0] != X.shape[1]:
            raise ValueError("bounds do not match solution dimension")
        safe = np.where(bounds > 0, bounds, 1.0)
        X = X / safe
    if labels is None:
        labels = tuple(f"s{i + 1}" for i in range(X.shape[0]))
    else:
        labels = tuple(labels)
        if len(labels) != X.shape[0]:
            raise ValueError("label count does not match solution count")
    diff = X[:, np.newaxis, :] - X[np.newaxis, :, :]
    values = np.sqrt((diff ** 2).sum(axis=-1))
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(labels=labels, values=values)


@dataclass(frozen=True)
class AggregateStats:
    """Cross-run medians and spreads of the per-run counts."""

    runs: int
    nondominated_median: float
    nondominated_stdev: float
    successful_median: float
    successful_stdev: float


def aggregate_runs(summaries: Sequence[RunSummary]) -> AggregateStats:
    """Medians and population stdevs of the per-run counts."""
    if not summaries:
        raise ValueError("at least one run summary is required")
    nondom = np.array([s.nondominated_count for s in summaries], dtype=float)
    succ = np.array([s.successful_count for s in summaries], dtype=float)
    return AggregateStats(
        runs=len(summaries),
        nondominated_median=float(np.median(nondom)),
        nondominated_stdev=float(nondom.std()),
        successful_median=float(np.median(succ)),
        successful_stdev=float(succ.std()),
    )


def mean_deviation(reports: Sequence[DeviationReport]) -> DeviationReport:
    """Average per-run deviations over runs that had successful solutions.

    All-NA input yields an NA report.
    """
    if not reports:
        raise ValueError("at least one deviation report is required")
    live = [r for r in reports if not r.is_na]
    if not live:
        return DeviationReport(
            per_objective_stdev=np.full_like(reports[0].per_objective_stdev, np.nan),
            per_dimension_stdev=np.full_like(reports[0].per_dimension_stdev, np.nan),
        )
    return DeviationReport(
        per_objective_stdev=np.mean([r.per_objective_stdev for r in live], axis=0),
        per_dimension_stdev=np.mean([r.per_dimension_stdev for r in live], axis=0),
    )


def failure_diagnostics(results: Sequence[RunResult]) -> np.ndarray:
    """Mean objective distances over all front-0 individuals of all runs.

    Large components point at the objective blocking success.
    """
    if not results:
        raise ValueError("at least one run result is required")
    rows = [r.objectives[r.ranks == 0] for r in results]
    return np.vstack(rows).mean(axis=0)


def sample_solution(summary: RunSummary) -> Optional[np.ndarray]:
    """The successful solution with minimal error; ties go to the lowest index."""
    if summary.successful_count == 0:
        return None
    errors = summary.successful_errors()
    return summary.successful_genomes[int(np.argmin(errors))].copy()


def solution_heatmap(summaries: Sequence[RunSummary]) -> np.ndarray:
    """Stack all successful genomes: one row per solution, one column per
    ingredient, values are the raw uptakes."""
    rows = [s.successful_genomes for s in summaries if s.successful_count > 0]
    if not rows:
        return np.empty((0, 0))
    return np.vstack(rows)
