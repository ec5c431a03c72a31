"""Run outcome records shared by both engines."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from revbrew.model import ObjectiveVector


@dataclass(frozen=True)
class GenerationStat:
    """One line of the per-generation trace."""

    generation: int
    best_error: float
    front_zero_size: int


@dataclass(frozen=True, eq=False)
class Individual:
    """One member of a final population."""

    genome: np.ndarray
    objectives: ObjectiveVector
    rank: int
    crowding: float

    @property
    def error(self) -> float:
        return self.objectives.f1 + self.objectives.f2 + self.objectives.f3


@dataclass(eq=False)
class RunResult:
    """Final population plus everything needed to reproduce the run.

    Population data is stored as aligned arrays: ``genomes`` (n, d),
    ``objectives`` (n, k), ``ranks`` and ``crowding`` (n,). ``config`` is the
    engine config carrying the seed; rerunning with it reproduces this result
    bit-for-bit.
    """

    algorithm: str
    genomes: np.ndarray
    objectives: np.ndarray
    ranks: np.ndarray
    crowding: np.ndarray
    evaluations_used: int
    config: Any
    seed: int
    trace: tuple[GenerationStat, ...]

    def __post_init__(self):
        if self.genomes.shape[0] == 0:
            raise ValueError("final population must be non-empty")

    @property
    def population_size(self) -> int:
        return self.genomes.shape[0]

    def errors(self) -> np.ndarray:
        """Overall error e per individual (sum of objective components)."""
        return self.objectives.sum(axis=1)

    @property
    def final_population(self) -> list[Individual]:
        return [
            Individual(
                genome=self.genomes[i].copy(),
                objectives=ObjectiveVector(*(float(v) for v in self.objectives[i])),
                rank=int(self.ranks[i]),
                crowding=float(self.crowding[i]),
            )
            for i in range(self.population_size)
        ]

    def population_dict(self) -> dict:
        """JSON-ready population block (inf crowding encoded as null)."""
        return {
            "genomes": self.genomes.tolist(),
            "objectives": self.objectives.tolist(),
            "rank": self.ranks.tolist(),
            "crowding": [None if np.isinf(c) else float(c) for c in self.crowding],
        }

    def trace_list(self) -> list[list]:
        return [[s.generation, s.best_error, s.front_zero_size] for s in self.trace]


def population_from_dict(block: dict) -> dict[str, np.ndarray]:
    """Inverse of :meth:`RunResult.population_dict`."""
    crowding = np.array(
        [np.inf if c is None else float(c) for c in block["crowding"]], dtype=float
    )
    return {
        "genomes": np.asarray(block["genomes"], dtype=float),
        "objectives": np.asarray(block["objectives"], dtype=float),
        "ranks": np.asarray(block["rank"], dtype=np.int64),
        "crowding": crowding,
    }


def trace_from_list(rows: list) -> tuple[GenerationStat, ...]:
    return tuple(GenerationStat(int(g), float(e), int(f)) for g, e, f in rows)
