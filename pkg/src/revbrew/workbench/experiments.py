"""Experiment grids: run, persist and aggregate optimization runs.

One run produces one JSON result file that self-describes: it embeds the
inventory, target, equipment and optimizer config plus the seed, so the run
can be reproduced exactly from the file alone. Result files contain no
timestamps; re-running an identical plan rewrites byte-identical files.
Aggregate reports are delimited text laid out like the summary tables
(counts, objective deviation, per-ingredient uptake deviation).
"""

from __future__ import annotations

import csv
import json
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from revbrew import analysis
from revbrew.evolve.de import DeConfig, de_best1_run
from revbrew.evolve.nsga2 import NsgaConfig, nsga2_run
from revbrew.evolve.result import RunResult, population_from_dict, trace_from_list
from revbrew.model import BrewConfig, Inventory, TargetProfile
from revbrew.workbench.workspace import (
    Workspace,
    WorkspaceError,
    inventory_from_doc,
    inventory_to_doc,
)

RESULT_SCHEMA = "revbrew-result-v1"

THREAD_CAP_ENV = "REVBREW_THREADS"


@dataclass(frozen=True)
class ExperimentPlan:
    """A product x algorithm x seed grid plus output location."""

    products: tuple = ("all",)
    algorithm: str = "nsga2"
    runs: int = 30
    base_seed: int = 1
    success_threshold: float = analysis.DEFAULT_SUCCESS_THRESHOLD
    output_dir: Path = Path("results")
    workers: Optional[int] = None
    nsga_overrides: dict = field(default_factory=dict)
    de_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.algorithm not in ("nsga2", "de", "both"):
            raise ValueError("algorithm must be nsga2, de or both")
        if self.success_threshold < 0:
            raise ValueError("success_threshold must be >= 0")

    def algorithms(self) -> tuple[str, ...]:
        return ("nsga2", "de") if self.algorithm == "both" else (self.algorithm,)

    def seeds(self) -> tuple[int, ...]:
        return tuple(self.base_seed + i for i in range(self.runs))


def worker_count(requested: Optional[int]) -> int:
    """Pool size: requested (or cpu count), capped by REVBREW_THREADS."""
    count = requested if requested and requested > 0 else (os.cpu_count() or 1)
    cap = os.environ.get(THREAD_CAP_ENV)
    if cap:
        try:
            count = min(count, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"{THREAD_CAP_ENV} must be an integer, got {cap!r}")
    return max(1, count)


def run_single(
    ws: Workspace,
    product,
    algorithm: str,
    seed: int,
    nsga_overrides: Optional[dict] = None,
    de_overrides: Optional[dict] = None,
    inventory: Optional[Inventory] = None,
    on_generation=None,
) -> tuple[RunResult, TargetProfile]:
    """One optimization run against a workspace product."""
    target = ws.target(product)
    inv = inventory if inventory is not None else ws.inventory
    if algorithm == "nsga2":
        cfg = ws.nsga_config(seed, **(nsga_overrides or {}))
        result = nsga2_run(target, inv, ws.brew, cfg, on_generation=on_generation)
    elif algorithm == "de":
        cfg = ws.de_config(seed, **(de_overrides or {}))
        result = de_best1_run(target, inv, ws.brew, cfg, on_generation=on_generation)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return result, target


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")


def result_filename(product_index: int, product: str, algorithm: str, seed: int) -> str:
    return f"p{product_index:02d}-{_slug(product)}__{algorithm}__seed{seed}.json"


def result_to_doc(
    result: RunResult,
    target: TargetProfile,
    inventory: Inventory,
    brew: BrewConfig,
    success_threshold: float,
) -> dict:
    cfg = result.config
    return {
        "schema": RESULT_SCHEMA,
        "algorithm": result.algorithm,
        "seed": result.seed,
        "success_threshold": success_threshold,
        "product": {
            "name": target.name, "og": target.og, "fg": target.fg,
            "abv": target.abv, "ibu": target.ibu, "srm": target.srm,
        },
        "brew": {
            "efficiency": brew.efficiency, "batch_size_l": brew.batch_size,
            "boil_size_l": brew.boil_size, "boil_time_min": brew.boil_time,
        },
        "inventory": inventory_to_doc(inventory),
        "optimizer": {k: v for k, v in cfg.__dict__.items()},
        "evaluations_used": result.evaluations_used,
        "trace": result.trace_list(),
        "population": result.population_dict(),
    }


def save_result(doc: dict, path: Path) -> None:
    """Atomic, deterministic JSON write (no timestamps, sorted keys)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(doc, sort_keys=True, indent=1), encoding="utf-8")
    os.replace(tmp, path)


@dataclass(eq=False)
class StoredRun:
    """A result file loaded back into memory."""

    result: RunResult
    product: TargetProfile
    brew: BrewConfig
    inventory: Inventory
    success_threshold: float
    path: Optional[Path] = None


def load_result(path: Path) -> StoredRun:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"{path.name}: not valid JSON: {exc}") from exc
    if doc.get("schema") != RESULT_SCHEMA:
        raise WorkspaceError(f"{path.name}: unknown result schema {doc.get('schema')!r}")
    pop = population_from_dict(doc["population"])
    algorithm = doc["algorithm"]
    cfg_cls = NsgaConfig if algorithm == "nsga2" else DeConfig
    config = cfg_cls(**doc["optimizer"])
    result = RunResult(
        algorithm=algorithm,
        genomes=pop["genomes"],
        objectives=pop["objectives"],
        ranks=pop["ranks"],
        crowding=pop["crowding"],
        evaluations_used=int(doc["evaluations_used"]),
        config=config,
        seed=int(doc["seed"]),
        trace=trace_from_list(doc["trace"]),
    )
    p = doc["product"]
    target = TargetProfile(p["name"], p["og"], p["fg"], p["abv"], p["ibu"], p["srm"])
    b = doc["brew"]
    brew = BrewConfig(b["efficiency"], b["batch_size_l"], b["boil_size_l"],
                      b["boil_time_min"])
    inventory = inventory_from_doc(doc["inventory"])
    return StoredRun(result=result, product=target, brew=brew, inventory=inventory,
                     success_threshold=float(doc["success_threshold"]), path=path)


def _execute_one(args) -> tuple[str, Optional[str]]:
    """Pool worker: run one grid cell, write its file; returns (file, error)."""
    ws, product_index, algorithm, seed, plan_dict = args
    plan = ExperimentPlan(**plan_dict)
    name = ws.targets[product_index - 1].name
    filename = result_filename(product_index, name, algorithm, seed)
    try:
        result, target = run_single(
            ws, product_index, algorithm, seed,
            nsga_overrides=plan.nsga_overrides, de_overrides=plan.de_overrides,
        )
        doc = result_to_doc(result, target, ws.inventory, ws.brew,
                            plan.success_threshold)
        save_result(doc, Path(plan.output_dir) / filename)
        return filename, None
    except Exception as exc:  # recorded, not fatal to sibling runs
        return filename, f"{type(exc).__name__}: {exc}"


def resolve_products(ws: Workspace, selectors: Sequence) -> list[int]:
    """Expand product selectors to 1-based indices, preserving order."""
    if len(selectors) == 1 and selectors[0] == "all":
        return list(range(1, len(ws.targets) + 1))
    indices = []
    for sel in selectors:
        target = ws.target(sel)
        indices.append(ws.targets.index(target) + 1)
    return indices


def run_experiment(plan: ExperimentPlan, ws: Workspace) -> dict:
    """Execute the grid in a process pool, then write aggregate reports.

    Returns {"files": [...], "failures": {file: message}, "reports": [...]}.
    """
    out_dir = Path(plan.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    indices = resolve_products(ws, plan.products)
    plan_dict = {
        "products": plan.products, "algorithm": plan.algorithm, "runs": plan.runs,
        "base_seed": plan.base_seed, "success_threshold": plan.success_threshold,
        "output_dir": plan.output_dir, "workers": plan.workers,
        "nsga_overrides": plan.nsga_overrides, "de_overrides": plan.de_overrides,
    }
    cells = [
        (ws, idx, algo, seed, plan_dict)
        for idx in indices
        for algo in plan.algorithms()
        for seed in plan.seeds()
    ]

    files: list[str] = []
    failures: dict[str, str] = {}
    n_workers = worker_count(plan.workers)
    if n_workers == 1 or len(cells) == 1:
        outcomes = map(_execute_one, cells)
    else:
        pool = ProcessPoolExecutor(max_workers=n_workers)
        try:
            outcomes = list(pool.map(_execute_one, cells))
        finally:
            pool.shutdown()
    for filename, error in outcomes:
        files.append(filename)
        if error is not None:
            failures[filename] = error
    if failures:
        lines = [f"{name}\t{msg}" for name, msg in sorted(failures.items())]
        (out_dir / "failures.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    reports = write_reports(out_dir)
    return {"files": files, "failures": failures, "reports": reports}


def _fmt(value: float) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "NA"
    return f"{value:.6g}"


def group_results(result_dir: Path) -> dict[tuple[str, str], list[StoredRun]]:
    """Load every result file, grouped by (product, algorithm), seed-ordered."""
    result_dir = Path(result_dir)
    groups: dict[tuple[str, str], list[StoredRun]] = {}
    for path in sorted(result_dir.glob("*.json")):
        stored = load_result(path)
        key = (stored.product.name, stored.result.algorithm)
        groups.setdefault(key, []).append(stored)
    for runs in groups.values():
        runs.sort(key=lambda s: s.result.seed)
    return groups


def write_reports(result_dir: Path, normalize_genome: bool = False) -> list[Path]:
    """Aggregate reports over all result files in a directory.

    Per algorithm: a success summary (counts), the mean per-run objective
    deviation and the mean per-run uptake deviation. Plus per-group distance
    matrices and heatmap data for the diversity views.
    """
    result_dir = Path(result_dir)
    groups = group_results(result_dir)
    if not groups:
        return []
    written: list[Path] = []
    algorithms = sorted({algo for _, algo in groups})
    for algo in algorithms:
        rows_counts, rows_obj, rows_dim = [], [], []
        for (product, a), runs in groups.items():
            if a != algo:
                continue
            summaries = [analysis.summarize_run(s.result, s.success_threshold)
                         for s in runs]
            stats = analysis.aggregate_runs(summaries)
            rows_counts.append([product, _fmt(stats.nondominated_median),
                                _fmt(stats.nondominated_stdev),
                                _fmt(stats.successful_median),
                                _fmt(stats.successful_stdev)])
            deviation = analysis.mean_deviation(
                [analysis.deviation_report(s) for s in summaries])
            rows_obj.append([product] + [_fmt(v) for v in deviation.per_objective_stdev])
            rows_dim.append([product] + [_fmt(v) for v in deviation.per_dimension_stdev])

        n_dims = len(rows_dim[0]) - 1 if rows_dim else 0
        written.append(_write_csv(
            result_dir / f"{algo}_success_summary.csv",
            ["product", "nondominated_median", "nondominated_stdev",
             "successful_median", "successful_stdev"],
            rows_counts))
        written.append(_write_csv(
            result_dir / f"{algo}_objective_deviation.csv",
            ["product", "f1", "f2", "f3"], rows_obj))
        written.append(_write_csv(
            result_dir / f"{algo}_uptake_deviation.csv",
            ["product"] + [f"x{i + 1}" for i in range(n_dims)], rows_dim))

    for (product, algo), runs in groups.items():
        written.extend(
            _write_diversity_views(result_dir, product, algo, runs, normalize_genome)
        )
    return written


def _write_diversity_views(
    result_dir: Path, product: str, algo: str, runs: list[StoredRun],
    normalize_genome: bool,
) -> list[Path]:
    written = []
    summaries = [analysis.summarize_run(s.result, s.success_threshold) for s in runs]
    slug = _slug(product)
    bounds = runs[0].inventory.bounds() if normalize_genome else None

    # Single-run view: the run with the most successful solutions.
    best_i = int(np.argmax([s.successful_count for s in summaries]))
    single = summaries[best_i]
    if single.successful_count > 0:
        labels = [f"seed{runs[best_i].result.seed}-{j + 1}"
                  for j in range(single.successful_count)]
        dm = analysis.distance_matrix(single.successful_genomes, labels, bounds)
        written.append(_write_matrix(
            result_dir / f"{slug}__{algo}__single_run_distance.tsv", dm))
        written.append(_write_heatmap(
            result_dir / f"{slug}__{algo}__single_run_heatmap.tsv",
            single.successful_genomes, labels, runs[0].inventory.names))

    # Multi-run view: one sampled solution (minimal error) per successful run.
    samples, labels = [], []
    for stored, summary in zip(runs, summaries):
        sample = analysis.sample_solution(summary)
        if sample is not None:
            samples.append(sample)
            labels.append(f"seed{stored.result.seed}")
    if len(samples) >= 1:
        dm = analysis.distance_matrix(np.vstack(samples), labels, bounds)
        written.append(_write_matrix(
            result_dir / f"{slug}__{algo}__multi_run_distance.tsv", dm))
        written.append(_write_heatmap(
            result_dir / f"{slug}__{algo}__multi_run_heatmap.tsv",
            np.vstack(samples), labels, runs[0].inventory.names))
    return written


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _write_matrix(path: Path, dm: analysis.DistanceMatrix) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["", *dm.labels])
        for label, row in zip(dm.labels, dm.values):
            writer.writerow([label] + [f"{v:.6g}" for v in row])
    return path


def _write_heatmap(path: Path, genomes: np.ndarray, row_labels, col_labels) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["solution", *col_labels])
        for label, row in zip(row_labels, genomes):
            writer.writerow([label] + [f"{v:.6g}" for v in row])
    return path
