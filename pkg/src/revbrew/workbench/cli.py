"""Command-line surface for the workbench.

Exit codes: 0 success, 1 usage error, 2 data error (bad workspace/recipe/
selection), 3 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from revbrew import analysis
from revbrew.model import evaluate_recipe, objectives, overall_error
from revbrew.workbench import experiments
from revbrew.workbench.workspace import (
    WorkspaceError,
    default_workspace,
    parse_recipe,
    parse_workspace,
    serialize_workspace,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_workspace(path):
    if path is None:
        return default_workspace()
    return parse_workspace(path)


def _cmd_evaluate(args) -> int:
    ws = _load_workspace(args.workspace)
    recipe = parse_recipe(args.recipe, ws.inventory)
    props = evaluate_recipe(recipe, ws.inventory, ws.brew)
    print(f"OG      {props.og:.4f}")
    print(f"FG      {props.fg:.4f}")
    print(f"ABV     {props.abv:.2f} %")
    print(f"IBU     {props.ibu:.2f}")
    ratio = "undefined" if np.isnan(props.ibu_gu) else f"{props.ibu_gu:.3f}"
    print(f"IBU/GU  {ratio}")
    print(f"MCU     {props.mcu:.2f}")
    print(f"SRM     {props.srm:.2f}")
    print(f"EBC     {props.ebc:.2f}")
    if args.target is not None:
        target = ws.target(args.target)
        obj = objectives(props, target)
        print(f"target  {target.name}")
        print(f"f1      {obj.f1:.6g}")
        print(f"f2      {obj.f2:.6g}")
        print(f"f3      {obj.f3:.6g}")
        print(f"e       {overall_error(obj):.6g}")
    return EXIT_OK


def _cmd_optimize(args) -> int:
    ws = _load_workspace(args.workspace)
    nsga_overrides, de_overrides = {}, {}
    if args.generations is not None:
        nsga_overrides["generations"] = args.generations
    if args.pop is not None:
        nsga_overrides["population_size"] = args.pop
        de_overrides["population_size"] = args.pop
    result, target = experiments.run_single(
        ws, args.product, args.algo, args.seed,
        nsga_overrides=nsga_overrides, de_overrides=de_overrides,
    )
    summary = analysis.summarize_run(result, args.threshold)
    index = ws.targets.index(target) + 1
    out = Path(args.out) if args.out else Path(
        experiments.result_filename(index, target.name, args.algo, args.seed))
    doc = experiments.result_to_doc(result, target, ws.inventory, ws.brew, args.threshold)
    experiments.save_result(doc, out)
    print(f"product      {target.name}")
    print(f"algorithm    {result.algorithm}")
    print(f"seed         {result.seed}")
    print(f"evaluations  {result.evaluations_used}")
    print(f"nondominated {summary.nondominated_count}")
    print(f"successful   {summary.successful_count}")
    print(f"best e       {result.errors().min():.6g}")
    print(f"result file  {out}")
    return EXIT_OK


def _cmd_batch(args) -> int:
    ws = _load_workspace(args.workspace)
    products = tuple(p.strip() for p in args.products.split(",")) \
        if args.products != "all" else ("all",)
    plan = experiments.ExperimentPlan(
        products=products,
        algorithm=args.algo,
        runs=args.runs,
        base_seed=args.seed,
        success_threshold=args.threshold,
        output_dir=Path(args.out),
        workers=args.workers,
    )
    outcome = experiments.run_experiment(plan, ws)
    print(f"runs written  {len(outcome['files']) - len(outcome['failures'])}")
    print(f"failures      {len(outcome['failures'])}")
    for report in outcome["reports"]:
        print(f"report        {report}")
    return EXIT_OK if not outcome["failures"] else EXIT_RUNTIME


def _cmd_analyze(args) -> int:
    reports = experiments.write_reports(Path(args.results),
                                        normalize_genome=args.normalize_genome)
    if not reports:
        print("no result files found", file=sys.stderr)
        return EXIT_DATA
    for report in reports:
        print(report)
    return EXIT_OK


def _cmd_serve(args) -> int:
    ws = _load_workspace(args.workspace)
    from revbrew.service import serve

    serve(ws, host=args.host, port=args.port, result_dir=args.results)
    return EXIT_OK


def _cmd_init(args) -> int:
    dest = Path(args.dest)
    if dest.exists() and any(dest.iterdir()):
        print(f"refusing to write into non-empty directory {dest}", file=sys.stderr)
        return EXIT_DATA
    serialize_workspace(default_workspace(), dest)
    print(f"workspace written to {dest}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="revbrew", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def ws_arg(p):
        p.add_argument("--workspace", help="workspace directory (default: bundled data)")

    p = sub.add_parser("evaluate", help="compute properties of a recipe file")
    ws_arg(p)
    p.add_argument("--recipe", required=True)
    p.add_argument("--target", help="product name or 1-based index to compare against")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("optimize", help="single optimization run")
    ws_arg(p)
    p.add_argument("--product", required=True, help="product name or 1-based index")
    p.add_argument("--algo", choices=["nsga2", "de"], default="nsga2")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--generations", type=int)
    p.add_argument("--pop", type=int)
    p.add_argument("--threshold", type=float, default=analysis.DEFAULT_SUCCESS_THRESHOLD)
    p.add_argument("--out", help="result file path")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("batch", help="full experiment grid")
    ws_arg(p)
    p.add_argument("--products", default="all",
                   help="'all' or comma-separated names/indices")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--seed", type=int, default=1, help="base seed; run i uses seed+i")
    p.add_argument("--algo", choices=["nsga2", "de", "both"], default="nsga2")
    p.add_argument("--threshold", type=float, default=analysis.DEFAULT_SUCCESS_THRESHOLD)
    p.add_argument("--out", default="results")
    p.add_argument("--workers", type=int, help="pool size (REVBREW_THREADS caps it)")
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser("analyze", help="aggregate reports from result files")
    p.add_argument("--results", required=True)
    p.add_argument("--normalize-genome", action="store_true",
                   help="divide genome coordinates by stock bounds in distances")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("serve", help="start the job service")
    ws_arg(p)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--results", default="service-results",
                   help="directory for completed job result files")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("init", help="copy the bundled workspace for editing")
    p.add_argument("--dest", required=True)
    p.set_defaults(func=_cmd_init)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WorkspaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - surfaced as runtime failure
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
