"""File formats, experiment orchestration and the command-line surface."""

from revbrew.workbench.workspace import (
    Workspace,
    WorkspaceError,
    default_workspace,
    parse_recipe,
    parse_workspace,
    serialize_workspace,
)
from revbrew.workbench.experiments import (
    ExperimentPlan,
    load_result,
    run_experiment,
    run_single,
    save_result,
)

__all__ = [
    "ExperimentPlan",
    "Workspace",
    "WorkspaceError",
    "default_workspace",
    "load_result",
    "parse_recipe",
    "parse_workspace",
    "run_experiment",
    "run_single",
    "save_result",
    "serialize_workspace",
]
