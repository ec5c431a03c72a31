import numpy as np
import pytest

from revbrew.model import RecipeEvaluator, TargetProfile
from revbrew.workbench.workspace import default_workspace


@pytest.fixture(scope="session")
def ws():
    return default_workspace()


@pytest.fixture(scope="session")
def evaluator(ws):
    return RecipeEvaluator(ws.inventory, ws.brew)


def synth_target(evaluator, recipe, name="synthetic") -> TargetProfile:
    """Forward-evaluate a recipe into an exactly-achievable target."""
    p = evaluator.properties_matrix(np.asarray(recipe, dtype=float))
    return TargetProfile(
        name,
        og=float(p["og"][0]),
        fg=float(p["fg"][0]),
        abv=float(p["abv"][0]),
        ibu=float(p["ibu"][0]),
        srm=float(p["srm"][0]),
    )
