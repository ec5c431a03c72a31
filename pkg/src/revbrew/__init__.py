"""Reverse-brewing workbench.

Searches a bounded ingredient space for recipes matching target beer
properties (NSGA-II over three objectives, DE/best/1 over the scalar
error) and analyzes the resulting solution sets.
"""

from revbrew.model import (
    BeerProperties,
    BrewConfig,
    FermentableAddition,
    HopAddition,
    Inventory,
    ObjectiveVector,
    RecipeEvaluator,
    TargetProfile,
    YeastPitch,
    compute_abv,
    compute_fg,
    compute_ibu_fermentables,
    compute_ibu_gu,
    compute_ibu_hops,
    compute_mcu,
    compute_og,
    compute_srm,
    evaluate_recipe,
    objectives,
    overall_error,
    validate_recipe,
)

__version__ = "0.1.0"

__all__ = [
    "BeerProperties",
    "BrewConfig",
    "FermentableAddition",
    "HopAddition",
    "Inventory",
    "ObjectiveVector",
    "RecipeEvaluator",
    "TargetProfile",
    "YeastPitch",
    "compute_abv",
    "compute_fg",
    "compute_ibu_fermentables",
    "compute_ibu_gu",
    "compute_ibu_hops",
    "compute_mcu",
    "compute_og",
    "compute_srm",
    "evaluate_recipe",
    "objectives",
    "overall_error",
    "validate_recipe",
    "__version__",
]
