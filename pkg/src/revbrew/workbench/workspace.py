"""Workspace files: inventory, product targets and equipment/optimizer config.

A workspace is a directory of three TOML files (``inventory.toml``,
``targets.toml``, ``config.toml``). Parsing is strict: unknown fields and
invariant violations fail with errors naming the file, entry and field.
The package ships a default workspace with the reference stock (5 hops,
10 fermentables, 1 yeast) and 20 commercial target profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from revbrew.evolve.de import DeConfig
from revbrew.evolve.nsga2 import NsgaConfig
from revbrew.model import (
    BrewConfig,
    FermentableAddition,
    HopAddition,
    Inventory,
    TargetProfile,
    YeastPitch,
)
from revbrew.workbench.tomlio import dump_toml, load_toml

try:
    import tomllib
    TOMLDecodeError = tomllib.TOMLDecodeError
except ModuleNotFoundError:
    import tomli
    TOMLDecodeError = tomli.TOMLDecodeError


class WorkspaceError(Exception):
    """A workspace file failed to parse or violates an invariant."""


_HOP_FIELDS = {
    "name": str, "max_weight_kg": float, "alpha": float, "beta": float,
    "boil_time_min": float,
}
_FERMENTABLE_FIELDS = {
    "name": str, "max_weight_kg": float, "color_lovibond": float,
    "yield_pct": float, "moisture_pct": float, "ibu_gal_per_lb": float,
}
_YEAST_FIELDS = {
    "name": str, "max_volume_l": float, "temp_min_c": float,
    "temp_max_c": float, "attenuation_pct": float,
}
_TARGET_FIELDS = {
    "name": str, "og": float, "fg": float, "abv": float, "ibu": float, "srm": float,
}
_BREW_FIELDS = {
    "efficiency": float, "batch_size_l": float, "boil_size_l": float,
    "boil_time_min": float,
}
_NSGA_FIELDS = {
    "population_size": int, "generations": int, "crossover_prob": float,
    "eta_c": float, "eta_m": float, "mutation_prob": float,
}
_DE_FIELDS = {
    "population_size": int, "f_weight": float, "cr": float,
    "max_evaluations": int, "success_threshold": float,
}


@dataclass(frozen=True)
class Workspace:
    """Fully validated workspace: stock, targets and run defaults."""

    inventory: Inventory
    targets: tuple[TargetProfile, ...]
    brew: BrewConfig
    nsga_defaults: dict = field(default_factory=dict)
    de_defaults: dict = field(default_factory=dict)

    def target(self, selector) -> TargetProfile:
        """Look up a target by exact name or 1-based table index."""
        if isinstance(selector, int) or (isinstance(selector, str) and selector.isdigit()):
            index = int(selector)
            if not 1 <= index <= len(self.targets):
                raise WorkspaceError(
                    f"product index {index} out of range 1..{len(self.targets)}"
                )
            return self.targets[index - 1]
        for t in self.targets:
            if t.name == selector:
                return t
        raise WorkspaceError(f"unknown product {selector!r}")

    def nsga_config(self, seed: int, **overrides) -> NsgaConfig:
        params = {**self.nsga_defaults, **overrides}
        return NsgaConfig(seed=seed, **params)

    def de_config(self, seed: int, **overrides) -> DeConfig:
        params = {**self.de_defaults, **overrides}
        return DeConfig(seed=seed, **params)

    def with_inventory(self, inventory: Inventory) -> "Workspace":
        return Workspace(
            inventory=inventory,
            targets=self.targets,
            brew=self.brew,
            nsga_defaults=dict(self.nsga_defaults),
            de_defaults=dict(self.de_defaults),
        )


def _check_fields(entry: dict, schema: dict, where: str) -> dict:
    unknown = set(entry) - set(schema)
    if unknown:
        raise WorkspaceError(f"{where}: unknown field {sorted(unknown)[0]!r}")
    out = {}
    for key, kind in schema.items():
        if key not in entry:
            if key == "ibu_gal_per_lb":
                out[key] = 0.0
                continue
            raise WorkspaceError(f"{where}: missing field {key!r}")
        value = entry[key]
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
            raise WorkspaceError(
                f"{where}: field {key!r} must be {kind.__name__}, got {type(value).__name__}"
            )
        out[key] = value
    return out


def _array_of_tables(doc: dict, key: str, where: str) -> list[dict]:
    value = doc.get(key)
    if value is None:
        raise WorkspaceError(f"{where}: missing [[{key}]] entries")
    if not isinstance(value, list) or any(not isinstance(v, dict) for v in value):
        raise WorkspaceError(f"{where}: [[{key}]] must be an array of tables")
    return value


def _parse_inventory(path: Path) -> Inventory:
    doc = _load(path)
    where = path.name
    unknown = set(doc) - {"hops", "fermentables", "yeasts"}
    if unknown:
        raise WorkspaceError(f"{where}: unknown section {sorted(unknown)[0]!r}")

    hops, fermentables, yeasts = [], [], []
    for i, entry in enumerate(_array_of_tables(doc, "hops", where)):
        f = _check_fields(entry, _HOP_FIELDS, f"{where}: hops[{i}]")
        try:
            hops.append(HopAddition(f["name"], f["max_weight_kg"], f["alpha"],
                                    f["beta"], f["boil_time_min"]))
        except ValueError as exc:
            raise WorkspaceError(f"{where}: hops[{i}]: {exc}") from exc
    for i, entry in enumerate(_array_of_tables(doc, "fermentables", where)):
        f = _check_fields(entry, _FERMENTABLE_FIELDS, f"{where}: fermentables[{i}]")
        try:
            fermentables.append(FermentableAddition(
                f["name"], f["max_weight_kg"], f["color_lovibond"],
                f["yield_pct"], f["moisture_pct"], f["ibu_gal_per_lb"]))
        except ValueError as exc:
            raise WorkspaceError(f"{where}: fermentables[{i}]: {exc}") from exc
    for i, entry in enumerate(_array_of_tables(doc, "yeasts", where)):
        f = _check_fields(entry, _YEAST_FIELDS, f"{where}: yeasts[{i}]")
        try:
            yeasts.append(YeastPitch(f["name"], f["max_volume_l"], f["temp_min_c"],
                                     f["temp_max_c"], f["attenuation_pct"]))
        except ValueError as exc:
            raise WorkspaceError(f"{where}: yeasts[{i}]: {exc}") from exc

    if not fermentables:
        raise WorkspaceError(f"{where}: at least one fermentable is required "
                             "(gravity is unreachable without extract)")
    if not yeasts:
        raise WorkspaceError(f"{where}: at least one yeast is required "
                             "(final gravity needs an attenuation)")
    try:
        return Inventory(hops=tuple(hops), fermentables=tuple(fermentables),
                         yeasts=tuple(yeasts))
    except ValueError as exc:
        raise WorkspaceError(f"{where}: {exc}") from exc


def _parse_targets(path: Path) -> tuple[TargetProfile, ...]:
    doc = _load(path)
    where = path.name
    unknown = set(doc) - {"targets"}
    if unknown:
        raise WorkspaceError(f"{where}: unknown section {sorted(unknown)[0]!r}")
    targets = []
    for i, entry in enumerate(_array_of_tables(doc, "targets", where)):
        f = _check_fields(entry, _TARGET_FIELDS, f"{where}: targets[{i}]")
        try:
            targets.append(TargetProfile(**f))
        except ValueError as exc:
            raise WorkspaceError(f"{where}: targets[{i}]: {exc}") from exc
    if not targets:
        raise WorkspaceError(f"{where}: at least one target is required")
    names = [t.name for t in targets]
    if len(set(names)) != len(names):
        dupe = next(n for n in names if names.count(n) > 1)
        raise WorkspaceError(f"{where}: duplicate target name {dupe!r}")
    return tuple(targets)


def _parse_config(path: Path) -> tuple[BrewConfig, dict, dict]:
    doc = _load(path)
    where = path.name
    unknown = set(doc) - {"brew", "nsga2", "de"}
    if unknown:
        raise WorkspaceError(f"{where}: unknown section {sorted(unknown)[0]!r}")
    if "brew" not in doc or not isinstance(doc["brew"], dict):
        raise WorkspaceError(f"{where}: missing [brew] table")
    b = _check_fields(doc["brew"], _BREW_FIELDS, f"{where}: brew")
    try:
        brew = BrewConfig(efficiency=b["efficiency"], batch_size=b["batch_size_l"],
                          boil_size=b["boil_size_l"], boil_time=b["boil_time_min"])
    except ValueError as exc:
        raise WorkspaceError(f"{where}: brew: {exc}") from exc

    nsga_defaults: dict = {}
    if "nsga2" in doc:
        raw = doc["nsga2"]
        unknown = set(raw) - set(_NSGA_FIELDS)
        if unknown:
            raise WorkspaceError(f"{where}: nsga2: unknown field {sorted(unknown)[0]!r}")
        nsga_defaults = {k: (_NSGA_FIELDS[k](v) if not isinstance(v, bool) else v)
                         for k, v in raw.items()}
        try:
            NsgaConfig(seed=0, **nsga_defaults)
        except (TypeError, ValueError) as exc:
            raise WorkspaceError(f"{where}: nsga2: {exc}") from exc

    de_defaults: dict = {}
    if "de" in doc:
        raw = doc["de"]
        unknown = set(raw) - set(_DE_FIELDS)
        if unknown:
            raise WorkspaceError(f"{where}: de: unknown field {sorted(unknown)[0]!r}")
        de_defaults = {k: (_DE_FIELDS[k](v) if not isinstance(v, bool) else v)
                       for k, v in raw.items()}
        try:
            DeConfig(seed=0, **de_defaults)
        except (TypeError, ValueError) as exc:
            raise WorkspaceError(f"{where}: de: {exc}") from exc

    return brew, nsga_defaults, de_defaults


def _load(path: Path) -> dict:
    if not path.exists():
        raise WorkspaceError(f"missing workspace file: {path}")
    try:
        return load_toml(path)
    except TOMLDecodeError as exc:
        raise WorkspaceError(f"{path.name}: {exc}") from exc


def parse_workspace(directory) -> Workspace:
    """Load and validate a workspace directory."""
    directory = Path(directory)
    inventory = _parse_inventory(directory / "inventory.toml")
    targets = _parse_targets(directory / "targets.toml")
    brew, nsga_defaults, de_defaults = _parse_config(directory / "config.toml")
    return Workspace(inventory=inventory, targets=targets, brew=brew,
                     nsga_defaults=nsga_defaults, de_defaults=de_defaults)


def inventory_to_doc(inventory: Inventory) -> dict:
    return {
        "hops": [
            {"name": h.name, "max_weight_kg": h.max_weight, "alpha": h.alpha,
             "beta": h.beta, "boil_time_min": h.boil_time}
            for h in inventory.hops
        ],
        "fermentables": [
            {"name": f.name, "max_weight_kg": f.max_weight,
             "color_lovibond": f.color, "yield_pct": f.yield_pct,
             "moisture_pct": f.moisture_pct, "ibu_gal_per_lb": f.ibu_gal_per_lb}
            for f in inventory.fermentables
        ],
        "yeasts": [
            {"name": y.name, "max_volume_l": y.max_volume, "temp_min_c": y.temp_min,
             "temp_max_c": y.temp_max, "attenuation_pct": y.attenuation_pct}
            for y in inventory.yeasts
        ],
    }


def inventory_from_doc(doc: dict, where: str = "inventory") -> Inventory:
    """Validate an in-memory inventory document (the file schema, as a dict)."""
    import tempfile

    # Reuse the strict file parser by round-tripping through the emitter.
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / f"{where}.toml"
        try:
            dump_toml(doc, path)
        except TypeError as exc:
            raise WorkspaceError(f"{where}: {exc}") from exc
        return _parse_inventory(path)


def targets_to_doc(targets) -> dict:
    return {"targets": [
        {"name": t.name, "og": t.og, "fg": t.fg, "abv": t.abv, "ibu": t.ibu,
         "srm": t.srm}
        for t in targets
    ]}


def config_to_doc(ws: Workspace) -> dict:
    doc = {"brew": {
        "efficiency": ws.brew.efficiency, "batch_size_l": ws.brew.batch_size,
        "boil_size_l": ws.brew.boil_size, "boil_time_min": ws.brew.boil_time,
    }}
    if ws.nsga_defaults:
        doc["nsga2"] = dict(ws.nsga_defaults)
    if ws.de_defaults:
        doc["de"] = dict(ws.de_defaults)
    return doc


def serialize_workspace(ws: Workspace, directory) -> None:
    """Write a workspace back to its three files; inverse of parse_workspace."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    dump_toml(inventory_to_doc(ws.inventory), directory / "inventory.toml")
    dump_toml(targets_to_doc(ws.targets), directory / "targets.toml")
    dump_toml(config_to_doc(ws), directory / "config.toml")


def default_workspace() -> Workspace:
    """The workspace shipped with the package: reference stock and 20 targets."""
    data_dir = resources.files("revbrew") / "data"
    with resources.as_file(data_dir) as directory:
        return parse_workspace(directory)


def parse_recipe(path, inventory: Inventory) -> np.ndarray:
    """Read a recipe file: either ``values = [...]`` or an [uptake] table.

    The table form maps ingredient names to amounts; unnamed ingredients get
    zero, unknown names are errors.
    """
    path = Path(path)
    doc = _load(path)
    where = path.name
    if "values" in doc and "uptake" in doc:
        raise WorkspaceError(f"{where}: give either 'values' or [uptake], not both")
    if "values" in doc:
        values = doc["values"]
        if not isinstance(values, list) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in values
        ):
            raise WorkspaceError(f"{where}: 'values' must be a list of numbers")
        if len(values) != inventory.dimension:
            raise WorkspaceError(
                f"{where}: recipe has {len(values)} values, inventory defines "
                f"{inventory.dimension} dimensions"
            )
        return np.asarray(values, dtype=float)
    if "uptake" in doc:
        table = doc["uptake"]
        if not isinstance(table, dict):
            raise WorkspaceError(f"{where}: [uptake] must be a table")
        names = inventory.names
        x = np.zeros(inventory.dimension)
        for name, amount in table.items():
            if name not in names:
                raise WorkspaceError(f"{where}: unknown ingredient {name!r}")
            if isinstance(amount, bool) or not isinstance(amount, (int, float)):
                raise WorkspaceError(f"{where}: uptake for {name!r} must be a number")
            x[names.index(name)] = float(amount)
        return x
    raise WorkspaceError(f"{where}: recipe needs 'values' or an [uptake] table")
