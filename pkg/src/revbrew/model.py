"""Beer property model: ingredient vectors in, wort/beer properties out.

Everything here is pure and deterministic. An :class:`Inventory` fixes the
search-space layout (one dimension per ingredient, bounds = stock amounts),
a :class:`BrewConfig` fixes the equipment parameters, and a recipe vector
(kg for hops and fermentables, L for the yeast pitch) maps to gravity,
alcohol, bitterness and colour. Three distances against a
:class:`TargetProfile` form the optimization objectives.

Internally all formulas work on gram/liter inputs for hop bitterness and
pound/gallon inputs for extract and colour (the published coefficients are
fits in those units); the stored genome stays metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LB_PER_KG = 2.20462
GAL_PER_L = 0.264172
G_PER_KG = 1000.0

# Extract points of pure sucrose, per pound per gallon.
SUCROSE_PPG = 46.214

EBC_PER_SRM = 1.97
MOREY_COEFF = 1.4922
MOREY_EXP = 0.6859

# The alcohol formula has a pole at OG = 1.775; anything at or above 1.7 is
# far outside plausible wort gravity and treated as invalid input.
MAX_VALID_OG = 1.7


@dataclass(frozen=True)
class HopAddition:
    """One hop in stock: bound (kg), acid content and boil time."""

    name: str
    max_weight: float
    alpha: float
    beta: float
    boil_time: float

    def __post_init__(self):
        if self.max_weight < 0:
            raise ValueError(f"hop {self.name!r}: max_weight must be >= 0")
        if not 0 <= self.alpha <= 100:
            raise ValueError(f"hop {self.name!r}: alpha must be in [0, 100]")
        if not 0 <= self.beta <= 100:
            raise ValueError(f"hop {self.name!r}: beta must be in [0, 100]")
        if self.boil_time < 0:
            raise ValueError(f"hop {self.name!r}: boil_time must be >= 0")


@dataclass(frozen=True)
class FermentableAddition:
    """One fermentable in stock: bound (kg), colour and extract properties."""

    name: str
    max_weight: float
    color: float
    yield_pct: float
    moisture_pct: float
    ibu_gal_per_lb: float = 0.0

    def __post_init__(self):
        if self.max_weight < 0:
            raise ValueError(f"fermentable {self.name!r}: max_weight must be >= 0")
        if self.color < 0:
            raise ValueError(f"fermentable {self.name!r}: color must be >= 0")
        if not 0 <= self.yield_pct <= 100:
            raise ValueError(f"fermentable {self.name!r}: yield_pct must be in [0, 100]")
        if not 0 <= self.moisture_pct < 100:
            raise ValueError(f"fermentable {self.name!r}: moisture_pct must be in [0, 100)")
        if self.ibu_gal_per_lb < 0:
            raise ValueError(f"fermentable {self.name!r}: ibu_gal_per_lb must be >= 0")


@dataclass(frozen=True)
class YeastPitch:
    """One yeast in stock: pitch-volume bound (L) and strain attenuation.

    The pitch volume spans a genome dimension but has no effect on any
    computed property; attenuation is a property of the strain. The
    temperature range is stored for reference only.
    """

    name: str
    max_volume: float
    temp_min: float
    temp_max: float
    attenuation_pct: float

    def __post_init__(self):
        if self.max_volume < 0:
            raise ValueError(f"yeast {self.name!r}: max_volume must be >= 0")
        if self.temp_min > self.temp_max:
            raise ValueError(f"yeast {self.name!r}: temp_min must be <= temp_max")
        if not 0 <= self.attenuation_pct <= 100:
            raise ValueError(f"yeast {self.name!r}: attenuation_pct must be in [0, 100]")


@dataclass(frozen=True)
class Inventory:
    """The full stock; defines genome layout [hops..., fermentables..., yeasts...]."""

    hops: tuple[HopAddition, ...]
    fermentables: tuple[FermentableAddition, ...]
    yeasts: tuple[YeastPitch, ...]

    def __post_init__(self):
        object.__setattr__(self, "hops", tuple(self.hops))
        object.__setattr__(self, "fermentables", tuple(self.fermentables))
        object.__setattr__(self, "yeasts", tuple(self.yeasts))
        if self.dimension < 1:
            raise ValueError("inventory must contain at least one ingredient")
        for kind, items in (("hop", self.hops), ("fermentable", self.fermentables),
                            ("yeast", self.yeasts)):
            names = [item.name for item in items]
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate {kind} names in inventory")

    @property
    def dimension(self) -> int:
        return len(self.hops) + len(self.fermentables) + len(self.yeasts)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(i.name for i in (*self.hops, *self.fermentables, *self.yeasts))

    def bounds(self) -> np.ndarray:
        """Upper bound per genome dimension (kg for hops/fermentables, L for yeast)."""
        return np.array(
            [h.max_weight for h in self.hops]
            + [f.max_weight for f in self.fermentables]
            + [y.max_volume for y in self.yeasts],
            dtype=float,
        )

    @property
    def hop_slice(self) -> slice:
        return slice(0, len(self.hops))

    @property
    def fermentable_slice(self) -> slice:
        nh = len(self.hops)
        return slice(nh, nh + len(self.fermentables))

    @property
    def yeast_slice(self) -> slice:
        return slice(len(self.hops) + len(self.fermentables), self.dimension)


@dataclass(frozen=True)
class BrewConfig:
    """Equipment parameters: extraction efficiency and volumes (L)."""

    efficiency: float
    batch_size: float
    boil_size: float
    boil_time: float

    def __post_init__(self):
        if not 0 < self.efficiency <= 1:
            raise ValueError("efficiency must be in (0, 1]")
        if self.batch_size <= 0:
            raise ValueError("batch_size must be > 0")
        if self.boil_size <= 0:
            raise ValueError("boil_size must be > 0")
        if self.boil_time < 0:
            raise ValueError("boil_time must be >= 0")


@dataclass(frozen=True)
class TargetProfile:
    """Desired beer characteristics for one product."""

    name: str
    og: float
    fg: float
    abv: float
    ibu: float
    srm: float

    def __post_init__(self):
        if self.og < 1.0:
            raise ValueError(f"target {self.name!r}: og must be >= 1.0")
        if self.fg < 1.0:
            raise ValueError(f"target {self.name!r}: fg must be >= 1.0")
        if self.fg > self.og:
            raise ValueError(f"target {self.name!r}: fg must be <= og")
        for field_name in ("abv", "ibu", "srm"):
            if getattr(self, field_name) < 0:
                raise ValueError(f"target {self.name!r}: {field_name} must be >= 0")


@dataclass(frozen=True)
class BeerProperties:
    """Computed properties of one recipe.

    ``ibu_gu`` is NaN when og == 1.0 (the ratio is undefined on water).
    """

    og: float
    fg: float
    abv: float
    ibu: float
    ibu_gu: float
    mcu: float
    srm: float
    ebc: float


@dataclass(frozen=True)
class ObjectiveVector:
    """The three minimized distances to a target.

    f1 bundles gravity and alcohol (Euclidean over OG, FG, ABV), f2 is the
    bitterness distance, f3 the colour distance. All raw units, no rescaling.
    """

    f1: float
    f2: float
    f3: float

    def __post_init__(self):
        if self.f1 < 0 or self.f2 < 0 or self.f3 < 0:
            raise ValueError("objective components must be >= 0")

    def as_array(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.f3], dtype=float)


def overall_error(obj: ObjectiveVector) -> float:
    """Scalar solution quality e = f1 + f2 + f3.

    Not used to guide the multi-objective search; classifies success
    (e <= threshold) and serves as the scalar fitness for DE.
    """
    return obj.f1 + obj.f2 + obj.f3


def validate_recipe(recipe, inventory: Inventory, check_bounds: bool = True) -> np.ndarray:
    """Coerce a recipe to a float vector and check it against the inventory."""
    x = np.asarray(recipe, dtype=float)
    if x.ndim != 1 or x.shape[0] != inventory.dimension:
        raise ValueError(
            f"recipe has {x.shape[0] if x.ndim == 1 else x.shape} values, "
            f"inventory defines {inventory.dimension} dimensions"
        )
    if check_bounds:
        if np.any(x < 0):
            raise ValueError("recipe values must be >= 0")
        over = x > inventory.bounds()
        if np.any(over):
            bad = inventory.names[int(np.argmax(over))]
            raise ValueError(f"recipe exceeds stock bound for {bad!r}")
    return x


class RecipeEvaluator:
    """Vectorized property/objective kernels for one inventory + equipment setup.

    Precomputes per-ingredient coefficient arrays once, then evaluates whole
    populations as (n, dimension) matrices. The scalar API functions below
    delegate here so that single-recipe and batched evaluation are
    bit-identical.
    """

    def __init__(self, inventory: Inventory, config: BrewConfig):
        self.inventory = inventory
        self.config = config
        self.bounds = inventory.bounds()

        self._hop = inventory.hop_slice
        self._ferm = inventory.fermentable_slice

        batch_gal = config.batch_size * GAL_PER_L
        ferm = inventory.fermentables

        # OG: gravity points per kg of each fermentable, efficiency applied.
        self._og_coef = np.array(
            [
                config.efficiency
                * LB_PER_KG
                * SUCROSE_PPG
                * (f.yield_pct / 100.0)
                * (1.0 - f.moisture_pct / 100.0)
                / (batch_gal * 1000.0)
                for f in ferm
            ],
            dtype=float,
        )

        # Hop bitterness per kg at unit gravity factor; the OG-dependent
        # utilization term multiplies in afterwards.
        v = config.batch_size
        self._ibu_hop_coef = np.array(
            [
                10.0 * G_PER_KG * h.alpha * (1.0 - math.exp(-0.04 * h.boil_time))
                / (4.15 * v)
                for h in inventory.hops
            ],
            dtype=float,
        )

        # Fermentable bitterness per kg (pound/gallon convention).
        self._ibu_ferm_coef = np.array(
            [f.ibu_gal_per_lb * LB_PER_KG / batch_gal for f in ferm], dtype=float
        )

        # Colour units per kg (pound/gallon convention).
        self._mcu_coef = np.array(
            [f.color * LB_PER_KG / batch_gal for f in ferm], dtype=float
        )

        self._attenuation = (
            inventory.yeasts[0].attenuation_pct / 100.0 if inventory.yeasts else None
        )

    def _as_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[np.newaxis, :]
        if X.ndim != 2 or X.shape[1] != self.inventory.dimension:
            raise ValueError(
                f"expected recipes of dimension {self.inventory.dimension}, "
                f"got shape {X.shape}"
            )
        return X

    def og(self, X) -> np.ndarray:
        X = self._as_matrix(X)
        return 1.0 + (X[:, self._ferm] * self._og_coef).sum(axis=1)

    def fg(self, og: np.ndarray) -> np.ndarray:
        if self._attenuation is None:
            raise ValueError("inventory has no yeast; final gravity is undefined")
        return og - (og - 1.0) * self._attenuation

    def abv(self, og: np.ndarray, fg: np.ndarray) -> np.ndarray:
        if np.any(og >= MAX_VALID_OG):
            raise ValueError(f"og >= {MAX_VALID_OG} is outside the valid model range")
        return 76.08 * (og - fg) * fg / (0.794 * (1.775 - og))

    def ibu(self, X, og: np.ndarray) -> np.ndarray:
        X = self._as_matrix(X)
        hop_part = (X[:, self._hop] * self._ibu_hop_coef).sum(axis=1) * (
            1.65 * 0.000125 ** (og - 1.0)
        )
        ferm_part = (X[:, self._ferm] * self._ibu_ferm_coef).sum(axis=1)
        return hop_part + ferm_part

    def mcu(self, X) -> np.ndarray:
        X = self._as_matrix(X)
        return (X[:, self._ferm] * self._mcu_coef).sum(axis=1)

    def srm(self, X) -> np.ndarray:
        return MOREY_COEFF * self.mcu(X) ** MOREY_EXP

    def properties_matrix(self, X) -> dict[str, np.ndarray]:
        """All properties for a population matrix, as named arrays."""
        X = self._as_matrix(X)
        og = self.og(X)
        fg = self.fg(og)
        abv = self.abv(og, fg)
        ibu = self.ibu(X, og)
        mcu = self.mcu(X)
        srm = MOREY_COEFF * mcu ** MOREY_EXP
        return {
            "og": og, "fg": fg, "abv": abv, "ibu": ibu,
            "mcu": mcu, "srm": srm, "ebc": srm * EBC_PER_SRM,
        }

    def objectives_matrix(self, X, target: TargetProfile) -> np.ndarray:
        """(n, 3) objective distances against a target, for minimization."""
        p = self.properties_matrix(X)
        f1 = np.sqrt(
            (p["og"] - target.og) ** 2
            + (p["fg"] - target.fg) ** 2
            + (p["abv"] - target.abv) ** 2
        )
        f2 = np.abs(p["ibu"] - target.ibu)
        f3 = np.abs(p["srm"] - target.srm)
        return np.column_stack([f1, f2, f3])

    def properties_single(self, recipe) -> BeerProperties:
        x = validate_recipe(recipe, self.inventory)
        p = self.properties_matrix(x)
        og = float(p["og"][0])
        ibu = float(p["ibu"][0])
        ibu_gu = ibu / (1000.0 * (og - 1.0)) if og > 1.0 else math.nan
        return BeerProperties(
            og=og,
            fg=float(p["fg"][0]),
            abv=float(p["abv"][0]),
            ibu=ibu,
            ibu_gu=ibu_gu,
            mcu=float(p["mcu"][0]),
            srm=float(p["srm"][0]),
            ebc=float(p["ebc"][0]),
        )


def compute_og(recipe, inventory: Inventory, config: BrewConfig) -> float:
    """Pre-fermentation gravity from the fermentable bill.

    Points-per-pound-per-gallon extract model: each fermentable contributes
    its sucrose-referenced extract (scaled by yield and moisture), the
    brewhouse efficiency scales the total, and the batch volume dilutes it.
    """
    x = validate_recipe(recipe, inventory, check_bounds=False)
    return float(RecipeEvaluator(inventory, config).og(x)[0])


def compute_fg(og: float, attenuation: float) -> float:
    """Post-fermentation gravity: FG = OG - (OG - 1) x attenuation."""
    if og < 1.0:
        raise ValueError("og must be >= 1.0")
    if not 0.0 <= attenuation <= 1.0:
        raise ValueError("attenuation must be in [0, 1]")
    return og - (og - 1.0) * attenuation


def compute_abv(og: float, fg: float) -> float:
    """Alcohol by volume (percent) from the gravity drop."""
    if fg > og:
        raise ValueError("fg must be <= og")
    if og >= MAX_VALID_OG:
        raise ValueError(f"og >= {MAX_VALID_OG} is outside the valid model range")
    return 76.08 * (og - fg) * fg / (0.794 * (1.775 - og))


def compute_ibu_hops(recipe, inventory: Inventory, og: float, config: BrewConfig) -> float:
    """Hop bitterness: per-hop utilization from boil time, scaled by gravity."""
    if og < 1.0:
        raise ValueError("og must be >= 1.0")
    x = validate_recipe(recipe, inventory, check_bounds=False)
    ev = RecipeEvaluator(inventory, config)
    hop_part = float((x[ev._hop] * ev._ibu_hop_coef).sum())
    return hop_part * 1.65 * 0.000125 ** (og - 1.0)


def compute_ibu_fermentables(recipe, inventory: Inventory, config: BrewConfig) -> float:
    """Bitterness contributed by the fermentables (per-ingredient coefficients)."""
    x = validate_recipe(recipe, inventory, check_bounds=False)
    ev = RecipeEvaluator(inventory, config)
    return float((x[ev._ferm] * ev._ibu_ferm_coef).sum())


def compute_ibu_gu(og: float, ibu: float) -> float:
    """Bitterness-to-gravity ratio; undefined at og = 1.0."""
    if og <= 1.0:
        raise ValueError("ibu/gu is undefined for og <= 1.0")
    return ibu / (1000.0 * (og - 1.0))


def compute_mcu(recipe, inventory: Inventory, config: BrewConfig) -> float:
    """Malt colour units: colour x weight (lb) summed, over gallons."""
    x = validate_recipe(recipe, inventory, check_bounds=False)
    return float(RecipeEvaluator(inventory, config).mcu(x)[0])


def compute_srm(recipe, inventory: Inventory, config: BrewConfig) -> float:
    """Beer colour: Morey compression of the aggregate malt colour units.

    SRM = 1.4922 x MCU^0.6859 with MCU in pound/gallon units. The exponent
    applies to the aggregate, which caps reachable colour on a small stock;
    EBC = SRM x 1.97.
    """
    return MOREY_COEFF * compute_mcu(recipe, inventory, config) ** MOREY_EXP


def evaluate_recipe(recipe, inventory: Inventory, config: BrewConfig) -> BeerProperties:
    """All properties of one recipe (bounds enforced). Pure and deterministic."""
    return RecipeEvaluator(inventory, config).properties_single(recipe)


def objectives(props: BeerProperties, target: TargetProfile) -> ObjectiveVector:
    """Distance of computed properties from a target, split into f1/f2/f3."""
    f1 = math.sqrt(
        (props.og - target.og) ** 2
        + (props.fg - target.fg) ** 2
        + (props.abv - target.abv) ** 2
    )
    return ObjectiveVector(f1=f1, f2=abs(props.ibu - target.ibu),
                           f3=abs(props.srm - target.srm))
