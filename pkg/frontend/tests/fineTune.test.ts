import { describe, expect, it } from "vitest";

import { buildDiversifySpecs, buildExploitSpec, withIngredientBound } from "../src/fineTune.js";
import type { InventoryDoc, Solution } from "../src/types.js";

const SELECTED: Solution = {
  genome: [0.1, 4.0],
  objectives: { f1: 0.001, f2: 0.01, f3: 0.02 },
  error: 0.031,
  successful: true,
  properties: { og: 1.07, fg: 1.0175, abv: 5.0, ibu: 40, ibu_gu: 0.57, mcu: 30, srm: 15, ebc: 29.55 },
};

function inventory(): InventoryDoc {
  return {
    hops: [{ name: "Cascade", max_weight_kg: 0.1, alpha: 6, beta: 6, boil_time_min: 60 }],
    fermentables: [
      { name: "Roasted Barley", max_weight_kg: 0.5, color_lovibond: 300, yield_pct: 55, moisture_pct: 0, ibu_gal_per_lb: 0 },
    ],
    yeasts: [{ name: "S-04", max_volume_l: 0.011, temp_min_c: 15, temp_max_c: 24, attenuation_pct: 75 }],
  };
}

describe("exploit mode", () => {
  it("builds a multi-objective job for the same product", () => {
    const spec = buildExploitSpec(SELECTED, { product: "Sunmaid Stout", seed: 42 });
    expect(spec.algorithm).toBe("nsga2");
    expect(spec.product).toBe("Sunmaid Stout");
    expect(spec.seed).toBe(42);
    expect(spec.inventory).toBeUndefined();
  });

  it("same spec and seed means the same job, byte for byte", () => {
    const a = buildExploitSpec(SELECTED, { product: 7, seed: 1, config: { generations: 50 } });
    const b = buildExploitSpec(SELECTED, { product: 7, seed: 1, config: { generations: 50 } });
    expect(JSON.stringify(a)).toBe(JSON.stringify(b));
  });
});

describe("diversify mode", () => {
  it("emits one single-objective job per independent seed", () => {
    const specs = buildDiversifySpecs({ product: 2, seed: 10 }, 5);
    expect(specs).toHaveLength(5);
    expect(new Set(specs.map((s) => s.seed))).toEqual(new Set([10, 11, 12, 13, 14]));
    for (const spec of specs) expect(spec.algorithm).toBe("de");
  });

  it("rejects zero runs", () => {
    expect(() => buildDiversifySpecs({ product: 2, seed: 1 }, 0)).toThrow();
  });
});

describe("what-if inventory edits", () => {
  it("tops up an ingredient on a copy only", () => {
    const original = inventory();
    const edited = withIngredientBound(original, "Roasted Barley", 5.0);
    expect(edited.fermentables[0].max_weight_kg).toBe(5.0);
    expect(original.fermentables[0].max_weight_kg).toBe(0.5);
  });

  it("rides along on the job spec", () => {
    const edited = withIngredientBound(inventory(), "Roasted Barley", 5.0);
    const spec = buildExploitSpec(SELECTED, {
      product: "Sunmaid Stout",
      seed: 3,
      inventoryOverride: edited,
    });
    expect(spec.inventory?.fermentables[0].max_weight_kg).toBe(5.0);
  });

  it("unknown ingredient throws", () => {
    expect(() => withIngredientBound(inventory(), "Unobtanium", 1)).toThrow(/unknown/);
  });
});
