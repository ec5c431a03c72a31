/**
 * Follow-up strategies for a completed job: exploit one chosen solution with
 * another multi-objective run, or diversify with several independent
 * single-objective runs. What-if inventory edits ride along on the job spec
 * only; the server workspace is untouched.
 */

import type { InventoryDoc, JobSpec, Solution } from "./types.js";

export interface FineTuneOptions {
  product: string | number;
  seed: number;
  config?: Record<string, number>;
  inventoryOverride?: InventoryDoc;
  successThreshold?: number;
}

/** One more deep multi-objective run around the region the user liked. */
export function buildExploitSpec(
  _selected: Solution,
  options: FineTuneOptions,
): JobSpec {
  const spec: JobSpec = {
    product: options.product,
    algorithm: "nsga2",
    seed: options.seed,
    config: { ...(options.config ?? {}) },
  };
  if (options.inventoryOverride) spec.inventory = options.inventoryOverride;
  if (options.successThreshold !== undefined) {
    spec.success_threshold = options.successThreshold;
  }
  return spec;
}

/**
 * N independent single-objective runs with distinct seeds; each returns its
 * own solution to pick from.
 */
export function buildDiversifySpecs(
  options: FineTuneOptions,
  runs: number,
): JobSpec[] {
  if (runs < 1) throw new Error("diversify needs at least one run");
  const specs: JobSpec[] = [];
  for (let i = 0; i < runs; i += 1) {
    const spec: JobSpec = {
      product: options.product,
      algorithm: "de",
      seed: options.seed + i,
      config: { ...(options.config ?? {}) },
    };
    if (options.inventoryOverride) spec.inventory = options.inventoryOverride;
    if (options.successThreshold !== undefined) {
      spec.success_threshold = options.successThreshold;
    }
    specs.push(spec);
  }
  return specs;
}

/** Copy an inventory with one ingredient's stock bound changed. */
export function withIngredientBound(
  inventory: InventoryDoc,
  name: string,
  newBound: number,
): InventoryDoc {
  const copy: InventoryDoc = JSON.parse(JSON.stringify(inventory));
  let found = false;
  for (const hop of copy.hops) {
    if (hop.name === name) {
      hop.max_weight_kg = newBound;
      found = true;
    }
  }
  for (const f of copy.fermentables) {
    if (f.name === name) {
      f.max_weight_kg = newBound;
      found = true;
    }
  }
  for (const y of copy.yeasts) {
    if (y.name === name) {
      y.max_volume_l = newBound;
      found = true;
    }
  }
  if (!found) throw new Error(`unknown ingredient: ${name}`);
  return copy;
}
