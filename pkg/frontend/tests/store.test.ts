import { describe, expect, it } from "vitest";

import { SessionStore } from "../src/store.js";
import type { JobSnapshot, WorkspacePayload } from "../src/types.js";

function workspacePayload(): WorkspacePayload {
  return {
    inventory: {
      hops: [{ name: "Cascade", max_weight_kg: 0.1, alpha: 6, beta: 6, boil_time_min: 60 }],
      fermentables: [
        {
          name: "Roasted Barley",
          max_weight_kg: 0.5,
          color_lovibond: 300,
          yield_pct: 55,
          moisture_pct: 0,
          ibu_gal_per_lb: 0,
        },
      ],
      yeasts: [
        { name: "S-04", max_volume_l: 0.011, temp_min_c: 15, temp_max_c: 24, attenuation_pct: 75 },
      ],
    },
    targets: [
      { name: "Guinness Extra Stout", og: 1.07, fg: 1.034, abv: 5.1, ibu: 40, srm: 40 },
      { name: "Punk IPA", og: 1.053, fg: 1.011, abv: 5.6, ibu: 40, srm: 7.6 },
    ],
    brew: { efficiency: 0.58, batch_size_l: 20, boil_size_l: 24, boil_time_min: 60 },
    nsga2: {},
    de: {},
  };
}

function snapshot(id: string): JobSnapshot {
  return {
    id,
    product: "Guinness Extra Stout",
    algorithm: "nsga2",
    seed: 1,
    state: "queued",
    progress: 0,
    total_generations: 100,
    summary: null,
    error: null,
    result_file: null,
  };
}

describe("session store", () => {
  it("applies presets into the editable draft", () => {
    const store = new SessionStore();
    store.loadWorkspace(workspacePayload());
    store.applyPreset("Guinness Extra Stout");
    const draft = store.getState().targetDraft;
    expect(draft.abv).toBe("5.1");
    expect(draft.og).toBe("1.07");
  });

  it("inventory edits stay in the draft until applied", () => {
    const store = new SessionStore();
    const payload = workspacePayload();
    store.loadWorkspace(payload);
    store.editInventoryBound("Roasted Barley", 5.0);
    const state = store.getState();
    expect(state.inventoryDirty).toBe(true);
    expect(state.inventoryDraft?.fermentables[0].max_weight_kg).toBe(5.0);
    // the loaded workspace copy is untouched
    expect(state.workspace?.inventory.fermentables[0].max_weight_kg).toBe(0.5);

    store.markInventoryApplied(state.inventoryDraft!);
    const after = store.getState();
    expect(after.inventoryDirty).toBe(false);
    expect(after.workspace?.inventory.fermentables[0].max_weight_kg).toBe(5.0);
  });

  it("drops out-of-order progress events", () => {
    const store = new SessionStore();
    store.registerJob(snapshot("j1"));
    store.recordJobEvent("j1", { type: "progress", generation: 10, best_e: 5, front0_size: 3 });
    store.recordJobEvent("j1", { type: "progress", generation: 10, best_e: 5, front0_size: 3 });
    store.recordJobEvent("j1", { type: "progress", generation: 5, best_e: 9, front0_size: 2 });
    store.recordJobEvent("j1", { type: "progress", generation: 20, best_e: 1, front0_size: 9 });
    const series = store.getState().jobs.j1.progressSeries;
    expect(series.map((p) => p.generation)).toEqual([10, 20]);
  });

  it("serializes reducers queued from inside listeners", () => {
    const store = new SessionStore();
    const seen: number[] = [];
    let reentered = false;
    store.subscribe((state) => {
      seen.push(state.jobOrder.length);
      if (!reentered) {
        reentered = true;
        store.registerJob(snapshot("j2"));
      }
    });
    store.registerJob(snapshot("j1"));
    expect(store.getState().jobOrder).toEqual(["j1", "j2"]);
    expect(seen.length).toBeGreaterThan(0);
  });

  it("terminal events land on the job view", () => {
    const store = new SessionStore();
    store.registerJob(snapshot("j1"));
    store.recordJobEvent("j1", {
      type: "done",
      nondominated_count: 9,
      successful_count: 4,
      best_e: 0.01,
      evaluations_used: 1000,
    });
    expect(store.getState().jobs.j1.terminal?.type).toBe("done");
  });

  it("toggles solution selection by genome identity", () => {
    const store = new SessionStore();
    const solution = {
      genome: [1, 2, 3],
      objectives: { f1: 0, f2: 0, f3: 0 },
      error: 0,
      successful: true,
      properties: { og: 1.05, fg: 1.01, abv: 5, ibu: 40, ibu_gu: 0.8, mcu: 10, srm: 12, ebc: 23.6 },
    };
    store.toggleSolutionSelection(solution);
    expect(store.getState().selectedSolutions).toHaveLength(1);
    store.toggleSolutionSelection(solution);
    expect(store.getState().selectedSolutions).toHaveLength(0);
  });
});
