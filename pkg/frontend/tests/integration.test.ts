/**
 * End-to-end UI flow against a live service process:
 * presets -> job submission -> progress stream -> result views ->
 * roasted-barley what-if -> product-7 success flip.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderFailurePanel, renderHeatmap, renderParetoScatter } from "../src/charts.js";
import { withIngredientBound } from "../src/fineTune.js";
import { SessionStore } from "../src/store.js";
import type { JobEvent, JobSpec } from "../src/types.js";
import { validateTarget } from "../src/validation.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

// Small but honest search: enough to solve topped-up product 7 with seed 1.
const JOB_CONFIG = { population_size: 60, generations: 300 };

let server: ChildProcess;
const client = new ApiClient(BASE);

async function waitForServer(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      await client.workspace();
      return;
    } catch {
      if (Date.now() > deadline) throw new Error("service did not come up");
      await new Promise((r) => setTimeout(r, 250));
    }
  }
}

async function runJob(spec: JobSpec): Promise<{ events: JobEvent[]; jobId: string }> {
  const snapshot = await client.submitJob(spec);
  const events: JobEvent[] = [];
  await client.streamEvents(snapshot.id, (e) => events.push(e));
  return { events, jobId: snapshot.id };
}

beforeAll(async () => {
  const resultDir = mkdtempSync(join(tmpdir(), "revbrew-ui-test-"));
  server = spawn(
    "python3",
    ["-m", "revbrew.workbench.cli", "serve", "--port", String(PORT), "--results", resultDir],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 60_000);

afterAll(async () => {
  server?.kill("SIGTERM");
});

describe("workbench flow against the live service", () => {
  it("loads the shipped presets into the editor", async () => {
    const store = new SessionStore();
    store.loadWorkspace(await client.workspace());
    const state = store.getState();
    expect(state.workspace?.targets).toHaveLength(20);

    store.applyPreset("Guinness Extra Stout");
    const draft = store.getState().targetDraft;
    const parsed = validateTarget(draft);
    expect(parsed.ok).toBe(true);
    expect(parsed.value).toMatchObject({ abv: 5.1, ibu: 40, srm: 40, og: 1.07, fg: 1.034 });
  }, 30_000);

  it(
    "runs product 7, sees the failure, applies the what-if and sees the flip",
    async () => {
      const store = new SessionStore();
      store.loadWorkspace(await client.workspace());

      const spec: JobSpec = {
        product: "Sunmaid Stout",
        algorithm: "nsga2",
        seed: 1,
        config: JOB_CONFIG,
      };

      // ---- run 1: stock as shipped; the colour target is out of reach ----
      const first = await runJob(spec);
      const progress = first.events.filter((e) => e.type === "progress");
      expect(progress.length).toBeGreaterThanOrEqual(1);
      const terminal = first.events[first.events.length - 1];
      expect(terminal.type).toBe("done");
      if (terminal.type !== "done") throw new Error("unreachable");
      expect(terminal.successful_count).toBe(0);

      const failedPayload = await client.jobSolutions(first.jobId);
      const scatter = renderParetoScatter(failedPayload.solutions);
      expect(scatter.match(/<circle/g)).toHaveLength(failedPayload.solutions.length * 3);

      // empty state: diagnostics panel points at colour
      const n = failedPayload.solutions.length;
      const mean = (k: "f1" | "f2" | "f3") =>
        failedPayload.solutions.reduce((a, s) => a + s.objectives[k], 0) / n;
      const panel = renderFailurePanel({ f1: mean("f1"), f2: mean("f2"), f3: mean("f3") });
      // colour or bitterness blocks; never the gravity/ABV bundle
      expect(panel).toMatch(/data-blocking="f[23]"/);

      // ---- what-if: top up roasted barley in the draft, then apply ----
      store.editInventoryBound("Roasted Barley", 5.0);
      const draft = store.getState().inventoryDraft!;
      expect(store.getState().inventoryDirty).toBe(true);
      // the same edit helper the fine-tune panel uses must agree
      expect(draft).toEqual(
        withIngredientBound(store.getState().workspace!.inventory, "Roasted Barley", 5.0),
      );
      const applied = await client.putInventory(draft);
      store.markInventoryApplied(applied);
      expect(store.getState().inventoryDirty).toBe(false);

      // ---- run 2: same spec and seed, now against the topped-up stock ----
      const second = await runJob(spec);
      const terminal2 = second.events[second.events.length - 1];
      expect(terminal2.type).toBe("done");
      if (terminal2.type !== "done") throw new Error("unreachable");
      expect(terminal2.successful_count).toBeGreaterThanOrEqual(1);

      const payload = await client.jobSolutions(second.jobId);
      const successful = payload.solutions.filter((s) => s.successful);
      expect(successful).toHaveLength(terminal2.successful_count);

      const heatmap = renderHeatmap(
        successful.map((s) => s.genome),
        payload.ingredient_names,
        payload.bounds,
      );
      expect(heatmap.match(/heat-row/g)).toHaveLength(successful.length);
      expect(heatmap.match(/heat-cell/g)).toHaveLength(successful.length * 16);

      // progress chart data stayed ordered
      store.registerJob(await client.jobStatus(second.jobId));
      for (const e of second.events) store.recordJobEvent(second.jobId, e);
      const series = store.getState().jobs[second.jobId].progressSeries;
      const gens = series.map((p) => p.generation);
      expect([...gens].sort((a, b) => a - b)).toEqual(gens);
    },
    120_000,
  );

  it("distance matrix endpoint backs the diversity view", async () => {
    const dm = await client.distanceMatrix([
      [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
      [0, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    ]);
    expect(dm.values[0][1]).toBeCloseTo(3.0, 10);
    expect(dm.max_off_diagonal).toBeCloseTo(3.0, 10);
  }, 30_000);
});
