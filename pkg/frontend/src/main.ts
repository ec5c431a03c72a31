/**
 * Page wiring: binds the store, API client and view builders to the DOM.
 * One event-stream subscription per visible job; every server payload lands
 * in the store and views re-render from store state only.
 */

import { ApiClient } from "./api.js";
import {
  renderComparison,
  renderFailurePanel,
  renderHeatmap,
  renderParetoScatter,
  renderProgressChart,
  renderDistanceMatrix,
  renderObjectiveStrips,
} from "./charts.js";
import { buildDiversifySpecs, buildExploitSpec, withIngredientBound } from "./fineTune.js";
import { SessionStore } from "./store.js";
import type { JobSpec, Solution, SolutionsPayload } from "./types.js";
import { canSubmit, validateTarget, type TargetDraft } from "./validation.js";

const FIELDS: (keyof TargetDraft)[] = ["name", "og", "fg", "abv", "ibu", "srm"];

export function startApp(root: HTMLElement, client: ApiClient): SessionStore {
  const store = new SessionStore();
  root.innerHTML = pageSkeleton();

  const el = (id: string) => root.querySelector<HTMLElement>(`#${id}`)!;
  const input = (id: string) => root.querySelector<HTMLInputElement>(`#${id}`)!;

  store.subscribe((state) => {
    // preset dropdown
    const select = root.querySelector<HTMLSelectElement>("#preset")!;
    if (state.workspace && select.options.length <= 1) {
      for (const t of state.workspace.targets) {
        const option = document.createElement("option");
        option.value = t.name;
        option.textContent = t.name;
        select.appendChild(option);
      }
    }
    // target editor
    const check = validateTarget(state.targetDraft);
    for (const field of FIELDS) {
      const box = input(`field-${field}`);
      if (box && document.activeElement !== box) {
        box.value = state.targetDraft[field];
      }
      const err = el(`error-${field}`);
      if (err) err.textContent = check.errors[field] ?? "";
    }
    (el("submit-job") as HTMLButtonElement).disabled = !canSubmit(state.targetDraft);

    // job list with live progress
    const jobList = el("job-list");
    jobList.innerHTML = state.jobOrder
      .map((id) => {
        const view = state.jobs[id];
        const s = view.snapshot;
        const pct = s.total_generations
          ? Math.round((100 * s.progress) / s.total_generations)
          : 0;
        return (
          `<li data-job="${id}" class="job ${s.state}">` +
          `${s.product} / ${s.algorithm} / seed ${s.seed} - ${s.state} ${pct}%</li>`
        );
      })
      .join("");

    // progress chart for the newest job
    const lastId = state.jobOrder[state.jobOrder.length - 1];
    if (lastId) {
      const series = state.jobs[lastId].progressSeries.map((p) => ({
        generation: p.generation,
        bestError: p.bestError,
      }));
      el("progress-chart").innerHTML = renderProgressChart(series);
    }

    el("comparison").innerHTML = renderComparison(
      state.selectedSolutions,
      state.workspace?.inventory
        ? [
            ...state.workspace.inventory.hops.map((h) => h.name),
            ...state.workspace.inventory.fermentables.map((f) => f.name),
            ...state.workspace.inventory.yeasts.map((y) => y.name),
          ]
        : [],
    );
  });

  root.querySelector<HTMLSelectElement>("#preset")!.addEventListener("change", (ev) => {
    store.applyPreset((ev.target as HTMLSelectElement).value);
  });
  for (const field of FIELDS) {
    input(`field-${field}`).addEventListener("input", (ev) => {
      store.editTargetField(field, (ev.target as HTMLInputElement).value);
    });
  }

  el("submit-job").addEventListener("click", async () => {
    const state = store.getState();
    const check = validateTarget(state.targetDraft);
    if (!check.ok || !check.value) return;
    const spec: JobSpec = {
      product: check.value.name,
      algorithm: "nsga2",
      seed: Number(input("field-seed").value || "1"),
    };
    const snapshot = await client.submitJob(spec);
    store.registerJob(snapshot);
    void followJob(snapshot.id);
  });

  async function followJob(jobId: string): Promise<void> {
    await client.streamEvents(jobId, (event) => store.recordJobEvent(jobId, event));
    const snapshot = await client.jobStatus(jobId);
    store.updateJobSnapshot(snapshot);
    if (snapshot.state === "done") {
      const payload = await client.jobSolutions(jobId);
      renderResultViews(payload);
    }
  }

  function renderResultViews(payload: SolutionsPayload): void {
    el("pareto").innerHTML = renderParetoScatter(payload.solutions);
    const successful = payload.solutions.filter((s) => s.successful);
    if (successful.length > 0) {
      el("heatmap").innerHTML = renderHeatmap(
        successful.map((s) => s.genome),
        payload.ingredient_names,
        payload.bounds,
      );
      el("strips").innerHTML = renderObjectiveStrips(successful);
      void client
        .distanceMatrix(successful.map((s) => s.genome))
        .then((dm) => {
          el("distance").innerHTML = renderDistanceMatrix(dm.labels, dm.values);
        });
    } else {
      const n = payload.solutions.length || 1;
      const mean = (k: "f1" | "f2" | "f3") =>
        payload.solutions.reduce((a, s) => a + s.objectives[k], 0) / n;
      el("heatmap").innerHTML = renderFailurePanel({
        f1: mean("f1"),
        f2: mean("f2"),
        f3: mean("f3"),
      });
    }
  }

  void (async () => {
    store.loadWorkspace(await client.workspace());
  })();

  // exposed for fine-tune buttons wired elsewhere on the page
  (root as HTMLElement & { revbrew?: object }).revbrew = {
    exploit: (selected: Solution, product: string, seed: number) =>
      client.submitJob(buildExploitSpec(selected, { product, seed })),
    diversify: (product: string, seed: number, runs: number) =>
      Promise.all(buildDiversifySpecs({ product, seed }, runs).map((s) => client.submitJob(s))),
    whatIfBound: (name: string, bound: number) => {
      const inv = store.getState().inventoryDraft;
      if (!inv) throw new Error("workspace not loaded");
      return withIngredientBound(inv, name, bound);
    },
  };
  return store;
}

function pageSkeleton(): string {
  const fieldRows = FIELDS.map(
    (f) =>
      `<label>${f}<input id="field-${f}"><span class="error" id="error-${f}"></span></label>`,
  ).join("");
  return `
  <header><h1>revbrew workbench</h1></header>
  <section id="editor">
    <select id="preset"><option value="">choose a preset...</option></select>
    ${fieldRows}
    <label>seed<input id="field-seed" value="1"></label>
    <button id="submit-job">run</button>
  </section>
  <section><ul id="job-list"></ul><div id="progress-chart"></div></section>
  <section id="results">
    <div id="pareto"></div>
    <div id="heatmap"></div>
    <div id="strips"></div>
    <div id="distance"></div>
    <div id="comparison"></div>
  </section>`;
}
