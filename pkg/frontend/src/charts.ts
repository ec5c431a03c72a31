/**
 * Pure view builders: every function maps run data to an SVG/HTML string.
 * Solution properties and objective values are rendered verbatim as the
 * service reported them; nothing is recomputed client-side.
 */

import type { Solution } from "./types.js";

export interface ProgressPoint {
  generation: number;
  bestError: number;
}

const W = 520;
const H = 220;
const PAD = 36;

function scale(value: number, lo: number, hi: number, a: number, b: number): number {
  if (hi <= lo) return (a + b) / 2;
  return a + ((value - lo) / (hi - lo)) * (b - a);
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toPrecision(4);
}

/** Best-error-so-far line chart; x strictly follows generation order. */
export function renderProgressChart(series: ProgressPoint[]): string {
  if (series.length === 0) {
    return `<svg class="progress-chart" viewBox="0 0 ${W} ${H}"><text x="10" y="20">no progress yet</text></svg>`;
  }
  const gens = series.map((p) => p.generation);
  const errs = series.map((p) => p.bestError);
  const gLo = Math.min(...gens);
  const gHi = Math.max(...gens);
  const eLo = Math.min(...errs);
  const eHi = Math.max(...errs);
  const points = series
    .map((p) => {
      const x = scale(p.generation, gLo, gHi, PAD, W - PAD);
      const y = scale(p.bestError, eLo, eHi, H - PAD, PAD);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  return (
    `<svg class="progress-chart" viewBox="0 0 ${W} ${H}">` +
    `<polyline fill="none" stroke="#38bdf8" stroke-width="2" points="${points}"/>` +
    `<text x="${PAD}" y="${H - 8}" class="axis">gen ${gLo}..${gHi}</text>` +
    `<text x="${PAD}" y="16" class="axis">best e ${fmt(eLo)}..${fmt(eHi)}</text>` +
    `</svg>`
  );
}

const PAIRS: [keyof Solution["objectives"], keyof Solution["objectives"]][] = [
  ["f1", "f2"],
  ["f1", "f3"],
  ["f2", "f3"],
];

/** Three pairwise 2-D projections of the objective cloud. */
export function renderParetoScatter(solutions: Solution[]): string {
  const panels = PAIRS.map(([ox, oy]) => {
    const xs = solutions.map((s) => s.objectives[ox]);
    const ys = solutions.map((s) => s.objectives[oy]);
    const xLo = Math.min(...xs, 0);
    const xHi = Math.max(...xs, 1e-12);
    const yLo = Math.min(...ys, 0);
    const yHi = Math.max(...ys, 1e-12);
    const dots = solutions
      .map((s, i) => {
        const cx = scale(xs[i], xLo, xHi, PAD, W - PAD);
        const cy = scale(ys[i], yLo, yHi, H - PAD, PAD);
        const cls = s.successful ? "dot successful" : "dot";
        return `<circle class="${cls}" data-index="${i}" cx="${cx.toFixed(1)}" cy="${cy.toFixed(1)}" r="3"/>`;
      })
      .join("");
    return (
      `<svg class="pareto-panel" data-axes="${ox}-${oy}" viewBox="0 0 ${W} ${H}">` +
      `<text x="${PAD}" y="16" class="axis">${ox} vs ${oy}</text>${dots}</svg>`
    );
  });
  return `<div class="pareto-scatter">${panels.join("")}</div>`;
}

/**
 * Solutions x ingredients heatmap. One row per solution, one cell per
 * ingredient; shade = uptake normalized by that ingredient's stock bound,
 * so a darker cell always means a fuller use of what is available.
 */
export function renderHeatmap(
  genomes: number[][],
  ingredientNames: string[],
  bounds: number[],
): string {
  const rows = genomes
    .map((genome, r) => {
      const cells = genome
        .map((v, c) => {
          const bound = bounds[c] > 0 ? bounds[c] : 1;
          const frac = Math.max(0, Math.min(1, v / bound));
          const shade = Math.round(255 - frac * 200);
          return (
            `<td class="heat-cell" data-col="${c}" title="${ingredientNames[c]}: ${v.toPrecision(4)}"` +
            ` style="background: rgb(${shade},${shade},255)"></td>`
          );
        })
        .join("");
      return `<tr class="heat-row" data-row="${r}">${cells}</tr>`;
    })
    .join("");
  const header = ingredientNames
    .map((n, c) => `<th data-col="${c}">${c + 1}</th>`)
    .join("");
  return (
    `<table class="solution-heatmap"><thead><tr><th></th>${header}</tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

/** Distance-matrix heatmap (symmetric, zero diagonal). */
export function renderDistanceMatrix(labels: string[], values: number[][]): string {
  let hi = 0;
  for (const row of values) for (const v of row) hi = Math.max(hi, v);
  const rows = values
    .map((row, r) => {
      const cells = row
        .map((v, c) => {
          const frac = hi > 0 ? v / hi : 0;
          const shade = Math.round(255 - frac * 200);
          return `<td data-rc="${r}-${c}" title="${v.toPrecision(4)}" style="background: rgb(255,${shade},${shade})"></td>`;
        })
        .join("");
      return `<tr><th>${labels[r]}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="distance-matrix" data-max="${hi.toPrecision(5)}">` +
    `<tbody>${rows}</tbody></table>`
  );
}

/** One strip per objective showing the value distribution across solutions. */
export function renderObjectiveStrips(solutions: Solution[]): string {
  const keys: (keyof Solution["objectives"])[] = ["f1", "f2", "f3"];
  const strips = keys.map((key) => {
    const values = solutions.map((s) => s.objectives[key]);
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    const marks = values
      .map((v) => {
        const x = scale(v, lo, hi, PAD, W - PAD);
        return `<line x1="${x.toFixed(1)}" y1="8" x2="${x.toFixed(1)}" y2="28" stroke="#a78bfa"/>`;
      })
      .join("");
    return (
      `<svg class="objective-strip" data-objective="${key}" viewBox="0 0 ${W} 36">` +
      `<text x="2" y="24" class="axis">${key}</text>${marks}</svg>`
    );
  });
  return `<div class="objective-strips">${strips.join("")}</div>`;
}

/** Empty-state panel: which objective blocks success, per the diagnostics. */
export function renderFailurePanel(diagnostics: { f1: number; f2: number; f3: number }): string {
  const entries = Object.entries(diagnostics) as [string, number][];
  const [worst] = entries.reduce((a, b) => (b[1] > a[1] ? b : a));
  const label =
    worst === "f3" ? "colour (SRM)" : worst === "f2" ? "bitterness (IBU)" : "gravity/ABV";
  const rows = entries
    .map(([k, v]) => `<tr><th>${k}</th><td>${v.toPrecision(4)}</td></tr>`)
    .join("");
  return (
    `<div class="failure-panel"><p>No successful solutions. ` +
    `Mean distance is largest on <strong data-blocking="${worst}">${label}</strong>; ` +
    `the stock likely cannot reach the target there.</p>` +
    `<table>${rows}</table></div>`
  );
}

/** Side-by-side ingredient and property comparison of selected solutions. */
export function renderComparison(
  solutions: Solution[],
  ingredientNames: string[],
): string {
  if (solutions.length === 0) return `<div class="comparison empty">nothing selected</div>`;
  const propKeys = ["og", "fg", "abv", "ibu", "srm", "ebc"] as const;
  const propRows = propKeys
    .map((key) => {
      const cells = solutions
        .map((s) => `<td>${Number(s.properties[key]).toPrecision(5)}</td>`)
        .join("");
      return `<tr><th>${key}</th>${cells}</tr>`;
    })
    .join("");
  const ingRows = ingredientNames
    .map((name, i) => {
      const cells = solutions
        .map((s) => `<td>${s.genome[i].toPrecision(4)}</td>`)
        .join("");
      return `<tr><th>${name}</th>${cells}</tr>`;
    })
    .join("");
  const heads = solutions.map((_, i) => `<th>pick ${i + 1}</th>`).join("");
  return (
    `<table class="comparison"><thead><tr><th></th>${heads}</tr></thead>` +
    `<tbody>${propRows}${ingRows}</tbody></table>`
  );
}
