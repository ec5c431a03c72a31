/**
 * Single session store. Every mutation goes through `update`, which applies
 * reducers one at a time in arrival order, so listeners never observe a
 * half-applied state. Inventory edits live in a draft copy; nothing touches
 * the server workspace until the caller explicitly applies the draft.
 */

import type {
  InventoryDoc,
  JobEvent,
  JobSnapshot,
  Solution,
  WorkspacePayload,
} from "./types.js";
import { draftFromTarget, emptyDraft, type TargetDraft } from "./validation.js";

export interface JobView {
  snapshot: JobSnapshot;
  progressSeries: { generation: number; bestError: number; front0: number }[];
  terminal: JobEvent | null;
}

export interface SessionState {
  workspace: WorkspacePayload | null;
  targetDraft: TargetDraft;
  inventoryDraft: InventoryDoc | null;
  inventoryDirty: boolean;
  jobs: Record<string, JobView>;
  jobOrder: string[];
  selectedSolutions: Solution[];
}

type Reducer = (state: SessionState) => SessionState;
type Listener = (state: SessionState) => void;

function deepCopy<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export function initialState(): SessionState {
  return {
    workspace: null,
    targetDraft: emptyDraft(),
    inventoryDraft: null,
    inventoryDirty: false,
    jobs: {},
    jobOrder: [],
    selectedSolutions: [],
  };
}

export class SessionStore {
  private state: SessionState = initialState();
  private listeners: Listener[] = [];
  private queue: Reducer[] = [];
  private draining = false;

  getState(): SessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  /** Apply a reducer; queued reducers run strictly in order. */
  update(reducer: Reducer): void {
    this.queue.push(reducer);
    if (this.draining) return;
    this.draining = true;
    try {
      while (this.queue.length > 0) {
        const next = this.queue.shift() as Reducer;
        this.state = next(this.state);
      }
    } finally {
      this.draining = false;
    }
    for (const listener of this.listeners) listener(this.state);
  }

  loadWorkspace(payload: WorkspacePayload): void {
    this.update((s) => ({
      ...s,
      workspace: payload,
      inventoryDraft: deepCopy(payload.inventory),
      inventoryDirty: false,
    }));
  }

  /** Fill the editor from one of the shipped products. */
  applyPreset(name: string): void {
    this.update((s) => {
      const preset = s.workspace?.targets.find((t) => t.name === name);
      if (!preset) return s;
      return { ...s, targetDraft: draftFromTarget(preset) };
    });
  }

  editTargetField(field: keyof TargetDraft, value: string): void {
    this.update((s) => ({ ...s, targetDraft: { ...s.targetDraft, [field]: value } }));
  }

  /** Edit the stock bound of one ingredient in the local draft only. */
  editInventoryBound(name: string, newBound: number): void {
    this.update((s) => {
      if (!s.inventoryDraft) return s;
      const draft = deepCopy(s.inventoryDraft);
      for (const hop of draft.hops) {
        if (hop.name === name) hop.max_weight_kg = newBound;
      }
      for (const f of draft.fermentables) {
        if (f.name === name) f.max_weight_kg = newBound;
      }
      for (const y of draft.yeasts) {
        if (y.name === name) y.max_volume_l = newBound;
      }
      return { ...s, inventoryDraft: draft, inventoryDirty: true };
    });
  }

  /** Called after the server accepted the draft (PUT succeeded). */
  markInventoryApplied(applied: InventoryDoc): void {
    this.update((s) => {
      const workspace = s.workspace
        ? { ...s.workspace, inventory: deepCopy(applied) }
        : s.workspace;
      return { ...s, workspace, inventoryDraft: deepCopy(applied), inventoryDirty: false };
    });
  }

  registerJob(snapshot: JobSnapshot): void {
    this.update((s) => ({
      ...s,
      jobs: {
        ...s.jobs,
        [snapshot.id]: { snapshot, progressSeries: [], terminal: null },
      },
      jobOrder: [...s.jobOrder, snapshot.id],
    }));
  }

  updateJobSnapshot(snapshot: JobSnapshot): void {
    this.update((s) => {
      const view = s.jobs[snapshot.id];
      if (!view) return s;
      return { ...s, jobs: { ...s.jobs, [snapshot.id]: { ...view, snapshot } } };
    });
  }

  /** Record a streamed event; out-of-order generations are dropped. */
  recordJobEvent(jobId: string, event: JobEvent): void {
    this.update((s) => {
      const view = s.jobs[jobId];
      if (!view) return s;
      if (event.type === "progress") {
        const last = view.progressSeries[view.progressSeries.length - 1];
        if (last && event.generation <= last.generation) return s;
        const progressSeries = [
          ...view.progressSeries,
          {
            generation: event.generation,
            bestError: event.best_e,
            front0: event.front0_size,
          },
        ];
        return { ...s, jobs: { ...s.jobs, [jobId]: { ...view, progressSeries } } };
      }
      return { ...s, jobs: { ...s.jobs, [jobId]: { ...view, terminal: event } } };
    });
  }

  toggleSolutionSelection(solution: Solution): void {
    this.update((s) => {
      const key = JSON.stringify(solution.genome);
      const kept = s.selectedSolutions.filter(
        (sel) => JSON.stringify(sel.genome) !== key,
      );
      if (kept.length < s.selectedSolutions.length) {
        return { ...s, selectedSolutions: kept };
      }
      return { ...s, selectedSolutions: [...s.selectedSolutions, solution] };
    });
  }
}
