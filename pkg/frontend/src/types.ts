/** Payload shapes exchanged with the job service. */

export interface TargetProfile {
  name: string;
  og: number;
  fg: number;
  abv: number;
  ibu: number;
  srm: number;
}

export interface HopEntry {
  name: string;
  max_weight_kg: number;
  alpha: number;
  beta: number;
  boil_time_min: number;
}

export interface FermentableEntry {
  name: string;
  max_weight_kg: number;
  color_lovibond: number;
  yield_pct: number;
  moisture_pct: number;
  ibu_gal_per_lb: number;
}

export interface YeastEntry {
  name: string;
  max_volume_l: number;
  temp_min_c: number;
  temp_max_c: number;
  attenuation_pct: number;
}

export interface InventoryDoc {
  hops: HopEntry[];
  fermentables: FermentableEntry[];
  yeasts: YeastEntry[];
}

export interface WorkspacePayload {
  inventory: InventoryDoc;
  targets: TargetProfile[];
  brew: {
    efficiency: number;
    batch_size_l: number;
    boil_size_l: number;
    boil_time_min: number;
  };
  nsga2: Record<string, number>;
  de: Record<string, number>;
}

export interface JobSpec {
  product: string | number;
  algorithm: "nsga2" | "de";
  seed: number;
  config?: Record<string, number>;
  inventory?: InventoryDoc;
  success_threshold?: number;
}

export type JobState = "queued" | "running" | "done" | "failed";

export interface JobSnapshot {
  id: string;
  product: string | number;
  algorithm: string;
  seed: number;
  state: JobState;
  progress: number;
  total_generations: number | null;
  summary: {
    nondominated_count: number;
    successful_count: number;
    best_e: number;
    evaluations_used: number;
  } | null;
  error: string | null;
  result_file: string | null;
}

export interface ProgressEvent {
  type: "progress";
  generation: number;
  best_e: number;
  front0_size: number;
}

export interface DoneEvent {
  type: "done";
  nondominated_count: number;
  successful_count: number;
  best_e: number;
  evaluations_used: number;
}

export interface FailedEvent {
  type: "failed";
  message: string;
}

export type JobEvent = ProgressEvent | DoneEvent | FailedEvent;

export interface SolutionProperties {
  og: number;
  fg: number;
  abv: number;
  ibu: number;
  ibu_gu: number | null;
  mcu: number;
  srm: number;
  ebc: number;
}

export interface Solution {
  genome: number[];
  objectives: { f1: number; f2: number; f3: number };
  error: number;
  successful: boolean;
  properties: SolutionProperties;
}

export interface SolutionsPayload {
  job_id: string;
  product: string;
  ingredient_names: string[];
  bounds: number[];
  threshold: number;
  solutions: Solution[];
}

export interface DistanceMatrixPayload {
  labels: string[];
  values: number[][];
  max_off_diagonal: number;
}
