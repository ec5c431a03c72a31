/**
 * Client-side target validation, mirroring the server's profile invariants:
 * gravities at least 1.0, final gravity not above original, non-negative
 * ABV/IBU/SRM. Drafts hold raw field text so partially typed values never
 * crash the editor; `validateTarget` reports per-field errors and the form
 * stays unsubmittable until every field parses clean.
 */

import type { TargetProfile } from "./types.js";

export interface TargetDraft {
  name: string;
  og: string;
  fg: string;
  abv: string;
  ibu: string;
  srm: string;
}

export interface ValidationResult {
  ok: boolean;
  errors: Partial<Record<keyof TargetDraft, string>>;
  value?: TargetProfile;
}

export function draftFromTarget(target: TargetProfile): TargetDraft {
  return {
    name: target.name,
    og: String(target.og),
    fg: String(target.fg),
    abv: String(target.abv),
    ibu: String(target.ibu),
    srm: String(target.srm),
  };
}

export function emptyDraft(): TargetDraft {
  return { name: "", og: "", fg: "", abv: "", ibu: "", srm: "" };
}

function parseField(text: string): number | null {
  if (text.trim() === "") return null;
  const value = Number(text);
  return Number.isFinite(value) ? value : null;
}

export function validateTarget(draft: TargetDraft): ValidationResult {
  const errors: ValidationResult["errors"] = {};
  if (draft.name.trim() === "") errors.name = "name is required";

  const og = parseField(draft.og);
  const fg = parseField(draft.fg);
  const abv = parseField(draft.abv);
  const ibu = parseField(draft.ibu);
  const srm = parseField(draft.srm);

  if (og === null) errors.og = "numeric value required";
  else if (og < 1.0) errors.og = "og must be at least 1.000";
  if (fg === null) errors.fg = "numeric value required";
  else if (fg < 1.0) errors.fg = "fg must be at least 1.000";
  if (og !== null && fg !== null && fg > og) errors.fg = "fg cannot exceed og";
  if (abv === null) errors.abv = "numeric value required";
  else if (abv < 0) errors.abv = "abv cannot be negative";
  if (ibu === null) errors.ibu = "numeric value required";
  else if (ibu < 0) errors.ibu = "ibu cannot be negative";
  if (srm === null) errors.srm = "numeric value required";
  else if (srm < 0) errors.srm = "srm cannot be negative";

  if (Object.keys(errors).length > 0) return { ok: false, errors };
  return {
    ok: true,
    errors: {},
    value: {
      name: draft.name.trim(),
      og: og as number,
      fg: fg as number,
      abv: abv as number,
      ibu: ibu as number,
      srm: srm as number,
    },
  };
}

export function canSubmit(draft: TargetDraft): boolean {
  return validateTarget(draft).ok;
}
