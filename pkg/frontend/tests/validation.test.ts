import { describe, expect, it } from "vitest";

import {
  canSubmit,
  draftFromTarget,
  emptyDraft,
  validateTarget,
} from "../src/validation.js";

const GUINNESS = {
  name: "Guinness Extra Stout",
  og: 1.07,
  fg: 1.034,
  abv: 5.1,
  ibu: 40,
  srm: 40,
};

describe("target validation", () => {
  it("accepts a preset draft in full", () => {
    const draft = draftFromTarget(GUINNESS);
    const result = validateTarget(draft);
    expect(result.ok).toBe(true);
    expect(result.value).toEqual(GUINNESS);
  });

  it("preset fills all five numeric fields", () => {
    const draft = draftFromTarget(GUINNESS);
    expect(draft.og).toBe("1.07");
    expect(draft.fg).toBe("1.034");
    expect(draft.abv).toBe("5.1");
    expect(draft.ibu).toBe("40");
    expect(draft.srm).toBe("40");
  });

  it("flags fg above og inline", () => {
    const draft = { ...draftFromTarget(GUINNESS), fg: "1.2" };
    const result = validateTarget(draft);
    expect(result.ok).toBe(false);
    expect(result.errors.fg).toMatch(/cannot exceed og/);
  });

  it("cleared field disables submit", () => {
    const draft = { ...draftFromTarget(GUINNESS), ibu: "" };
    expect(canSubmit(draft)).toBe(false);
    expect(validateTarget(draft).errors.ibu).toMatch(/numeric/);
  });

  it("rejects non-numeric text", () => {
    const draft = { ...draftFromTarget(GUINNESS), srm: "dark" };
    expect(validateTarget(draft).errors.srm).toBeTruthy();
  });

  it("rejects gravities below 1.0 and negative magnitudes", () => {
    expect(validateTarget({ ...draftFromTarget(GUINNESS), og: "0.99" }).errors.og).toBeTruthy();
    expect(validateTarget({ ...draftFromTarget(GUINNESS), abv: "-1" }).errors.abv).toBeTruthy();
  });

  it("empty draft is not submittable", () => {
    expect(canSubmit(emptyDraft())).toBe(false);
  });
});
