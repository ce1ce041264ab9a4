import { describe, expect, it } from "vitest";

import { clamp01, domainLabel, fmt4, QUESTIONNAIRE_LEVELS, shortControlLabel } from "../src/format.js";

describe("fmt4", () => {
  it("always shows four decimals, like the CLI tables", () => {
    expect(fmt4(0)).toBe("0.0000");
    expect(fmt4(9.2039)).toBe("9.2039");
    expect(fmt4(100)).toBe("100.0000");
    expect(fmt4(0.98765432)).toBe("0.9877");
  });
});

describe("questionnaire ladder", () => {
  it("has the five fixed implementation levels", () => {
    expect(QUESTIONNAIRE_LEVELS.map((l) => l.value)).toEqual([0, 0.25, 0.5, 0.75, 1]);
  });
});

describe("helpers", () => {
  it("clamps into the unit interval", () => {
    expect(clamp01(-0.2)).toBe(0);
    expect(clamp01(0.4)).toBe(0.4);
    expect(clamp01(1.7)).toBe(1);
  });

  it("prettifies domain names and control ids", () => {
    expect(domainLabel("communications_security")).toBe("communications security");
    expect(shortControlLabel("ctrl.consumer.systems.device-hardening")).toBe("consumer / device-hardening");
  });
});
