import { describe, expect, it } from "vitest";

import { NOISE_COLOR, PALETTE, colorFor } from "../src/palette.js";

describe("palette", () => {
  it("has exactly 32 distinct colors", () => {
    expect(PALETTE).toHaveLength(32);
    expect(new Set(PALETTE).size).toBe(32);
  });

  it("renders noise gray", () => {
    expect(colorFor(-1)).toBe(NOISE_COLOR);
  });

  it("wraps beyond 32 topics", () => {
    expect(colorFor(0)).toBe(PALETTE[0]);
    expect(colorFor(32)).toBe(PALETTE[0]);
    expect(colorFor(33)).toBe(PALETTE[1]);
  });

  it("gives distinct colors to a 3-topic fixture", () => {
    const colors = [0, 1, 2].map(colorFor);
    expect(new Set(colors).size).toBe(3);
  });
});
