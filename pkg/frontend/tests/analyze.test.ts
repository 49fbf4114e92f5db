import { describe, expect, it } from "vitest";

import { clusterName, tokens } from "../src/analyze.js";

describe("client-side label normalization", () => {
  it("mirrors the service analyzer on plain labels", () => {
    expect(tokens("Blue Denim-Trousers!")).toEqual(["blue", "denim", "trousers"]);
    expect(clusterName("denim shorts")).toBe("denim_shorts");
    expect(clusterName("Long Sleeve Top")).toBe("long_sleeve_top");
    expect(clusterName("jeans")).toBe("jeans");
  });

  it("treats underscores as separators and keeps digits", () => {
    expect(tokens("long_sleeve_top")).toEqual(["long", "sleeve", "top"]);
    expect(tokens("501 jeans")).toEqual(["501", "jeans"]);
  });

  it("returns empty for symbol-only text", () => {
    expect(tokens("!!! ---")).toEqual([]);
    expect(clusterName("???")).toBe("");
  });
});
