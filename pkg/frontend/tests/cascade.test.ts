import { readdirSync } from "node:fs";

import { describe, expect, it } from "vitest";

import {
  defaultStyle,
  parseStylesheet,
  printStylesheet,
  resolveStyle,
  StyleParseError,
  type ComputedStyle,
  type ElementName,
} from "../src/cascade.js";
import { fixturePath, goldenSnapshot, readFixture } from "./helpers.js";

interface CascadeCase {
  name: string;
  css: string;
  element: ElementName;
  classes: string[];
  clicked: boolean;
  expected: ComputedStyle;
}

interface CascadeFixture {
  defaults: ComputedStyle;
  cases: CascadeCase[];
}

interface StylesheetManifest {
  valid: Record<string, { rules: number }>;
  malformed: Record<string, { line: number; col: number; expected: string }>;
}

const conformance = JSON.parse(readFixture("cascade_conformance.json")) as CascadeFixture;
const manifest = JSON.parse(readFixture("stylesheets/manifest.json")) as StylesheetManifest;

describe("cascade conformance fixture", () => {
  it("agrees on the built-in defaults", () => {
    expect(defaultStyle()).toEqual(conformance.defaults);
  });

  for (const testCase of conformance.cases) {
    it(`resolves ${testCase.name} identically`, () => {
      const rules = parseStylesheet(testCase.css);
      const resolved = resolveStyle(rules, testCase.element, testCase.classes, testCase.clicked);
      expect(resolved).toEqual(testCase.expected);
    });
  }
});

describe("stylesheet corpus", () => {
  it("covers every file in the fixture directories", () => {
    const valid = readdirSync(fixturePath("stylesheets/valid")).sort();
    const malformed = readdirSync(fixturePath("stylesheets/malformed")).sort();
    expect(valid).toEqual(Object.keys(manifest.valid).sort());
    expect(malformed).toEqual(Object.keys(manifest.malformed).sort());
  });

  for (const [name, entry] of Object.entries(manifest.valid)) {
    it(`parses ${name} into ${entry.rules} rule(s)`, () => {
      const rules = parseStylesheet(readFixture(`stylesheets/valid/${name}`));
      expect(rules).toHaveLength(entry.rules);
      expect(parseStylesheet(printStylesheet(rules))).toEqual(rules);
    });
  }

  for (const [name, entry] of Object.entries(manifest.malformed)) {
    it(`rejects ${name} at line ${entry.line}, col ${entry.col}`, () => {
      let caught: unknown;
      try {
        parseStylesheet(readFixture(`stylesheets/malformed/${name}`));
      } catch (err) {
        caught = err;
      }
      expect(caught).toBeInstanceOf(StyleParseError);
      const parseError = caught as StyleParseError;
      expect(parseError.line).toBe(entry.line);
      expect(parseError.col).toBe(entry.col);
      expect(parseError.message).toContain(entry.expected);
      expect(parseError.message).toContain(`line ${entry.line}, col ${entry.col}`);
    });
  }
});

describe("session stylesheet from the snapshot endpoint", () => {
  const rules = parseStylesheet(goldenSnapshot().stylesheet);

  it("round-trips through the canonical printer", () => {
    expect(parseStylesheet(printStylesheet(rules))).toEqual(rules);
  });

  it("styles a joy leaf with the theme color", () => {
    const style = resolveStyle(rules, "node", ["joy"]);
    expect(style["fill-color"]).toBe("#FFD700");
    expect(style.shape).toBe("circle");
    expect(style["label-visible"]).toBe(false);
  });

  it("gives hubs their emoji icons and clicked nodes a heavy stroke", () => {
    const hub = resolveStyle(rules, "node", ["hub", "sadness"]);
    expect(hub.shape).toBe("icon");
    expect(hub.icon).toBe("emoji-sadness");
    const clicked = resolveStyle(rules, "node", ["hub", "sadness"], true);
    expect(clicked["stroke-width"]).toBe(4);
    expect(clicked["stroke-color"]).toBe("#111111");
    expect(clicked.icon).toBe("emoji-sadness");
  });

  it("keeps class rules above element rules and pseudo above both", () => {
    const css = [
      "node:clicked { fill-color: #111111; }",
      "node.joy { fill-color: #FFD700; }",
      "node { fill-color: #868E96; }",
    ].join("\n");
    const parsed = parseStylesheet(css);
    expect(resolveStyle(parsed, "node")["fill-color"]).toBe("#868E96");
    expect(resolveStyle(parsed, "node", ["joy"])["fill-color"]).toBe("#FFD700");
    expect(resolveStyle(parsed, "node", ["joy"], true)["fill-color"]).toBe("#111111");
  });

  it("restricts background to graph rules", () => {
    expect(() => parseStylesheet("node { background: #FFFFFF; }"))
      .toThrowError(/applies only to graph rules/);
    const graphRules = parseStylesheet("graph { background: #ABCDEF; }");
    expect(resolveStyle(graphRules, "graph").background).toBe("#ABCDEF");
  });
});
