import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

const root = join(dirname(fileURLToPath(import.meta.url)), "..");
const manifest = JSON.parse(readFileSync(join(root, "package.json"), "utf8"));
const grammar = JSON.parse(
  readFileSync(join(root, "syntaxes", "datadesc.tmLanguage.json"), "utf8"),
);

// TextMate patterns are Oniguruma; these stay inside JS regex syntax except
// for a leading (?i), which maps onto the `i` flag.
function toJsRegExp(pattern: string): RegExp {
  return pattern.startsWith("(?i)")
    ? new RegExp(pattern.slice(4), "i")
    : new RegExp(pattern);
}

describe("extension manifest", () => {
  it("declares the datadesc language for .ddesc files", () => {
    const lang = manifest.contributes.languages[0];
    expect(lang.id).toBe("datadesc");
    expect(lang.extensions).toContain(".ddesc");
  });

  it("declares a configuration key for the server binary path", () => {
    const props = manifest.contributes.configuration.properties;
    expect(props["datadesc.server.path"]).toBeDefined();
    expect(props["datadesc.server.path"].type).toBe("string");
    expect(props["datadesc.server.path"].default).toBe("datadesc");
  });

  it("activates on the language and points at the compiled entry", () => {
    expect(manifest.activationEvents).toContain("onLanguage:datadesc");
    expect(manifest.main).toBe("./out/extension.js");
  });

  it("registers the declarative grammar for the language", () => {
    const entry = manifest.contributes.grammars[0];
    expect(entry.language).toBe("datadesc");
    expect(entry.scopeName).toBe(grammar.scopeName);
    expect(entry.path).toBe("./syntaxes/datadesc.tmLanguage.json");
  });
});

describe("highlighting grammar", () => {
  it("every rule compiles as a regular expression", () => {
    for (const rule of Object.values<any>(grammar.repository)) {
      for (const key of ["match", "begin", "end"]) {
        if (rule[key]) {
          expect(() => toJsRegExp(rule[key])).not.toThrow();
        }
      }
    }
  });

  const samples: Array<[string, string]> = [
    ["comment", "// a remark"],
    ["section", "Data Provenance:"],
    ["section", "Metadata:"],
    ["key", "  Release Date: 08-10-2020"],
    ["key", "      Labels: skinImages.benignant_malignant"],
    ["key", "          OfType: Categorical"],
    ["key", "            Categorical-Distribution:"],
    ["bareKeyword", "      Inv skinImages: (ageGroup >= 0)"],
    ["bareKeyword", "      Labeling Requirements"],
    ["enumValue", "Record-Data"],
    ["date", "08-10-2020"],
    ["number", "33126"],
    ["number", "88%"],
    ["operator", "price <> 0"],
  ];
  it.each(samples)("the %s rule matches %j", (ruleName, sample) => {
    expect(toJsRegExp(grammar.repository[ruleName].match).test(sample)).toBe(true);
  });

  it("covers every keyword line of the bundled fixtures", () => {
    const key = toJsRegExp(grammar.repository.key.match);
    const section = toJsRegExp(grammar.repository.section.match);
    for (const name of ["melanoma", "gender_coref", "movie_reviews"]) {
      const fixture = readFileSync(
        join(root, "..", "tests", "fixtures", `${name}.ddesc`),
        "utf8",
      );
      for (const line of fixture.split("\n")) {
        // Every line that opens with a word and a colon starts with a
        // keyword phrase in this language; rule lines (Inv ...) do not.
        const keywordLine =
          /^[ \t]*[A-Za-z][A-Za-z -]*:/.test(line) && !/^[ \t]*inv\b/i.test(line);
        if (keywordLine) {
          expect(key.test(line) || section.test(line), line).toBe(true);
        }
      }
    }
  });
});
