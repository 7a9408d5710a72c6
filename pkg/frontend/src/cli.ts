#!/usr/bin/env node
/** Render figures from a single spec or a manifest listing many. */

import { readFileSync, writeFileSync } from "fs";

import { PlotSpec, render } from "./plots.js";
import { SchemaError } from "./csv.js";

function usage(): never {
  console.error(
    "usage: trotterlab-figures render <spec.json>\n" +
      "       trotterlab-figures batch <manifest.json>\n" +
      "spec: {kind, input, output, title?, guides?: [{exponent, anchorX, anchorY}]}\n" +
      "manifest: {figures: [spec, ...]}",
  );
  process.exit(2);
}

function renderSpec(spec: PlotSpec) {
  const svg = render(spec);
  writeFileSync(spec.output, svg);
  console.log(`wrote ${spec.output}`);
}

export function main(argv: string[]): number {
  if (argv.length !== 2) usage();
  const [command, path] = argv;
  try {
    if (command === "render") {
      renderSpec(JSON.parse(readFileSync(path, "utf-8")) as PlotSpec);
    } else if (command === "batch") {
      const manifest = JSON.parse(readFileSync(path, "utf-8")) as {
        figures: PlotSpec[];
      };
      for (const spec of manifest.figures) renderSpec(spec);
    } else {
      usage();
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
