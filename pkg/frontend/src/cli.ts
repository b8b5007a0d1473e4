#!/usr/bin/env node
/**
 * render --panel PATH.spec --out FILE.svg
 *
 * Exit codes: 0 success, 1 any error (bad spec, unreadable CSV, missing
 * columns — the message lists the available columns).
 */

import { parseArgs } from "node:util";

import { renderPanelFile } from "./index.js";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        panel: { type: "string" },
        out: { type: "string" },
      },
      strict: true,
    });
  } catch (err) {
    process.stderr.write(`render: ${(err as Error).message}\n`);
    return 1;
  }
  const { panel, out } = args.values;
  if (panel === undefined || out === undefined) {
    process.stderr.write("usage: render --panel PATH.spec --out FILE.svg\n");
    return 1;
  }
  try {
    renderPanelFile(panel, out);
  } catch (err) {
    process.stderr.write(`render: ${(err as Error).message}\n`);
    return 1;
  }
  process.stdout.write(`${out}\n`);
  return 0;
}

process.exit(main(process.argv.slice(2)));
