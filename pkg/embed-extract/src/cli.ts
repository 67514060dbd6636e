#!/usr/bin/env node
/**
 * embed-extract: encode an aligned parallel corpus into per-language
 * embedding files.
 *
 * Exit codes: 0 success, 1 usage/alignment error, 2 environment error
 * (model not loadable / endpoint unreachable).
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { EnvironmentError } from "./encoder.js";
import { AlignmentError, extract } from "./extract.js";

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .option("corpus", {
      type: "string",
      demandOption: true,
      describe: "directory of <lang>.txt files, one sentence per line, aligned",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output directory for <lang>.txt embedding files",
    })
    .option("model", {
      type: "string",
      default: "hash-64",
      describe: "model tag (hash-64, hash-256, or http:<dim>:<url>)",
    })
    .option("pooling", {
      choices: ["mean", "cls"] as const,
      default: "mean" as const,
      describe: "token pooling (default: mean)",
    })
    .option("normalize", {
      type: "boolean",
      default: true,
      describe: "L2-normalize each sentence vector (default: true)",
    })
    .option("date", {
      type: "string",
      describe: "override the provenance date for reproducible output",
    })
    .strict()
    .fail((msg) => {
      throw new AlignmentError(msg);
    })
    .parse();

  const files = await extract({
    corpusDir: args.corpus,
    modelTag: args.model,
    pooling: args.pooling,
    normalize: args.normalize,
    outDir: args.out,
    date: args.date,
  });
  for (const f of files) process.stdout.write(f + "\n");
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;

if (invokedDirectly) {
  main(hideBin(process.argv))
    .then((code) => process.exit(code))
    .catch((err) => {
      process.stderr.write(`embed-extract: error: ${err.message}\n`);
      process.exit(err instanceof EnvironmentError ? 2 : 1);
    });
}
