/**
 * Batch extraction: aligned parallel corpus -> one embedding file per
 * language, in the `lang n d` text format consumed by the langalloc
 * similarity tooling, with `#` provenance comments (model tag, pooling,
 * date) ahead of the header.
 */

import { promises as fs } from "node:fs";
import * as path from "node:path";

import { Encoder, Pooling, loadEncoder } from "./encoder.js";

export class AlignmentError extends Error {}

export interface ExtractionJob {
  corpusDir: string;
  modelTag: string;
  pooling: Pooling;
  normalize: boolean;
  outDir: string;
  /** Override the provenance timestamp (ISO date) for reproducible output. */
  date?: string;
}

export interface LanguageCorpus {
  language: string;
  sentences: string[];
}

/** Read every `<lang>.txt` in the corpus directory, one sentence per line. */
export async function loadCorpusDir(dir: string): Promise<LanguageCorpus[]> {
  const names = (await fs.readdir(dir)).filter((n) => n.endsWith(".txt")).sort();
  if (names.length === 0) {
    throw new AlignmentError(`no .txt corpus files in ${dir}`);
  }
  const corpora: LanguageCorpus[] = [];
  for (const name of names) {
    const text = await fs.readFile(path.join(dir, name), "utf8");
    const sentences = text.split("\n");
    while (sentences.length > 0 && sentences[sentences.length - 1] === "") {
      sentences.pop(); // trailing newline, not an empty sentence
    }
    corpora.push({ language: path.basename(name, ".txt"), sentences });
  }
  const n = corpora[0].sentences.length;
  for (const c of corpora) {
    if (c.sentences.length !== n) {
      throw new AlignmentError(
        `corpus is not aligned: ${corpora[0].language} has ${n} lines but ` +
          `${c.language} has ${c.sentences.length}`,
      );
    }
  }
  if (n < 2) {
    throw new AlignmentError(`need at least 2 aligned sentences, got ${n}`);
  }
  return corpora;
}

function l2Normalize(vec: number[]): number[] {
  const norm = Math.sqrt(vec.reduce((s, v) => s + v * v, 0));
  if (norm === 0) throw new Error("zero-norm embedding row");
  return vec.map((v) => v / norm);
}

export function formatEmbeddingFile(
  language: string,
  vectors: number[][],
  comments: string[],
): string {
  const lines = comments.map((c) => `# ${c}`);
  lines.push(`${language} ${vectors.length} ${vectors[0].length}`);
  for (const vec of vectors) {
    lines.push(vec.map((v) => v.toPrecision(17)).join(" "));
  }
  return lines.join("\n") + "\n";
}

export async function encodeLanguage(
  encoder: Encoder,
  corpus: LanguageCorpus,
  pooling: Pooling,
  normalize: boolean,
): Promise<number[][]> {
  const vectors = await encoder.encode(corpus.sentences, pooling);
  return normalize ? vectors.map(l2Normalize) : vectors;
}

/** Run the whole job; returns the written file paths (one per language). */
export async function extract(job: ExtractionJob): Promise<string[]> {
  const encoder = loadEncoder(job.modelTag);
  const corpora = await loadCorpusDir(job.corpusDir);
  await fs.mkdir(job.outDir, { recursive: true });
  const date = job.date ?? new Date().toISOString().slice(0, 10);
  const written: string[] = [];
  await Promise.all(
    corpora.map(async (corpus) => {
      const vectors = await encodeLanguage(
        encoder,
        corpus,
        job.pooling,
        job.normalize,
      );
      const body = formatEmbeddingFile(corpus.language, vectors, [
        `model: ${job.modelTag}`,
        `pooling: ${job.pooling}`,
        `normalize: ${job.normalize}`,
        `date: ${date}`,
      ]);
      const out = path.join(job.outDir, `${corpus.language}.txt`);
      await fs.writeFile(out, body, "utf8");
      written.push(out);
    }),
  );
  return written.sort();
}
