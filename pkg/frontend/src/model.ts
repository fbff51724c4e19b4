import { createHash } from "node:crypto";

// Inputs are truncated to a fixed prefix before any scoring so that overlong
// code bodies cannot change results between hosts or runs.
export const MAX_TEXT_CHARS = 4096;

export interface EmbedderModel {
  readonly name: string;
  readonly dim: number;
  embed(text: string): number[];
}

export interface PairScorerModel {
  readonly name: string;
  score(query: string, code: string): number;
}

export function tokenize(text: string): string[] {
  return text
    .slice(0, MAX_TEXT_CHARS)
    .toLowerCase()
    .split(/[^a-z0-9]+/)
    .filter((t) => t.length > 0);
}

function bucketOf(token: string, dim: number): number {
  const digest = createHash("sha256").update(token, "utf8").digest();
  return Number(digest.readBigUInt64BE(0) % BigInt(dim));
}

/**
 * Hashed bag-of-words embedder: each token increments one sha256-chosen
 * bucket, and the histogram is L2-normalized. Text without tokens maps to
 * the zero vector.
 */
export function hashedBowEmbedder(dim: number, name?: string): EmbedderModel {
  if (!Number.isInteger(dim) || dim < 1) {
    throw new Error(`dim must be a positive integer, got ${dim}`);
  }
  return {
    name: name ?? `hashed-bow-${dim}`,
    dim,
    embed(text: string): number[] {
      const vec = new Array<number>(dim).fill(0);
      for (const token of tokenize(text)) {
        const bucket = bucketOf(token, dim);
        vec[bucket] = (vec[bucket] ?? 0) + 1;
      }
      const norm = Math.sqrt(vec.reduce((acc, v) => acc + v * v, 0));
      return norm > 0 ? vec.map((v) => v / norm) : vec;
    },
  };
}

/**
 * Token-overlap pair scorer: Jaccard similarity of the two token sets.
 * Either side tokenizing to nothing scores 0.
 */
export function tokenOverlapScorer(name?: string): PairScorerModel {
  return {
    name: name ?? "token-overlap",
    score(query: string, code: string): number {
      const q = new Set(tokenize(query));
      const c = new Set(tokenize(code));
      if (q.size === 0 || c.size === 0) return 0;
      let inter = 0;
      for (const t of q) {
        if (c.has(t)) inter += 1;
      }
      return inter / (q.size + c.size - inter);
    },
  };
}
