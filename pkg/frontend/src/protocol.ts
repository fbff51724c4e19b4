import type { EmbedderModel, PairScorerModel } from "./model.js";

export const BATCH_LIMIT = 256;

export type Session =
  | { mode: "embedder"; model: EmbedderModel }
  | { mode: "pair_scorer"; model: PairScorerModel };

export type Reply =
  | { name: string; type: "embedder" | "pair_scorer"; dim?: number }
  | { vectors: number[][] }
  | { scores: number[] }
  | { error: string };

function isStringArray(value: unknown): value is string[] {
  return Array.isArray(value) && value.every((v) => typeof v === "string");
}

function isPairArray(value: unknown): value is [string, string][] {
  return (
    Array.isArray(value) &&
    value.every(
      (p) =>
        Array.isArray(p) &&
        p.length === 2 &&
        typeof p[0] === "string" &&
        typeof p[1] === "string",
    )
  );
}

/** Answer one protocol request. Never throws; failures become error replies. */
export function handleRequest(session: Session, line: string): Reply {
  let request: unknown;
  try {
    request = JSON.parse(line);
  } catch {
    return { error: "malformed request: not valid JSON" };
  }
  if (typeof request !== "object" || request === null || Array.isArray(request)) {
    return { error: "malformed request: expected a JSON object" };
  }
  const op = (request as Record<string, unknown>)["op"];
  try {
    switch (op) {
      case "info":
        return session.mode === "embedder"
          ? { name: session.model.name, type: "embedder", dim: session.model.dim }
          : { name: session.model.name, type: "pair_scorer" };
      case "embed": {
        if (session.mode !== "embedder") {
          return { error: "this adapter scores pairs; it does not embed" };
        }
        const texts = (request as Record<string, unknown>)["texts"];
        if (!isStringArray(texts)) {
          return { error: "embed requires 'texts': an array of strings" };
        }
        if (texts.length > BATCH_LIMIT) {
          return { error: `batch of ${texts.length} exceeds the limit of ${BATCH_LIMIT}` };
        }
        return { vectors: texts.map((t) => session.model.embed(t)) };
      }
      case "score": {
        if (session.mode !== "pair_scorer") {
          return { error: "this adapter embeds; it does not score pairs" };
        }
        const pairs = (request as Record<string, unknown>)["pairs"];
        if (!isPairArray(pairs)) {
          return { error: "score requires 'pairs': an array of [query, code] string pairs" };
        }
        if (pairs.length > BATCH_LIMIT) {
          return { error: `batch of ${pairs.length} exceeds the limit of ${BATCH_LIMIT}` };
        }
        return { scores: pairs.map(([q, c]) => session.model.score(q, c)) };
      }
      default:
        return { error: `unknown op ${JSON.stringify(op)}` };
    }
  } catch (err) {
    return { error: `model failure: ${err instanceof Error ? err.message : String(err)}` };
  }
}
