#!/usr/bin/env node
import { pathToFileURL } from "node:url";

import { hashedBowEmbedder, tokenOverlapScorer } from "./model.js";
import type { Session } from "./protocol.js";
import { serve } from "./serve.js";

const USAGE = `usage: toss-adapter <embedder|pair_scorer> [--dim N] [--name NAME]

Serves the line-delimited JSON scoring protocol on stdin/stdout. One process
serves one model in one mode; --dim applies to embedder mode only.`;

interface Args {
  mode: "embedder" | "pair_scorer";
  dim: number;
  name?: string;
}

export function parseArgs(argv: string[]): Args {
  const [mode, ...rest] = argv;
  if (mode !== "embedder" && mode !== "pair_scorer") {
    throw new Error(USAGE);
  }
  const args: Args = { mode, dim: 128 };
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}\n${USAGE}`);
    if (flag === "--dim") {
      args.dim = Number(value);
      if (!Number.isInteger(args.dim) || args.dim < 1) {
        throw new Error(`--dim must be a positive integer, got ${value}`);
      }
    } else if (flag === "--name") {
      args.name = value;
    } else {
      throw new Error(`unknown flag ${flag}\n${USAGE}`);
    }
  }
  return args;
}

export function sessionFor(args: Args): Session {
  return args.mode === "embedder"
    ? { mode: "embedder", model: hashedBowEmbedder(args.dim, args.name) }
    : { mode: "pair_scorer", model: tokenOverlapScorer(args.name) };
}

const entryPath = process.argv[1];
if (entryPath !== undefined && import.meta.url === pathToFileURL(entryPath).href) {
  let session: Session;
  try {
    session = sessionFor(parseArgs(process.argv.slice(2)));
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  }
  serve(session).then(
    () => process.exit(0),
    (err) => {
      console.error(err instanceof Error ? err.message : String(err));
      process.exit(1);
    },
  );
}
