import { createInterface } from "node:readline";

import { handleRequest, type Session } from "./protocol.js";

/**
 * Serve the protocol over stdin/stdout, one JSON object per line, strictly
 * sequentially, until the input closes. Blank lines are ignored.
 */
export async function serve(
  session: Session,
  input: NodeJS.ReadableStream = process.stdin,
  output: NodeJS.WritableStream = process.stdout,
): Promise<void> {
  const lines = createInterface({ input, crlfDelay: Infinity });
  for await (const line of lines) {
    if (line.trim() === "") continue;
    output.write(JSON.stringify(handleRequest(session, line)) + "\n");
  }
}
