"""Client for external model adapters.

An adapter is a subprocess speaking line-delimited JSON on stdin/stdout.
Requests: {"op": "info"}, {"op": "embed", "texts": [...]},
{"op": "score", "pairs": [[query, code], ...]}. Each request gets exactly
one response line: {"name", "type", "dim"?} for info, {"vectors": [[...]]}
for embed, {"scores": [...]} for score, or {"error": "..."} on failure.
"""

from __future__ import annotations

import json
import shlex
import subprocess

import numpy as np

from .errors import AdapterError

BATCH_LIMIT = 256


class AdapterClient:
    """Owns one adapter subprocess and serializes requests to it."""

    def __init__(self, command: str | list[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        if not argv:
            raise AdapterError("empty adapter command")
        self.command = argv
        try:
            self._proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise AdapterError(f"cannot launch adapter {argv[0]!r}: {exc}") from exc

    def _request(self, payload: dict) -> dict:
        proc = self._proc
        if proc.poll() is not None:
            raise AdapterError(f"adapter exited with status {proc.returncode}")
        try:
            proc.stdin.write(json.dumps(payload) + "\n")
            proc.stdin.flush()
            line = proc.stdout.readline()
        except (BrokenPipeError, OSError) as exc:
            raise AdapterError(f"adapter pipe failed: {exc}") from exc
        if not line:
            raise AdapterError(
                f"adapter closed its output (exit status {proc.poll()})"
            )
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            raise AdapterError(f"adapter sent malformed JSON: {line!r}") from exc
        if not isinstance(response, dict):
            raise AdapterError(f"adapter response is not an object: {line!r}")
        if "error" in response:
            raise AdapterError(f"adapter reported an error: {response['error']}")
        return response

    def info(self) -> dict:
        response = self._request({"op": "info"})
        for key in ("name", "type"):
            if key not in response:
                raise AdapterError(f"adapter info response is missing {key!r}")
        return response

    def embed(self, texts: list[str]) -> np.ndarray:
        if len(texts) > BATCH_LIMIT:
            raise AdapterError(
                f"embed batch of {len(texts)} exceeds the adapter limit of {BATCH_LIMIT}"
            )
        response = self._request({"op": "embed", "texts": list(texts)})
        vectors = response.get("vectors")
        if vectors is None:
            raise AdapterError("adapter embed response is missing 'vectors'")
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != len(texts):
            raise AdapterError(
                f"adapter returned {arr.shape[0] if arr.ndim == 2 else 'malformed'} "
                f"vectors for {len(texts)} texts"
            )
        return arr

    def score(self, pairs: list[tuple[str, str]]) -> np.ndarray:
        if len(pairs) > BATCH_LIMIT:
            raise AdapterError(
                f"score batch of {len(pairs)} exceeds the adapter limit of {BATCH_LIMIT}"
            )
        response = self._request({"op": "score", "pairs": [list(p) for p in pairs]})
        scores = response.get("scores")
        if scores is None:
            raise AdapterError("adapter score response is missing 'scores'")
        arr = np.asarray(scores, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != len(pairs):
            raise AdapterError(
                f"adapter returned {arr.shape[0] if arr.ndim == 1 else 'malformed'} "
                f"scores for {len(pairs)} pairs"
            )
        return arr

    def close(self) -> None:
        proc = self._proc
        if proc.poll() is None:
            try:
                proc.stdin.close()
            except OSError:
                pass
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()

    def __enter__(self) -> "AdapterClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
