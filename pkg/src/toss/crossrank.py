"""Second-stage pair scorers: a pluggable function scoring (query, code)
pairs jointly, with deterministic test doubles.

Kinds:
  stub     BM25 over the preprocessed pair texts, using a built index's
           corpus statistics
  oracle   1.0 for the active query's ground-truth document, 0.0 otherwise
  adapter  external subprocess speaking the score wire protocol

Every handle counts the pairs it has scored; after a two-stage query the
count equals the candidate union size exactly.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from .adapter_client import BATCH_LIMIT, AdapterClient
from .errors import AdapterError, UsageError
from .lexical import BM25Params, InvertedIndex
from .textprep import preprocess

SCORER_KINDS = ("stub", "oracle", "adapter")


@dataclass
class PairScorerHandle:
    kind: str
    config: dict[str, Any]
    name: str
    _pairs_scored: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def pairs_scored(self) -> int:
        return self._pairs_scored

    def _count(self, n: int) -> None:
        with self._lock:
            self._pairs_scored += n

    def reset_count(self) -> None:
        with self._lock:
            self._pairs_scored = 0


def stub_scorer(index: InvertedIndex, params: BM25Params | None = None) -> PairScorerHandle:
    """BM25 of the query against each code text, under the index's prep and
    corpus statistics. Matches the lexical channel's scores on corpus docs."""
    cfg = {"index": index, "params": params or BM25Params()}
    return PairScorerHandle(kind="stub", config=cfg, name="stub-bm25")


def oracle_scorer(gt: dict[str, str]) -> PairScorerHandle:
    """1.0 for the mapped ground-truth doc of the active query id, else 0.0.
    Unknown or missing query id scores everything 0.0."""
    return PairScorerHandle(kind="oracle", config={"gt": dict(gt)}, name="oracle")


def adapter_scorer(command: str | list[str]) -> PairScorerHandle:
    client = AdapterClient(command)
    info = client.info()
    if info["type"] != "pair_scorer":
        client.close()
        raise AdapterError(
            f"adapter {info['name']!r} has type {info['type']!r}, expected 'pair_scorer'"
        )
    return PairScorerHandle(kind="adapter", config={"client": client}, name=str(info["name"]))


def _stub_score_one(query: str, code: str, index: InvertedIndex, params: BM25Params) -> float:
    q_tokens = preprocess(query, index.prep)
    d_tokens = preprocess(code, index.prep)
    if not d_tokens:
        return 0.0
    idf = index.bm25_idf(params)
    tf = Counter(d_tokens)
    dl_norm = 1.0 - params.b + params.b * len(d_tokens) / index.avgdl
    score = 0.0
    for term, cnt in Counter(q_tokens).items():
        tid = index.vocabulary.get(term)
        if tid is None:
            continue
        t = float(tf.get(term, 0))
        if t > 0:
            score += cnt * idf[tid] * t * (params.k1 + 1.0) / (t + params.k1 * dl_norm)
    return score


def score_pairs(
    scorer: PairScorerHandle,
    query: str,
    codes: list[tuple[str, str]],
    query_id: str | None = None,
) -> list[float]:
    """One score per (doc-id, code-text) entry, order-aligned with the input.

    The oracle kind keys off ``query_id``; the other kinds score the texts.
    """
    if not codes:
        raise UsageError("score_pairs requires a non-empty candidate list")
    if scorer.kind == "stub":
        index: InvertedIndex = scorer.config["index"]
        params: BM25Params = scorer.config["params"]
        scores = [_stub_score_one(query, text, index, params) for _, text in codes]
    elif scorer.kind == "oracle":
        target = scorer.config["gt"].get(query_id) if query_id is not None else None
        scores = [1.0 if doc_id == target else 0.0 for doc_id, _ in codes]
    elif scorer.kind == "adapter":
        client: AdapterClient = scorer.config["client"]
        scores = []
        for start in range(0, len(codes), BATCH_LIMIT):
            batch = [(query, text) for _, text in codes[start : start + BATCH_LIMIT]]
            scores.extend(float(s) for s in client.score(batch))
    else:
        raise UsageError(f"unknown scorer kind {scorer.kind!r}; valid: {', '.join(SCORER_KINDS)}")
    scorer._count(len(codes))
    return scores


def close_scorer(scorer: PairScorerHandle) -> None:
    client = scorer.config.get("client")
    if isinstance(client, AdapterClient):
        client.close()
