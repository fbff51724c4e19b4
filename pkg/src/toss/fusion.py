"""Two-stage search: multi-channel recall, candidate union, pair-scorer
rerank. Also the six data-fusion baselines (combsum, combmnz, combanz,
max, min, borda) over zero-one normalized score pools.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .corpus import Corpus
from .crossrank import PairScorerHandle, score_pairs
from .dense import EmbeddingMatrix, EmbeddingProviderHandle, embed_query, top_k_dense
from .errors import UsageError
from .lexical import BM25Params, InvertedIndex, RankedList, top_k_lexical
from .textprep import preprocess

CHANNEL_KINDS = ("lexical-jaccard", "lexical-bow", "lexical-tfidf", "lexical-bm25", "dense")
FUSION_METHODS = ("combsum", "combmnz", "combanz", "max", "min", "borda")


@dataclass(frozen=True)
class ChannelSpec:
    name: str
    kind: str
    k: int

    def __post_init__(self) -> None:
        if self.kind not in CHANNEL_KINDS:
            raise UsageError(
                f"unknown channel kind {self.kind!r}; valid: {', '.join(CHANNEL_KINDS)}"
            )
        if self.k < 1:
            raise UsageError(f"channel {self.name!r}: K must be >= 1, got {self.k}")


@dataclass
class DenseArtifact:
    """The dense channel's backing state: matrix plus the query-side provider."""

    matrix: EmbeddingMatrix
    provider: EmbeddingProviderHandle
    metric: str = "cosine"


@dataclass
class CandidateSet:
    query_id: str
    members: set[str]
    per_channel: dict[str, RankedList]


def recall_channel(
    query: str,
    channel: ChannelSpec,
    artifact: InvertedIndex | DenseArtifact,
    query_id: str | None = None,
    bm25: BM25Params | None = None,
) -> RankedList:
    """The channel's top-K ranking for one query."""
    if channel.kind == "dense":
        if not isinstance(artifact, DenseArtifact):
            raise UsageError(f"channel {channel.name!r} is dense but got a lexical index")
        qvec = embed_query(query, artifact.provider, key=query_id)
        return top_k_dense(qvec, artifact.matrix, channel.k, artifact.metric)
    if not isinstance(artifact, InvertedIndex):
        raise UsageError(f"channel {channel.name!r} is lexical but got a dense artifact")
    method = channel.kind.removeprefix("lexical-")
    tokens = preprocess(query, artifact.prep)
    return top_k_lexical(tokens, artifact, method, channel.k, bm25)


def combine_candidates(query_id: str, lists: dict[str, RankedList]) -> CandidateSet:
    """Exact union of the per-channel id sets."""
    if not lists:
        raise UsageError("combine_candidates requires at least one channel")
    members: set[str] = set()
    for ranked in lists.values():
        members.update(doc_id for doc_id, _ in ranked)
    return CandidateSet(query_id=query_id, members=members, per_channel=dict(lists))


def rerank(
    candidates: CandidateSet,
    scorer: PairScorerHandle,
    query: str,
    corpus: Corpus,
) -> RankedList:
    """Score every member once, return them in descending score order with
    ties broken by ascending corpus ordinal."""
    if not candidates.members:
        raise UsageError("rerank requires a non-empty candidate set")
    ordered = sorted(candidates.members, key=corpus.ordinal_of)
    codes = [(doc_id, corpus.documents[corpus.ordinal_of(doc_id)].code) for doc_id in ordered]
    scores = score_pairs(scorer, query, codes, query_id=candidates.query_id)
    order = np.argsort(-np.asarray(scores, dtype=np.float64), kind="stable")
    return [(ordered[i], float(scores[i])) for i in order]


@dataclass
class SearchArtifacts:
    """Everything a query needs: corpus, lexical index, optional dense state."""

    corpus: Corpus
    index: InvertedIndex | None = None
    dense: DenseArtifact | None = None
    bm25: BM25Params | None = None

    def for_channel(self, channel: ChannelSpec) -> InvertedIndex | DenseArtifact:
        if channel.kind == "dense":
            if self.dense is None:
                raise UsageError(f"channel {channel.name!r} needs a dense index")
            return self.dense
        if self.index is None:
            raise UsageError(f"channel {channel.name!r} needs a lexical index")
        return self.index


def toss_search_detail(
    query: str,
    channels: list[ChannelSpec],
    scorer: PairScorerHandle,
    artifacts: SearchArtifacts,
    query_id: str | None = None,
) -> tuple[RankedList, CandidateSet]:
    """Run the full two-stage pipeline; also return the candidate set."""
    if not channels:
        raise UsageError("toss_search requires at least one channel")
    names = [c.name for c in channels]
    if len(set(names)) != len(names):
        raise UsageError(f"duplicate channel names: {names}")
    lists = {
        c.name: recall_channel(
            query, c, artifacts.for_channel(c), query_id=query_id, bm25=artifacts.bm25
        )
        for c in channels
    }
    candidates = combine_candidates(query_id or "", lists)
    ranked = rerank(candidates, scorer, query, artifacts.corpus)
    return ranked, candidates


def toss_search(
    query: str,
    channels: list[ChannelSpec],
    scorer: PairScorerHandle,
    artifacts: SearchArtifacts,
    query_id: str | None = None,
) -> RankedList:
    """Candidates outside the recall union never appear in the output."""
    ranked, _ = toss_search_detail(query, channels, scorer, artifacts, query_id)
    return ranked


def normalize_zero_one(scores: list[float]) -> list[float]:
    """(s - min)/(max - min); a constant list maps to all zeros."""
    if not scores:
        raise UsageError("normalize_zero_one requires a non-empty list")
    lo, hi = min(scores), max(scores)
    if hi == lo:
        return [0.0] * len(scores)
    span = hi - lo
    return [(s - lo) / span for s in scores]


def fuse_scores(
    per_model: dict[str, RankedList],
    method: str,
    ordinal_of: Callable[[str], int],
) -> RankedList:
    """Fuse several rankings over their pooled documents.

    Scores are zero-one normalized per model first (borda ignores them and
    uses ranking points N - rank over the pool size N); a document absent
    from a model's list contributes 0 for that model.
    """
    if method not in FUSION_METHODS:
        raise UsageError(f"unknown fusion method {method!r}; valid: {', '.join(FUSION_METHODS)}")
    if len(per_model) < 2:
        raise UsageError("fuse_scores requires at least two models")
    pool: set[str] = set()
    for ranked in per_model.values():
        pool.update(doc_id for doc_id, _ in ranked)
    pool_ids = sorted(pool, key=ordinal_of)
    n = len(pool_ids)
    col_of = {doc_id: i for i, doc_id in enumerate(pool_ids)}
    # rows: one normalized score (or borda point) vector per model, absent docs 0
    table = np.zeros((len(per_model), n), dtype=np.float64)
    for row, name in enumerate(sorted(per_model)):
        ranked = sorted(
            per_model[name], key=lambda e: (-e[1], ordinal_of(e[0]))
        )
        if method == "borda":
            for rank, (doc_id, _) in enumerate(ranked, start=1):
                table[row, col_of[doc_id]] = float(n - rank)
        else:
            normed = normalize_zero_one([s for _, s in ranked])
            for (doc_id, _), s in zip(ranked, normed):
                table[row, col_of[doc_id]] = s
    if method in ("combsum", "borda"):
        fused = table.sum(axis=0)
    elif method == "combmnz":
        fused = table.sum(axis=0) * (table != 0).sum(axis=0)
    elif method == "combanz":
        nnz = (table != 0).sum(axis=0)
        fused = np.divide(
            table.sum(axis=0), nnz, out=np.zeros(n), where=nnz > 0
        )
    elif method == "max":
        fused = table.max(axis=0)
    else:  # min
        fused = table.min(axis=0)
    order = np.argsort(-fused, kind="stable")
    return [(pool_ids[i], float(fused[i])) for i in order]
