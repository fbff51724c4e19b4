"""Lexical matching channels: Jaccard, bag-of-words, TF-IDF, and Okapi BM25
over one shared inverted index.

The index keeps postings in a CSR-by-term layout so the per-query scoring
loops run inside the kernel backend (numba by default, numpy fallback).
Single-document scorers use the same statistics via binary search and agree
with the batch path to float64 rounding.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .corpus import Corpus
from .errors import DataError, UsageError
from .textprep import PrepConfig, TokenStream, preprocess

LEXICAL_METHODS = ("jaccard", "bow", "tfidf", "bm25")

RankedList = list[tuple[str, float]]


@dataclass
class BM25Params:
    k1: float = 1.5
    b: float = 0.75
    epsilon: float = 0.25  # floor factor for negative idf

    def __post_init__(self) -> None:
        if self.k1 < 0:
            raise UsageError(f"k1 must be >= 0, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise UsageError(f"b must be in [0, 1], got {self.b}")
        if self.epsilon < 0:
            raise UsageError(f"epsilon must be >= 0, got {self.epsilon}")

    def key(self) -> tuple[float, float, float]:
        return (self.k1, self.b, self.epsilon)


@dataclass
class InvertedIndex:
    """Term postings plus the per-document statistics the scorers need."""

    vocabulary: dict[str, int]
    offsets: np.ndarray  # int64, len V+1; postings of term t at [offsets[t], offsets[t+1])
    post_docs: np.ndarray  # int64 doc ordinals, sorted within each term
    post_tfs: np.ndarray  # float64 term frequencies
    doc_lengths: np.ndarray  # int64 token counts
    doc_count: int
    prep: PrepConfig
    ids: list[str]
    df: np.ndarray = field(init=False)
    doc_distinct: np.ndarray = field(init=False)
    avgdl: float = field(init=False)
    bow_norms: np.ndarray = field(init=False)
    tfidf_idf: np.ndarray = field(init=False)
    tfidf_norms: np.ndarray = field(init=False)
    _bm25_cache: dict = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        n, v = self.doc_count, len(self.vocabulary)
        self.df = np.diff(self.offsets).astype(np.float64)
        hits = np.bincount(self.post_docs, minlength=n) if len(self.post_docs) else np.zeros(n)
        self.doc_distinct = hits.astype(np.int64)
        total = float(self.doc_lengths.sum())
        self.avgdl = total / n if n and total > 0 else 1.0
        sq = np.bincount(self.post_docs, weights=self.post_tfs**2, minlength=n)
        self.bow_norms = np.sqrt(sq)
        # smoothed idf: ln((1+N)/(1+df)) + 1
        self.tfidf_idf = np.log((1.0 + n) / (1.0 + self.df)) + 1.0 if v else np.zeros(0)
        post_terms = np.repeat(np.arange(v, dtype=np.int64), np.diff(self.offsets))
        w = self.post_tfs * self.tfidf_idf[post_terms] if v else self.post_tfs
        self.tfidf_norms = np.sqrt(np.bincount(self.post_docs, weights=w**2, minlength=n))

    def tfidf_idf_of(self, df: float) -> float:
        """Smoothed idf for an arbitrary document frequency (0 for unseen terms)."""
        return math.log((1.0 + self.doc_count) / (1.0 + df)) + 1.0

    def bm25_idf(self, params: BM25Params) -> np.ndarray:
        """Okapi idf per term with the negative-idf floor applied."""
        cached = self._bm25_cache.get(params.key())
        if cached is not None:
            return cached
        n = self.doc_count
        raw = np.log((n - self.df + 0.5) / (self.df + 0.5)) if len(self.df) else np.zeros(0)
        positive = raw[raw > 0]
        mean_pos = float(positive.mean()) if len(positive) else 0.0
        idf = np.where(raw < 0, params.epsilon * mean_pos, raw)
        self._bm25_cache[params.key()] = idf
        return idf

    def term_freq(self, term_id: int, ordinal: int) -> float:
        """tf of a term in a document, via binary search in its postings."""
        lo, hi = self.offsets[term_id], self.offsets[term_id + 1]
        pos = lo + np.searchsorted(self.post_docs[lo:hi], ordinal)
        if pos < hi and self.post_docs[pos] == ordinal:
            return float(self.post_tfs[pos])
        return 0.0


def build_index(corpus: Corpus, cfg: PrepConfig) -> InvertedIndex:
    """Index the preprocessed code of every document. Deterministic."""
    if len(corpus) == 0:
        raise DataError("cannot build an index over an empty corpus")
    vocabulary: dict[str, int] = {}
    per_term_docs: list[list[int]] = []
    per_term_tfs: list[list[float]] = []
    doc_lengths = np.zeros(len(corpus), dtype=np.int64)
    for ordinal, doc in enumerate(corpus.documents):
        tokens = preprocess(doc.code, cfg)
        doc.tokens = tokens
        doc_lengths[ordinal] = len(tokens)
        for term, tf in Counter(tokens).items():
            tid = vocabulary.get(term)
            if tid is None:
                tid = len(vocabulary)
                vocabulary[term] = tid
                per_term_docs.append([])
                per_term_tfs.append([])
            per_term_docs[tid].append(ordinal)
            per_term_tfs[tid].append(float(tf))
    offsets = np.zeros(len(vocabulary) + 1, dtype=np.int64)
    if vocabulary:
        np.cumsum([len(docs) for docs in per_term_docs], out=offsets[1:])
    post_docs = np.array([d for docs in per_term_docs for d in docs], dtype=np.int64)
    post_tfs = np.array([t for tfs in per_term_tfs for t in tfs], dtype=np.float64)
    return InvertedIndex(
        vocabulary=vocabulary,
        offsets=offsets,
        post_docs=post_docs,
        post_tfs=post_tfs,
        doc_lengths=doc_lengths,
        doc_count=len(corpus),
        prep=cfg,
        ids=list(corpus.ids),
    )


def prepare_query(text: str, index: InvertedIndex) -> TokenStream:
    """Preprocess query text under the index's own config."""
    return preprocess(text, index.prep)


def _query_vocab_arrays(q: TokenStream, index: InvertedIndex):
    """Distinct in-vocabulary query terms as (term_ids, counts) arrays."""
    ids: list[int] = []
    counts: list[float] = []
    for term, cnt in Counter(q).items():
        tid = index.vocabulary.get(term)
        if tid is not None:
            ids.append(tid)
            counts.append(float(cnt))
    return np.array(ids, dtype=np.int64), np.array(counts, dtype=np.float64)


def score_jaccard(q: TokenStream, index: InvertedIndex, ordinal: int) -> float:
    q_set = set(q)
    inter = 0
    for term in q_set:
        tid = index.vocabulary.get(term)
        if tid is not None and index.term_freq(tid, ordinal) > 0:
            inter += 1
    union = len(q_set) + int(index.doc_distinct[ordinal]) - inter
    return inter / union if union else 0.0


def score_bow(q: TokenStream, index: InvertedIndex, ordinal: int) -> float:
    q_counts = Counter(q)
    q_norm = math.sqrt(sum(c * c for c in q_counts.values()))
    d_norm = float(index.bow_norms[ordinal])
    if q_norm == 0.0 or d_norm == 0.0:
        return 0.0
    dot = 0.0
    for term, cnt in q_counts.items():
        tid = index.vocabulary.get(term)
        if tid is not None:
            dot += cnt * index.term_freq(tid, ordinal)
    return dot / (q_norm * d_norm)


def score_tfidf(q: TokenStream, index: InvertedIndex, ordinal: int) -> float:
    q_counts = Counter(q)
    q_sq = 0.0
    dot = 0.0
    for term, cnt in q_counts.items():
        tid = index.vocabulary.get(term)
        df = float(index.df[tid]) if tid is not None else 0.0
        w = cnt * index.tfidf_idf_of(df)
        q_sq += w * w
        if tid is not None:
            dot += w * index.term_freq(tid, ordinal) * index.tfidf_idf[tid]
    q_norm = math.sqrt(q_sq)
    d_norm = float(index.tfidf_norms[ordinal])
    if q_norm == 0.0 or d_norm == 0.0:
        return 0.0
    return dot / (q_norm * d_norm)


def score_bm25(
    q: TokenStream, index: InvertedIndex, ordinal: int, params: BM25Params | None = None
) -> float:
    params = params or BM25Params()
    idf = index.bm25_idf(params)
    dl_norm = 1.0 - params.b + params.b * float(index.doc_lengths[ordinal]) / index.avgdl
    score = 0.0
    for term, cnt in Counter(q).items():
        tid = index.vocabulary.get(term)
        if tid is None:
            continue
        tf = index.term_freq(tid, ordinal)
        if tf > 0:
            score += cnt * idf[tid] * tf * (params.k1 + 1.0) / (tf + params.k1 * dl_norm)
    return score


def score_all(
    q: TokenStream, index: InvertedIndex, method: str, params: BM25Params | None = None
) -> np.ndarray:
    """Scores of the query against every document, as a float64 vector."""
    if method not in LEXICAL_METHODS:
        raise UsageError(f"unknown lexical method {method!r}; valid: {', '.join(LEXICAL_METHODS)}")
    n = index.doc_count
    term_ids, q_counts = _query_vocab_arrays(q, index)
    if method == "bm25":
        p = params or BM25Params()
        idf = index.bm25_idf(p)
        weights = q_counts * idf[term_ids] if len(term_ids) else q_counts
        dl_norm = 1.0 - p.b + p.b * index.doc_lengths.astype(np.float64) / index.avgdl
        return kernels.bm25_accumulate(
            index.offsets, index.post_docs, index.post_tfs, term_ids, weights, dl_norm, p.k1, n
        )
    if method == "jaccard":
        inter = kernels.accumulate_presence(index.offsets, index.post_docs, term_ids, n)
        q_distinct = float(len(set(q)))
        union = q_distinct + index.doc_distinct.astype(np.float64) - inter
        out = np.zeros(n, dtype=np.float64)
        np.divide(inter, union, out=out, where=union > 0)
        return out
    if method == "bow":
        q_norm = math.sqrt(float(sum(c * c for c in Counter(q).values())))
        dot = kernels.accumulate_weighted(
            index.offsets, index.post_docs, index.post_tfs, term_ids, q_counts, n
        )
        denom = q_norm * index.bow_norms
    else:  # tfidf
        q_sq = 0.0
        for term, cnt in Counter(q).items():
            tid = index.vocabulary.get(term)
            df = float(index.df[tid]) if tid is not None else 0.0
            w = cnt * index.tfidf_idf_of(df)
            q_sq += w * w
        q_norm = math.sqrt(q_sq)
        weights = q_counts * (index.tfidf_idf[term_ids] ** 2) if len(term_ids) else q_counts
        dot = kernels.accumulate_weighted(
            index.offsets, index.post_docs, index.post_tfs, term_ids, weights, n
        )
        denom = q_norm * index.tfidf_norms
    out = np.zeros(n, dtype=np.float64)
    np.divide(dot, denom, out=out, where=denom > 0)
    return out


def rank_descending(scores: np.ndarray, k: int) -> np.ndarray:
    """Indices of the top-k scores, descending, ties by ascending ordinal."""
    order = np.argsort(-scores, kind="stable")
    return order[: min(k, len(scores))]


def top_k_lexical(
    q: TokenStream,
    index: InvertedIndex,
    method: str,
    k: int,
    params: BM25Params | None = None,
) -> RankedList:
    if k < 1:
        raise UsageError(f"K must be >= 1, got {k}")
    scores = score_all(q, index, method, params)
    top = rank_descending(scores, k)
    return [(index.ids[d], float(scores[d])) for d in top]
