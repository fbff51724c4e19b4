"""Two-stage hybrid code search: fast lexical and dense channels recall
top-K candidates, their union is reranked by a pluggable pair scorer."""

from .corpus import CodeDocument, Corpus, QueryRecord, load_corpus, load_queries
from .crossrank import (
    PairScorerHandle,
    adapter_scorer,
    oracle_scorer,
    score_pairs,
    stub_scorer,
)
from .dense import (
    EmbeddingMatrix,
    EmbeddingProviderHandle,
    adapter_embedder,
    embed_corpus,
    embed_query,
    file_embedder,
    stub_embedder,
    top_k_dense,
)
from .errors import (
    AdapterError,
    ConfigMismatchError,
    DataError,
    IndexFormatError,
    TossError,
    UsageError,
)
from .fusion import (
    CandidateSet,
    ChannelSpec,
    DenseArtifact,
    SearchArtifacts,
    combine_candidates,
    fuse_scores,
    normalize_zero_one,
    recall_channel,
    rerank,
    toss_search,
    toss_search_detail,
)
from .lexical import (
    BM25Params,
    InvertedIndex,
    build_index,
    score_all,
    score_bm25,
    score_bow,
    score_jaccard,
    score_tfidf,
    top_k_lexical,
)
from .metrics import (
    EvalReport,
    OverlapReport,
    TimingReport,
    evaluate_run,
    measure_latency,
    mrr,
    overlap_stats,
    recall_at_k,
)
from .storage import (
    load_dense_matrix,
    load_lexical_index,
    save_dense_matrix,
    save_lexical_index,
)
from .textprep import PrepConfig, preprocess

__version__ = "0.1.0"

__all__ = [
    "AdapterError",
    "BM25Params",
    "CandidateSet",
    "ChannelSpec",
    "CodeDocument",
    "ConfigMismatchError",
    "Corpus",
    "DataError",
    "DenseArtifact",
    "EmbeddingMatrix",
    "EmbeddingProviderHandle",
    "EvalReport",
    "IndexFormatError",
    "InvertedIndex",
    "OverlapReport",
    "PairScorerHandle",
    "PrepConfig",
    "QueryRecord",
    "SearchArtifacts",
    "TimingReport",
    "TossError",
    "UsageError",
    "adapter_embedder",
    "adapter_scorer",
    "build_index",
    "combine_candidates",
    "embed_corpus",
    "embed_query",
    "evaluate_run",
    "file_embedder",
    "fuse_scores",
    "load_corpus",
    "load_dense_matrix",
    "load_lexical_index",
    "load_queries",
    "measure_latency",
    "mrr",
    "normalize_zero_one",
    "oracle_scorer",
    "overlap_stats",
    "preprocess",
    "recall_at_k",
    "recall_channel",
    "rerank",
    "save_dense_matrix",
    "save_lexical_index",
    "score_all",
    "score_bm25",
    "score_bow",
    "score_jaccard",
    "score_pairs",
    "score_tfidf",
    "stub_embedder",
    "stub_scorer",
    "top_k_dense",
    "top_k_lexical",
    "toss_search",
    "toss_search_detail",
]
