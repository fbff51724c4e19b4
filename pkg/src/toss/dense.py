"""Dense retrieval channel: document and query vectors from a pluggable
embedding provider, exhaustive similarity search over the matrix.

Providers:
  stub     deterministic hashed token histogram, L2-normalized
  file     sidecar lookup by record id ("dim N" header, "<id>\\t<floats>" lines)
  adapter  external subprocess speaking the embed wire protocol
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .adapter_client import BATCH_LIMIT, AdapterClient
from .corpus import Corpus
from .errors import AdapterError, DataError, UsageError
from .lexical import RankedList, rank_descending
from .textprep import PrepConfig, preprocess

DENSE_METRICS = ("cosine", "dot")
STUB_DIM = 64


@dataclass
class EmbeddingMatrix:
    dim: int
    ids: list[str]
    vectors: np.ndarray  # float64, shape (len(ids), dim)
    provider_name: str
    norms: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        if self.vectors.ndim != 2 or self.vectors.shape != (len(self.ids), self.dim):
            raise DataError(
                f"embedding matrix shape {self.vectors.shape} does not match "
                f"{len(self.ids)} ids of dim {self.dim}"
            )
        self.norms = np.linalg.norm(self.vectors, axis=1)


@dataclass
class EmbeddingProviderHandle:
    kind: str  # stub | file | adapter
    dim: int | None
    config: dict[str, Any]
    name: str

    def _fix_dim(self, observed: int) -> None:
        if self.dim is None:
            self.dim = observed
        elif self.dim != observed:
            raise AdapterError(
                f"provider {self.name!r} returned dim {observed}, declared {self.dim}"
            )


def stub_embedder(dim: int = STUB_DIM, prep: PrepConfig | None = None) -> EmbeddingProviderHandle:
    """Hashing embedder: tokens of the preprocessed text pick coordinates via a
    stable string hash; the vector is the L2-normalized bucket histogram."""
    if dim < 1:
        raise UsageError(f"stub dim must be >= 1, got {dim}")
    cfg = {"prep": prep or PrepConfig.all_on()}
    return EmbeddingProviderHandle(kind="stub", dim=dim, config=cfg, name=f"stub-{dim}")


def file_embedder(path: str | Path) -> EmbeddingProviderHandle:
    """Sidecar-backed embedder. First line "dim <N>"; each following line
    "<id>\\t<f1> <f2> ...". Lookups are by record id."""
    p = Path(path)
    if not p.exists():
        raise DataError(f"embedding sidecar not found: {p}")
    table: dict[str, np.ndarray] = {}
    with open(p, encoding="utf-8") as fh:
        head = fh.readline().split()
        if len(head) != 2 or head[0] != "dim" or not head[1].isdigit() or int(head[1]) < 1:
            raise DataError(f"sidecar {p} must start with 'dim <N>', found {' '.join(head)!r}")
        dim = int(head[1])
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            rec_id, _, rest = line.partition("\t")
            if not rest:
                raise DataError(f"sidecar {p} line {lineno}: expected '<id>\\t<floats>'")
            try:
                vec = np.array([float(x) for x in rest.split()], dtype=np.float64)
            except ValueError as exc:
                raise DataError(f"sidecar {p} line {lineno}: {exc}") from exc
            if len(vec) != dim:
                raise DataError(
                    f"sidecar {p} line {lineno}: vector for {rec_id!r} has length "
                    f"{len(vec)}, expected {dim}"
                )
            if rec_id in table:
                raise DataError(f"sidecar {p} line {lineno}: duplicate id {rec_id!r}")
            table[rec_id] = vec
    cfg = {"path": str(p), "table": table}
    return EmbeddingProviderHandle(kind="file", dim=dim, config=cfg, name=f"file:{p.name}")


def adapter_embedder(command: str | list[str]) -> EmbeddingProviderHandle:
    """Embedder backed by an external adapter process."""
    client = AdapterClient(command)
    info = client.info()
    if info["type"] != "embedder":
        client.close()
        raise AdapterError(
            f"adapter {info['name']!r} has type {info['type']!r}, expected 'embedder'"
        )
    dim = info.get("dim")
    if dim is not None and (not isinstance(dim, int) or dim < 1):
        client.close()
        raise AdapterError(f"adapter {info['name']!r} declared invalid dim {dim!r}")
    cfg = {"client": client}
    return EmbeddingProviderHandle(kind="adapter", dim=dim, config=cfg, name=str(info["name"]))


def _stub_vector(text: str, dim: int, prep: PrepConfig) -> np.ndarray:
    vec = np.zeros(dim, dtype=np.float64)
    for token in preprocess(text, prep):
        digest = hashlib.md5(token.encode("utf-8")).digest()
        vec[int.from_bytes(digest[:8], "big") % dim] += 1.0
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec


def _embed_texts(provider: EmbeddingProviderHandle, texts: list[str]) -> np.ndarray:
    if provider.kind == "stub":
        prep = provider.config["prep"]
        rows = [_stub_vector(t, provider.dim, prep) for t in texts]
        return np.array(rows, dtype=np.float64) if rows else np.zeros((0, provider.dim))
    if provider.kind == "adapter":
        client: AdapterClient = provider.config["client"]
        chunks = []
        for start in range(0, len(texts), BATCH_LIMIT):
            batch = client.embed(texts[start : start + BATCH_LIMIT])
            provider._fix_dim(batch.shape[1])
            chunks.append(batch)
        if not chunks:
            return np.zeros((0, provider.dim or 0))
        return np.concatenate(chunks, axis=0)
    raise UsageError(f"provider kind {provider.kind!r} cannot embed raw text")


def embed_corpus(corpus: Corpus, provider: EmbeddingProviderHandle) -> EmbeddingMatrix:
    """One vector per document, in corpus order. Deterministic per provider."""
    ids = list(corpus.ids)
    if provider.kind == "file":
        table = provider.config["table"]
        missing = next((i for i in ids if i not in table), None)
        if missing is not None:
            raise DataError(
                f"embedding sidecar {provider.config['path']} has no vector for id {missing!r}"
            )
        vectors = np.array([table[i] for i in ids], dtype=np.float64)
    else:
        vectors = _embed_texts(provider, [doc.code for doc in corpus.documents])
    return EmbeddingMatrix(
        dim=int(vectors.shape[1]), ids=ids, vectors=vectors, provider_name=provider.name
    )


def embed_query(
    text: str, provider: EmbeddingProviderHandle, key: str | None = None
) -> np.ndarray:
    """Vector for one query. The file provider looks up by ``key`` (the query
    id) since it has no model to run; other kinds embed the text."""
    if provider.kind == "file":
        lookup = key if key is not None else text
        vec = provider.config["table"].get(lookup)
        if vec is None:
            raise DataError(
                f"embedding sidecar {provider.config['path']} has no vector for id {lookup!r}"
            )
        return vec.copy()
    return _embed_texts(provider, [text])[0]


def top_k_dense(qvec: np.ndarray, matrix: EmbeddingMatrix, k: int, metric: str) -> RankedList:
    """Top-k documents by similarity, descending, ties by corpus ordinal."""
    if metric not in DENSE_METRICS:
        raise UsageError(f"unknown dense metric {metric!r}; valid: {', '.join(DENSE_METRICS)}")
    if k < 1:
        raise UsageError(f"K must be >= 1, got {k}")
    qvec = np.asarray(qvec, dtype=np.float64)
    if qvec.shape != (matrix.dim,):
        raise UsageError(f"query vector has shape {qvec.shape}, matrix dim is {matrix.dim}")
    scores = dense_scores(qvec, matrix, metric)
    top = rank_descending(scores, k)
    return [(matrix.ids[d], float(scores[d])) for d in top]


def dense_scores(qvec: np.ndarray, matrix: EmbeddingMatrix, metric: str) -> np.ndarray:
    """Similarity of the query vector against every document vector."""
    dots = matrix.vectors @ qvec
    if metric == "dot":
        return dots
    qnorm = float(np.linalg.norm(qvec))
    denom = qnorm * matrix.norms
    out = np.zeros(len(matrix.ids), dtype=np.float64)
    np.divide(dots, denom, out=out, where=denom > 0)
    return out
