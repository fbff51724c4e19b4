"""On-disk container for index artifacts.

Layout: 5-byte magic ``TOSS1``, an 8-byte little-endian header length, a JSON
header (kind, preprocessing config, metadata), then an npz payload with the
numeric and string arrays. Round-trips are exact, so reloaded indexes rank
identically, tie order included.
"""

from __future__ import annotations

import io
import json
import struct
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigMismatchError, DataError, IndexFormatError
from .lexical import InvertedIndex
from .textprep import PrepConfig

MAGIC = b"TOSS1"
_LEN = struct.Struct("<Q")


def save_container(
    path: str | Path,
    kind: str,
    prep: PrepConfig,
    meta: dict[str, Any],
    arrays: dict[str, np.ndarray],
) -> None:
    header = json.dumps({"kind": kind, "prep": prep.to_dict(), "meta": meta}).encode("utf-8")
    payload = io.BytesIO()
    np.savez_compressed(payload, **arrays)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_LEN.pack(len(header)))
        fh.write(header)
        fh.write(payload.getvalue())


def load_container(path: str | Path) -> tuple[str, PrepConfig, dict, dict[str, np.ndarray]]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"index file not found: {p}")
    with open(p, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise IndexFormatError(
                f"bad index magic in {p}: found {magic!r}, expected {MAGIC!r}"
            )
        raw_len = fh.read(_LEN.size)
        if len(raw_len) < _LEN.size:
            raise IndexFormatError(f"truncated index header in {p}")
        (header_len,) = _LEN.unpack(raw_len)
        raw_header = fh.read(header_len)
        if len(raw_header) < header_len:
            raise IndexFormatError(f"truncated index header in {p}")
        try:
            header = json.loads(raw_header.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise IndexFormatError(f"unreadable index header in {p}: {exc}") from exc
        try:
            with np.load(io.BytesIO(fh.read())) as npz:
                arrays = {name: npz[name] for name in npz.files}
        except (ValueError, OSError) as exc:
            raise IndexFormatError(f"unreadable index payload in {p}: {exc}") from exc
    for key in ("kind", "prep", "meta"):
        if key not in header:
            raise IndexFormatError(f"index header in {p} is missing {key!r}")
    return header["kind"], PrepConfig.from_dict(header["prep"]), header["meta"], arrays


def save_lexical_index(path: str | Path, index: InvertedIndex) -> None:
    arrays = {
        "terms": np.array(sorted(index.vocabulary, key=index.vocabulary.get), dtype=np.str_),
        "offsets": index.offsets,
        "post_docs": index.post_docs,
        "post_tfs": index.post_tfs,
        "doc_lengths": index.doc_lengths,
        "ids": np.array(index.ids, dtype=np.str_),
    }
    save_container(path, "lexical", index.prep, {"doc_count": index.doc_count}, arrays)


def load_lexical_index(
    path: str | Path, expect_prep: PrepConfig | None = None
) -> InvertedIndex:
    kind, prep, meta, arrays = load_container(path)
    if kind != "lexical":
        raise IndexFormatError(f"expected a lexical index at {path}, found kind {kind!r}")
    if expect_prep is not None and prep != expect_prep:
        raise ConfigMismatchError(
            f"index at {path} was built with prep {prep.to_dict()}, "
            f"requested {expect_prep.to_dict()}"
        )
    terms = arrays["terms"].tolist()
    return InvertedIndex(
        vocabulary={t: i for i, t in enumerate(terms)},
        offsets=arrays["offsets"].astype(np.int64),
        post_docs=arrays["post_docs"].astype(np.int64),
        post_tfs=arrays["post_tfs"].astype(np.float64),
        doc_lengths=arrays["doc_lengths"].astype(np.int64),
        doc_count=int(meta["doc_count"]),
        prep=prep,
        ids=[str(i) for i in arrays["ids"].tolist()],
    )


def save_dense_matrix(
    path: str | Path,
    prep: PrepConfig,
    ids: list[str],
    vectors: np.ndarray,
    provider: str,
    metric: str,
) -> None:
    meta = {"dim": int(vectors.shape[1]), "provider": provider, "metric": metric}
    arrays = {"vectors": vectors, "ids": np.array(ids, dtype=np.str_)}
    save_container(path, "dense", prep, meta, arrays)


def load_dense_matrix(
    path: str | Path, expect_prep: PrepConfig | None = None
) -> tuple[PrepConfig, dict, list[str], np.ndarray]:
    kind, prep, meta, arrays = load_container(path)
    if kind != "dense":
        raise IndexFormatError(f"expected a dense index at {path}, found kind {kind!r}")
    if expect_prep is not None and prep != expect_prep:
        raise ConfigMismatchError(
            f"index at {path} was built with prep {prep.to_dict()}, "
            f"requested {expect_prep.to_dict()}"
        )
    ids = [str(i) for i in arrays["ids"].tolist()]
    vectors = arrays["vectors"].astype(np.float64)
    if vectors.ndim != 2 or vectors.shape[0] != len(ids):
        raise IndexFormatError(f"dense index at {path} has a malformed vector matrix")
    return prep, meta, ids, vectors
