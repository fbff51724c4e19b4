"""Corpus and query ingestion.

Corpora and queries are line-delimited JSON. Document identity comes from an
explicit "id" field, falling back to "url". File order is preserved: the
document ordinal (position) is the global tie-breaking key for every ranking
in the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DataError


@dataclass
class CodeDocument:
    id: str
    language: str
    code: str
    tokens: list[str] = field(default_factory=list)


@dataclass
class Corpus:
    documents: list[CodeDocument]
    language: str
    _ordinals: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._ordinals = {d.id: i for i, d in enumerate(self.documents)}

    def __len__(self) -> int:
        return len(self.documents)

    def __getitem__(self, ordinal: int) -> CodeDocument:
        return self.documents[ordinal]

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def ordinal_of(self, doc_id: str) -> int:
        """Ordinal (position in file order) of a document id."""
        ordinal = self._ordinals.get(doc_id)
        if ordinal is None:
            raise DataError(f"unknown document id {doc_id!r}")
        return ordinal


@dataclass
class QueryRecord:
    id: str
    text: str
    gt_id: str
    tokens: list[str] = field(default_factory=list)


def _parse_jsonl(path: str):
    try:
        fh = open(path, "r", encoding="utf-8", errors="replace")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}: malformed JSON on line {lineno}: {exc}") from exc
            if not isinstance(obj, dict):
                raise DataError(f"{path}: line {lineno} is not a JSON object")
            yield lineno, obj


def load_corpus(path: str, language: str = "") -> Corpus:
    """Load one CodeDocument per line, ids unique, order preserved."""
    documents: list[CodeDocument] = []
    seen: set[str] = set()
    for lineno, obj in _parse_jsonl(path):
        doc_id = obj.get("id") or obj.get("url")
        if not doc_id:
            raise DataError(f"{path}: line {lineno} has neither 'id' nor 'url'")
        doc_id = str(doc_id)
        if doc_id in seen:
            raise DataError(f"{path}: duplicate document id {doc_id!r} on line {lineno}")
        seen.add(doc_id)
        code = obj.get("code")
        if code is None:
            raise DataError(f"{path}: line {lineno} is missing 'code'")
        documents.append(
            CodeDocument(id=doc_id, language=str(obj.get("language") or language), code=str(code))
        )
    return Corpus(documents=documents, language=language)


def load_queries(path: str, corpus: Corpus) -> list[QueryRecord]:
    """Load query records; every ground-truth id must resolve in the corpus."""
    known = set(corpus.ids)
    queries: list[QueryRecord] = []
    for lineno, obj in _parse_jsonl(path):
        qid = str(obj.get("id") or lineno)
        text = obj.get("query")
        if text is None:
            raise DataError(f"{path}: line {lineno} is missing 'query'")
        gt_id = obj.get("gt_id") or obj.get("url")
        if not gt_id:
            raise DataError(f"{path}: line {lineno} has neither 'gt_id' nor 'url'")
        gt_id = str(gt_id)
        if gt_id not in known:
            raise DataError(
                f"{path}: query {qid!r} references unknown ground-truth id {gt_id!r}"
            )
        queries.append(QueryRecord(id=qid, text=str(text), gt_id=gt_id))
    return queries
