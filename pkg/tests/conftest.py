import json
import random
import sys
from pathlib import Path

import pytest

from toss.corpus import CodeDocument, Corpus
from toss.textprep import PrepConfig

TESTS_DIR = Path(__file__).parent
FAKE_ADAPTER = TESTS_DIR / "fake_adapter.py"

WORDS = [
    "parse", "file", "json", "read", "write", "open", "close", "load",
    "save", "token", "index", "query", "score", "rank", "merge", "sort",
    "path", "data", "text", "node", "tree", "list", "dict", "key",
]


def make_corpus(token_lists: list[list[str]]) -> Corpus:
    """Corpus whose documents tokenize exactly to the given lists under
    prep none (tokens must already be lowercase alphanumerics)."""
    docs = [
        CodeDocument(id=f"d{i}", language="python", code=" ".join(tokens))
        for i, tokens in enumerate(token_lists)
    ]
    return Corpus(documents=docs, language="python")


def random_token_lists(
    rng: random.Random, max_docs: int = 50, max_len: int = 30
) -> list[list[str]]:
    n_docs = rng.randint(1, max_docs)
    return [
        [rng.choice(WORDS) for _ in range(rng.randint(0, max_len))]
        for _ in range(n_docs)
    ]


def random_query(rng: random.Random, max_len: int = 8) -> list[str]:
    # mix in an out-of-vocabulary token now and then
    pool = WORDS + ["zzzunseen"]
    return [rng.choice(pool) for _ in range(rng.randint(0, max_len))]


def write_jsonl(path: Path, records: list[dict]) -> Path:
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def prep_none() -> PrepConfig:
    return PrepConfig.none()


@pytest.fixture
def fixture20() -> tuple[Corpus, list[list[str]]]:
    """Deterministic 20-doc corpus of plain tokens."""
    rng = random.Random(20)
    token_lists = [
        [rng.choice(WORDS) for _ in range(rng.randint(1, 12))] for _ in range(20)
    ]
    return make_corpus(token_lists), token_lists


@pytest.fixture
def fake_adapter():
    def cmd(mode: str, *extra: str) -> list[str]:
        return [sys.executable, str(FAKE_ADAPTER), mode, *extra]

    return cmd
