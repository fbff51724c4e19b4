"""Generate the checked-in desk corpus used by the evaluation tests.

Writes tests/data/desk_corpus.jsonl and tests/data/desk_queries.jsonl: 220
query/document pairs of synthetic code-search data. Document identifiers mix
camelCase, snake_case, and concatenated-lowercase naming so that identifier
splitting, stopword removal, dictionary splitting, and plural folding all have
signal to recover; queries are short English requests with stopwords and
plural inflections. Deterministic for a fixed seed, so reruns reproduce the
committed files byte for byte.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from toss.textprep import PrepConfig, lexicon_set, preprocess

SEED = 20240811
N_PAIRS = 220

VERBS = [
    "parse", "read", "write", "load", "save", "merge", "sort", "filter",
    "split", "join", "encode", "decode", "compress", "validate", "format",
    "fetch", "cache", "convert", "extract", "replace", "escape", "render",
    "resolve", "scan",
]
OBJECTS = [
    "json", "csv", "yaml", "html", "url", "path", "file", "string", "token",
    "tree", "node", "graph", "list", "dict", "queue", "stack", "buffer",
    "stream", "config", "header", "cookie", "session", "image", "matrix",
    "vector", "table", "row", "column", "schema", "query",
]
HELPERS = ["open", "close", "check", "count", "copy", "apply", "build", "clean"]

BODY_TEMPLATES = [
    "    data = {helper}(source)\n    return {v}_{o1}(data, limit)\n",
    "    out = []\n    for item in source:\n        out.append({helper}(item))\n    return out\n",
    "    if not source:\n        raise ValueError('empty {o1}')\n    return {helper}(source)\n",
    "    result = {helper}(source)\n    result.update(extra)\n    return result\n",
]

DOC_TEMPLATES = [
    '    """{Verb} the {o1} {o2}s and return the results."""\n',
    '    """{Verb}s every {o1} found in the given {o2}."""\n',
    "",
    "",
    "",
]

QUERY_TEMPLATES = [
    "how to {verb} a {o1} {o2}",
    "{verb} {o1} {o2}s",
    "{verb} the {o1}s in a {o2}",
    "function that {verb}s {o1} {o2}",
    "{verb} {o1} to {o2}",
    "how do i {verb} {o2}s with a {o1}",
]


def camel(verb: str, o1: str, o2: str) -> str:
    return verb + o1.capitalize() + o2.capitalize()


def snake(verb: str, o1: str, o2: str) -> str:
    return f"{verb}_{o1}_{o2}"


def concat(verb: str, o1: str, o2: str) -> str:
    return verb + o1 + o2


def splits_cleanly(name: str, expect: list[str]) -> bool:
    return preprocess(name, PrepConfig.all_on()) == expect


def main() -> None:
    rng = random.Random(SEED)
    lex = lexicon_set()
    combos = [
        (v, a, b)
        for v in VERBS
        for a in OBJECTS
        for b in OBJECTS
        if a != b
    ]
    rng.shuffle(combos)

    out_dir = Path(__file__).resolve().parent.parent / "tests" / "data"
    out_dir.mkdir(parents=True, exist_ok=True)

    docs = []
    queries = []
    for i, (verb, o1, o2) in enumerate(combos[:N_PAIRS]):
        style = i % 4
        if style == 3 and all(w in lex for w in (verb, o1, o2)) and splits_cleanly(
            concat(verb, o1, o2), [verb, o1, o2]
        ):
            name = concat(verb, o1, o2)
        elif style == 2:
            name = snake(verb, o1, o2)
        else:
            name = camel(verb, o1, o2)
        helper = rng.choice(HELPERS)
        doc_line = rng.choice(DOC_TEMPLATES).format(Verb=verb.capitalize(), o1=o1, o2=o2)
        body = rng.choice(BODY_TEMPLATES).format(helper=helper, v=verb, o1=o1)
        code = f"def {name}(source, limit=None):\n{doc_line}{body}"
        doc_id = f"desk{i:03d}"
        docs.append({"id": doc_id, "code": code, "language": "python"})
        query = rng.choice(QUERY_TEMPLATES).format(verb=verb, o1=o1, o2=o2)
        queries.append({"id": f"q{i:03d}", "query": query, "gt_id": doc_id})

    with (out_dir / "desk_corpus.jsonl").open("w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, sort_keys=True) + "\n")
    with (out_dir / "desk_queries.jsonl").open("w", encoding="utf-8") as fh:
        for q in queries:
            fh.write(json.dumps(q, sort_keys=True) + "\n")
    print(f"wrote {len(docs)} documents and {len(queries)} queries to {out_dir}")


if __name__ == "__main__":
    main()
