"""Command-line entry points: index, search, eval, overlap.

Exit codes: 0 success, 1 usage error, 2 data error, 3 adapter error.
The environment variable TOSS_ADAPTER supplies a default adapter command
for scorer/provider specs that name no command of their own.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .corpus import Corpus, QueryRecord, load_corpus, load_queries
from .crossrank import (
    PairScorerHandle,
    adapter_scorer,
    close_scorer,
    oracle_scorer,
    stub_scorer,
)
from .dense import (
    EmbeddingMatrix,
    EmbeddingProviderHandle,
    adapter_embedder,
    embed_corpus,
    file_embedder,
    stub_embedder,
)
from .errors import (
    AdapterError,
    ConfigMismatchError,
    DataError,
    IndexFormatError,
    UsageError,
)
from .fusion import (
    FUSION_METHODS,
    ChannelSpec,
    DenseArtifact,
    SearchArtifacts,
    fuse_scores,
    recall_channel,
    toss_search_detail,
)
from .lexical import InvertedIndex, RankedList, build_index
from .metrics import (
    evaluate_run,
    format_eval_table,
    format_overlap_table,
    measure_latency,
    overlap_stats,
    trec_lines,
)
from .storage import (
    load_dense_matrix,
    load_lexical_index,
    save_dense_matrix,
    save_lexical_index,
)
from .textprep import PrepConfig

LEXICAL_NAME = "lexical.toss"
DENSE_NAME = "dense.toss"


def _parse_channel(spec: str) -> ChannelSpec:
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"channel spec {spec!r} must be name:kind:K")
    name, kind, raw_k = parts
    try:
        k = int(raw_k)
    except ValueError:
        raise UsageError(f"channel spec {spec!r}: K must be an integer") from None
    return ChannelSpec(name=name, kind=kind, k=k)


def _adapter_command(inline: str) -> str:
    if inline:
        return inline
    env = os.environ.get("TOSS_ADAPTER", "")
    if not env:
        raise UsageError(
            "adapter requested without a command; pass adapter:<command> or set TOSS_ADAPTER"
        )
    return env


def _parse_provider(spec: str, prep: PrepConfig) -> EmbeddingProviderHandle:
    kind, _, rest = spec.partition(":")
    if kind == "stub":
        if rest:
            try:
                return stub_embedder(int(rest), prep)
            except ValueError:
                raise UsageError(f"provider spec {spec!r}: dim must be an integer") from None
        return stub_embedder(prep=prep)
    if kind == "file":
        if not rest:
            raise UsageError("file provider needs a path: file:<sidecar>")
        return file_embedder(rest)
    if kind == "adapter":
        return adapter_embedder(_adapter_command(rest))
    raise UsageError(f"unknown provider kind {kind!r}; valid: stub, file, adapter")


def _parse_scorer(
    spec: str, index: InvertedIndex | None, queries: list[QueryRecord] | None
) -> PairScorerHandle:
    kind, _, rest = spec.partition(":")
    if kind == "stub":
        if index is None:
            raise UsageError("the stub scorer needs a lexical index")
        return stub_scorer(index)
    if kind == "oracle":
        if queries is None:
            raise UsageError("the oracle scorer needs a query file with ground truths")
        return oracle_scorer({q.id: q.gt_id for q in queries})
    if kind == "adapter":
        return adapter_scorer(_adapter_command(rest))
    raise UsageError(f"unknown scorer {spec!r}; valid: stub, oracle, adapter:<command>")


def _load_artifacts(
    index_dir: str,
    channels: list[ChannelSpec],
    corpus: Corpus,
    prep_flag: str | None,
    provider_spec: str | None,
    metric_flag: str | None,
    need_lexical: bool,
) -> SearchArtifacts:
    base = Path(index_dir)
    expect = PrepConfig.from_flags(prep_flag) if prep_flag else None
    index = None
    dense = None
    if need_lexical or any(c.kind != "dense" for c in channels):
        index = load_lexical_index(base / LEXICAL_NAME, expect_prep=expect)
    if any(c.kind == "dense" for c in channels):
        prep, meta, ids, vectors = load_dense_matrix(base / DENSE_NAME, expect_prep=expect)
        if ids != list(corpus.ids):
            raise DataError(f"dense index at {base / DENSE_NAME} does not match the corpus ids")
        matrix = EmbeddingMatrix(
            dim=int(meta["dim"]), ids=ids, vectors=vectors, provider_name=str(meta["provider"])
        )
        if provider_spec:
            provider = _parse_provider(provider_spec, prep)
        elif str(meta["provider"]).startswith("stub-"):
            provider = stub_embedder(int(meta["dim"]), prep)
        else:
            raise UsageError(
                f"dense index was built by {meta['provider']!r}; pass --provider to embed queries"
            )
        metric = metric_flag or str(meta.get("metric", "cosine"))
        dense = DenseArtifact(matrix=matrix, provider=provider, metric=metric)
    return SearchArtifacts(corpus=corpus, index=index, dense=dense)


def cmd_index(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, language=args.language)
    prep = PrepConfig.from_flags(args.prep)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    index = build_index(corpus, prep)
    save_lexical_index(out / LEXICAL_NAME, index)
    built = [LEXICAL_NAME]
    if args.provider:
        provider = _parse_provider(args.provider, prep)
        matrix = embed_corpus(corpus, provider)
        save_dense_matrix(
            out / DENSE_NAME,
            prep,
            matrix.ids,
            matrix.vectors,
            provider=matrix.provider_name,
            metric=args.metric,
        )
        built.append(DENSE_NAME)
    print(f"indexed {len(corpus)} documents -> {', '.join(str(out / n) for n in built)}")
    return 0


def _provenance(doc_id: str, per_channel: dict[str, RankedList]) -> str:
    names = [name for name, ranked in per_channel.items() if any(d == doc_id for d, _ in ranked)]
    return ",".join(sorted(names))


def cmd_search(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise UsageError(f"--k must be >= 1, got {args.k}")
    corpus = load_corpus(args.corpus, language=args.language)
    channels = [_parse_channel(s) for s in args.channel]
    if not channels:
        raise UsageError("at least one --channel is required")
    scorer_kind = args.scorer.partition(":")[0]
    artifacts = _load_artifacts(
        args.index, channels, corpus, args.prep, args.provider, args.metric,
        need_lexical=scorer_kind == "stub",
    )
    scorer = _parse_scorer(args.scorer, artifacts.index, queries=None)
    try:
        ranked, candidates = toss_search_detail(
            args.query, channels, scorer, artifacts, query_id=None
        )
    finally:
        close_scorer(scorer)
    for rank, (doc_id, score) in enumerate(ranked[: args.k], start=1):
        print(f"{rank:>4}  {doc_id}  {score:.6f}  {_provenance(doc_id, candidates.per_channel)}")
    return 0


def _fused_pipeline(channels, scorer, artifacts, method):
    def run(q: QueryRecord) -> RankedList:
        ranked, candidates = toss_search_detail(
            q.text, channels, scorer, artifacts, query_id=q.id
        )
        per_model = dict(candidates.per_channel)
        per_model["rerank"] = ranked
        return fuse_scores(per_model, method, artifacts.corpus.ordinal_of)

    return run


def _plain_pipeline(channels, scorer, artifacts):
    def run(q: QueryRecord) -> RankedList:
        ranked, _ = toss_search_detail(q.text, channels, scorer, artifacts, query_id=q.id)
        return ranked

    return run


def cmd_eval(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, language=args.language)
    queries = load_queries(args.queries, corpus)
    channels = [_parse_channel(s) for s in args.channel]
    if not channels:
        raise UsageError("at least one --channel is required")
    if args.fuse:
        if args.fuse not in FUSION_METHODS:
            raise UsageError(
                f"unknown fusion method {args.fuse!r}; valid: {', '.join(FUSION_METHODS)}"
            )
        if any(c.name == "rerank" for c in channels):
            raise UsageError("channel name 'rerank' is reserved under --fuse")
    scorer_kind = args.scorer.partition(":")[0]
    artifacts = _load_artifacts(
        args.index, channels, corpus, args.prep, args.provider, args.metric,
        need_lexical=scorer_kind == "stub",
    )
    scorer = _parse_scorer(args.scorer, artifacts.index, queries)
    pipeline = (
        _fused_pipeline(channels, scorer, artifacts, args.fuse)
        if args.fuse
        else _plain_pipeline(channels, scorer, artifacts)
    )
    jobs = 1 if args.latency else max(1, args.jobs)
    try:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                cached = dict(zip((q.id for q in queries), pool.map(pipeline, queries)))
            report = evaluate_run(lambda q: cached[q.id], queries)
        else:
            report = evaluate_run(pipeline, queries)
        timing = None
        if args.latency:
            timing = measure_latency(
                pipeline,
                queries,
                sample_size=min(args.latency_sample, len(queries)),
                repeats=args.latency_repeats,
                seed=args.seed,
            )
        if args.trec:
            _dump_trec(args.trec, channels, scorer, artifacts, queries, args.fuse)
    finally:
        close_scorer(scorer)
    payload = {
        "config": {
            "channels": [f"{c.name}:{c.kind}:{c.k}" for c in channels],
            "scorer": args.scorer,
            "fuse": args.fuse,
            "seed": args.seed,
        },
        "eval": report.to_dict(),
        "timing": timing.to_dict() if timing else None,
    }
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    print(format_eval_table(report, timing), file=sys.stderr)
    return 0


def _dump_trec(out_dir, channels, scorer, artifacts, queries, fuse_method) -> None:
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    per_channel_lines: dict[str, list[str]] = {c.name: [] for c in channels}
    final_lines: list[str] = []
    final_tag = f"fuse-{fuse_method}" if fuse_method else "toss"
    for q in queries:
        ranked, candidates = toss_search_detail(
            q.text, channels, scorer, artifacts, query_id=q.id
        )
        if fuse_method:
            per_model = dict(candidates.per_channel)
            per_model["rerank"] = ranked
            ranked = fuse_scores(per_model, fuse_method, artifacts.corpus.ordinal_of)
        for name, lst in candidates.per_channel.items():
            per_channel_lines[name].extend(trec_lines(q.id, lst, name))
        final_lines.extend(trec_lines(q.id, ranked, final_tag))
    for name, lines in per_channel_lines.items():
        (base / f"{name}.run").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (base / "final.run").write_text("\n".join(final_lines) + "\n", encoding="utf-8")


def cmd_overlap(args: argparse.Namespace) -> int:
    if args.top < 1:
        raise UsageError(f"--top must be >= 1, got {args.top}")
    corpus = load_corpus(args.corpus, language=args.language)
    queries = load_queries(args.queries, corpus)
    channels = [_parse_channel(s) for s in args.channel]
    if len(channels) < 2:
        raise UsageError("overlap needs at least two --channel specs")
    artifacts = _load_artifacts(
        args.index, channels, corpus, args.prep, args.provider, args.metric,
        need_lexical=False,
    )
    lists: dict[str, list[list[str]]] = {c.name: [] for c in channels}
    for q in queries:
        for c in channels:
            ranked = recall_channel(
                q.text, c, artifacts.for_channel(c), query_id=q.id, bm25=artifacts.bm25
            )
            lists[c.name].append([doc_id for doc_id, _ in ranked])
    report = overlap_stats(lists, [q.gt_id for q in queries], top_t=args.top)
    print(format_overlap_table(report))
    if args.json:
        Path(args.json).write_text(
            json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    return 0


def _add_common(p: argparse.ArgumentParser, queries: bool) -> None:
    p.add_argument("--corpus", required=True, help="line-delimited JSON corpus")
    if queries:
        p.add_argument("--queries", required=True, help="line-delimited JSON queries")
    p.add_argument("--index", required=True, help="directory holding index artifacts")
    p.add_argument("--channel", action="append", default=[], metavar="NAME:KIND:K")
    p.add_argument("--prep", default=None, help="verify index prep flags (sps,ds,rs,pos|all|none)")
    p.add_argument("--provider", default=None, help="query-side embedder: stub[:dim]|file:p|adapter[:cmd]")
    p.add_argument("--metric", default=None, choices=("cosine", "dot"))
    p.add_argument("--language", default=None)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toss", description="two-stage hybrid code search")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build and persist index artifacts")
    p.add_argument("--corpus", required=True)
    p.add_argument("--prep", default="all", help="sps,ds,rs,pos | all | none")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--provider", default=None, help="also embed the corpus: stub[:dim]|file:p|adapter[:cmd]")
    p.add_argument("--metric", default="cosine", choices=("cosine", "dot"))
    p.add_argument("--language", default=None)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="run one query through the two-stage pipeline")
    _add_common(p, queries=False)
    p.add_argument("--query", required=True)
    p.add_argument("--scorer", default="stub", help="stub | oracle | adapter[:command]")
    p.add_argument("--k", type=int, default=10, help="results to print")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("eval", help="evaluate the pipeline over a query set")
    _add_common(p, queries=True)
    p.add_argument("--scorer", default="stub", help="stub | oracle | adapter[:command]")
    p.add_argument("--fuse", default=None, help="fuse channels+reranker instead of plain rerank")
    p.add_argument("--latency", action="store_true", help="also run the latency protocol")
    p.add_argument("--latency-sample", type=int, default=100)
    p.add_argument("--latency-repeats", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1, help="parallel query workers (1 under --latency)")
    p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    p.add_argument("--trec", default=None, help="directory for TREC-style run dumps")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("overlap", help="recall coincidence statistics across channels")
    _add_common(p, queries=True)
    p.add_argument("--top", type=int, default=1, help="recall depth per channel")
    p.add_argument("--json", default=None, help="also write the table as JSON here")
    p.set_defaults(func=cmd_overlap)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"toss: {exc}", file=sys.stderr)
        return 1
    except (DataError, IndexFormatError, ConfigMismatchError) as exc:
        print(f"toss: {exc}", file=sys.stderr)
        return 2
    except AdapterError as exc:
        print(f"toss: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
