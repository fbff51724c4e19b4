"""Evaluation harness: MRR, R@K, the latency protocol, and recall-overlap
statistics across channels.

One rule applies everywhere: a ground truth absent from a ranking
contributes reciprocal rank 0.
"""

from __future__ import annotations

import itertools
import random
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .corpus import QueryRecord
from .errors import TossError, UsageError
from .lexical import RankedList

RECALL_KS = (1, 5, 10, 100, 1000)


@dataclass
class EvalReport:
    mrr: float
    recall_at: dict[int, float]
    per_query: list[tuple[str, int | None]]  # (query id, 1-based gt rank or None)
    n_queries: int

    def to_dict(self) -> dict:
        return {
            "mrr": self.mrr,
            "recall_at": {str(k): v for k, v in self.recall_at.items()},
            "n_queries": self.n_queries,
            "per_query": [
                {"query_id": qid, "gt_rank": rank} for qid, rank in self.per_query
            ],
        }


@dataclass
class TimingReport:
    per_query_mean: float
    per_query_std: float
    repeats: int
    sample_size: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "per_query_mean_s": self.per_query_mean,
            "per_query_std_s": self.per_query_std,
            "repeats": self.repeats,
            "sample_size": self.sample_size,
            "seed": self.seed,
        }


@dataclass
class OverlapReport:
    n_queries: int
    channels: list[str]
    top_t: int
    coincidence: dict[str, int]  # subset key -> queries whose top-T sets intersect
    gt_common: dict[str, int]  # subset key -> queries whose gt is in every member's top-T
    gt_unique: dict[str, int]  # channel -> queries whose gt only that channel recalled

    def to_dict(self) -> dict:
        return {
            "n_queries": self.n_queries,
            "channels": self.channels,
            "top_t": self.top_t,
            "coincidence": dict(self.coincidence),
            "gt_common": dict(self.gt_common),
            "gt_unique": dict(self.gt_unique),
        }


def rank_of(ranking: RankedList, gt: str) -> int | None:
    """1-based rank of the ground truth in a ranking, None when absent."""
    for pos, (doc_id, _) in enumerate(ranking, start=1):
        if doc_id == gt:
            return pos
    return None


def mrr(rankings: Sequence[RankedList], gts: Sequence[str]) -> float:
    if len(rankings) != len(gts):
        raise UsageError(f"{len(rankings)} rankings vs {len(gts)} ground truths")
    if not rankings:
        return 0.0
    total = 0.0
    for ranking, gt in zip(rankings, gts):
        rank = rank_of(ranking, gt)
        if rank is not None:
            total += 1.0 / rank
    return total / len(rankings)


def recall_at_k(rankings: Sequence[RankedList], gts: Sequence[str], k: int) -> float:
    if k < 1:
        raise UsageError(f"K must be >= 1, got {k}")
    if len(rankings) != len(gts):
        raise UsageError(f"{len(rankings)} rankings vs {len(gts)} ground truths")
    if not rankings:
        return 0.0
    hits = sum(
        1
        for ranking, gt in zip(rankings, gts)
        if (rank := rank_of(ranking, gt)) is not None and rank <= k
    )
    return hits / len(rankings)


def evaluate_run(
    pipeline: Callable[[QueryRecord], RankedList],
    queries: Sequence[QueryRecord],
    gts: Sequence[str] | None = None,
) -> EvalReport:
    """Run the pipeline once per query and compute every metric from that pass."""
    if not queries:
        raise UsageError("evaluate_run requires at least one query")
    if gts is None:
        gts = [q.gt_id for q in queries]
    if len(gts) != len(queries):
        raise UsageError(f"{len(queries)} queries vs {len(gts)} ground truths")
    rankings: list[RankedList] = []
    for q in queries:
        try:
            rankings.append(pipeline(q))
        except TossError:
            raise
        except Exception as exc:
            raise TossError(f"pipeline failed on query {q.id}: {exc}") from exc
    per_query = [(q.id, rank_of(r, gt)) for q, r, gt in zip(queries, rankings, gts)]
    return EvalReport(
        mrr=mrr(rankings, gts),
        recall_at={k: recall_at_k(rankings, gts, k) for k in RECALL_KS},
        per_query=per_query,
        n_queries=len(queries),
    )


def measure_latency(
    pipeline: Callable[[QueryRecord], RankedList],
    queries: Sequence[QueryRecord],
    sample_size: int = 100,
    repeats: int = 3,
    seed: int = 0,
) -> TimingReport:
    """Time the pipeline over a seeded query sample.

    One untimed warm-up pass, then ``repeats`` timed passes; the report is the
    mean and standard deviation across the per-repeat means, so repeats=1
    yields std 0. Offline costs (index build, corpus embedding) are excluded
    because they happen before the pipeline is handed in.
    """
    if sample_size < 1:
        raise UsageError(f"sample_size must be >= 1, got {sample_size}")
    if sample_size > len(queries):
        raise UsageError(
            f"sample_size {sample_size} exceeds the {len(queries)} available queries"
        )
    if repeats < 1:
        raise UsageError(f"repeats must be >= 1, got {repeats}")
    rng = random.Random(seed)
    sample = rng.sample(list(queries), sample_size)
    for q in sample:
        pipeline(q)
    repeat_means: list[float] = []
    for _ in range(repeats):
        elapsed = 0.0
        for q in sample:
            start = time.perf_counter()
            pipeline(q)
            elapsed += time.perf_counter() - start
        repeat_means.append(elapsed / sample_size)
    mean = statistics.fmean(repeat_means)
    std = statistics.pstdev(repeat_means) if repeats > 1 else 0.0
    return TimingReport(
        per_query_mean=mean,
        per_query_std=std,
        repeats=repeats,
        sample_size=sample_size,
        seed=seed,
    )


def _subset_key(names: tuple[str, ...]) -> str:
    return "&".join(names)


def overlap_stats(
    lists: dict[str, list[list[str]]],
    gts: Sequence[str],
    top_t: int | None = None,
) -> OverlapReport:
    """Per-subset recall coincidence across channels.

    ``lists`` maps channel name to per-query top-T id lists. For every channel
    subset the report counts queries where all members' top-T sets share at
    least one document (coincidence) and queries whose gt all members recalled
    (gt_common); gt_unique counts, per channel, the queries whose gt no other
    channel recalled.
    """
    if not lists:
        raise UsageError("overlap_stats requires at least one channel")
    if top_t is not None and top_t < 1:
        raise UsageError(f"top_t must be >= 1, got {top_t}")
    n = len(gts)
    for name, per_query in lists.items():
        if len(per_query) != n:
            raise UsageError(
                f"channel {name!r} covers {len(per_query)} queries, expected {n}"
            )
    channels = sorted(lists)
    truncated = {
        name: [ids[:top_t] if top_t is not None else list(ids) for ids in lists[name]]
        for name in channels
    }
    effective_t = top_t if top_t is not None else max(
        (len(ids) for per_query in lists.values() for ids in per_query), default=0
    )
    sets = {name: [set(ids) for ids in per_query] for name, per_query in truncated.items()}
    coincidence: dict[str, int] = {}
    gt_common: dict[str, int] = {}
    for size in range(1, len(channels) + 1):
        for combo in itertools.combinations(channels, size):
            key = _subset_key(combo)
            co = 0
            gt_co = 0
            for qi in range(n):
                common = set.intersection(*(sets[name][qi] for name in combo))
                if common:
                    co += 1
                if all(gts[qi] in sets[name][qi] for name in combo):
                    gt_co += 1
            coincidence[key] = co
            gt_common[key] = gt_co
    gt_unique: dict[str, int] = {}
    for name in channels:
        others = [o for o in channels if o != name]
        gt_unique[name] = sum(
            1
            for qi in range(n)
            if gts[qi] in sets[name][qi]
            and not any(gts[qi] in sets[o][qi] for o in others)
        )
    return OverlapReport(
        n_queries=n,
        channels=channels,
        top_t=effective_t,
        coincidence=coincidence,
        gt_common=gt_common,
        gt_unique=gt_unique,
    )


def trec_lines(query_id: str, ranking: RankedList, channel_name: str) -> list[str]:
    """Run-file lines: "query-id Q0 doc-id rank score channel-name"."""
    return [
        f"{query_id} Q0 {doc_id} {rank} {score:.6f} {channel_name}"
        for rank, (doc_id, score) in enumerate(ranking, start=1)
    ]


def format_eval_table(report: EvalReport, timing: TimingReport | None = None) -> str:
    rows = [f"{'metric':<12} {'value':>10}", f"{'-' * 12} {'-' * 10}"]
    rows.append(f"{'mrr':<12} {report.mrr:>10.4f}")
    for k in sorted(report.recall_at):
        rows.append(f"{f'r@{k}':<12} {report.recall_at[k]:>10.4f}")
    rows.append(f"{'queries':<12} {report.n_queries:>10d}")
    if timing is not None:
        rows.append(
            f"{'latency':<12} {timing.per_query_mean * 1000:>7.2f} ms "
            f"± {timing.per_query_std * 1000:.2f} (n={timing.sample_size}, "
            f"repeats={timing.repeats}, seed={timing.seed})"
        )
    return "\n".join(rows)


def format_overlap_table(report: OverlapReport) -> str:
    rows = [
        f"queries: {report.n_queries}   top-T: {report.top_t}",
        f"{'channel subset':<40} {'coincide':>9} {'gt-all':>7}",
        f"{'-' * 40} {'-' * 9} {'-' * 7}",
    ]
    for key in report.coincidence:
        rows.append(
            f"{key:<40} {report.coincidence[key]:>9d} {report.gt_common[key]:>7d}"
        )
    rows.append("")
    rows.append(f"{'channel':<40} {'gt-unique':>9}")
    for name in report.channels:
        rows.append(f"{name:<40} {report.gt_unique[name]:>9d}")
    return "\n".join(rows)
