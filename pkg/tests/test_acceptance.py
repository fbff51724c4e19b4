"""End-to-end acceptance gate.

Each test covers one release criterion and prints a single visible pass/fail
line so the suite doubles as a checklist. The randomized suites pin their
seeds, so a failure here reproduces deterministically.
"""

import random
import re
import string
import time
from pathlib import Path

import pytest

from toss.corpus import load_corpus, load_queries
from toss.crossrank import oracle_scorer, stub_scorer
from toss.dense import embed_corpus, stub_embedder, top_k_dense
from toss.fusion import (
    ChannelSpec,
    DenseArtifact,
    SearchArtifacts,
    fuse_scores,
    recall_channel,
    toss_search,
    toss_search_detail,
)
from toss.lexical import LEXICAL_METHODS, build_index, score_all, top_k_lexical
from toss.metrics import RECALL_KS, measure_latency, mrr, recall_at_k
from toss.storage import (
    load_dense_matrix,
    load_lexical_index,
    save_dense_matrix,
    save_lexical_index,
)
from toss.textprep import PrepConfig, preprocess

from .conftest import make_corpus, random_query, random_token_lists
from .oracles import (
    oracle_bm25,
    oracle_bow,
    oracle_jaccard,
    oracle_mrr,
    oracle_recall_at,
    oracle_tfidf,
)

DATA = Path(__file__).parent / "data"
NONE = PrepConfig.none()
FULL = PrepConfig.all_on()


def announce(capsys, num, label, ok, detail=""):
    verdict = "PASS" if ok else "FAIL"
    with capsys.disabled():
        suffix = f" [{detail}]" if detail else ""
        print(f"\nacceptance {num} ({label}): {verdict}{suffix}")
    assert ok, f"criterion {num} ({label}) failed {detail}"


def desk_corpus():
    corpus = load_corpus(str(DATA / "desk_corpus.jsonl"))
    queries = load_queries(str(DATA / "desk_queries.jsonl"), corpus)
    return corpus, queries


def test_criterion_1_lexical_oracle_equivalence(capsys):
    rng = random.Random(1001)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        lists = random_token_lists(rng, max_docs=50, max_len=30)
        index = build_index(make_corpus(lists), NONE)
        q = random_query(rng, 8)
        doc_index = rng.randrange(len(lists))
        expect = {
            "jaccard": [oracle_jaccard(q, d) for d in lists],
            "bow": [oracle_bow(q, d) for d in lists],
            "tfidf": [oracle_tfidf(q, lists, i) for i in range(len(lists))],
            "bm25": [oracle_bm25(q, lists, i) for i in range(len(lists))],
        }
        for method in LEXICAL_METHODS:
            got = score_all(q, index, method)
            for i, want in enumerate(expect[method]):
                worst = max(worst, abs(float(got[i]) - want))
        del doc_index
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 60.0
    announce(capsys, 1, "lexical oracle equivalence", ok,
             f"1000 corpora, max abs err {worst:.2e}, {elapsed:.1f}s")


def test_criterion_2_preprocessing_fidelity(capsys):
    pinned = (
        preprocess("TwoStageMethod", FULL) == ["two", "stage", "method"]
        and preprocess("vectorizer_param", FULL) == ["vectorizer", "param"]
        and preprocess("showtraceback", FULL) == ["show", "trace", "back"]
        and preprocess("configs", FULL) == ["config"]
    )
    rng = random.Random(2002)
    alphabet = string.ascii_letters + string.digits + "_-.():/ \t\n"
    token_re = re.compile(r"^[a-z0-9]+$")
    props = True
    for _ in range(1000):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 80)))
        once = preprocess(text, FULL)
        props &= preprocess(" ".join(once), FULL) == once  # idempotent
        props &= preprocess(text, FULL) == once  # deterministic
        props &= all(token_re.match(t) for t in once)  # alphabet
        if not props:
            break
    announce(capsys, 2, "preprocessing fidelity", pinned and props)


def test_criterion_3_preprocessing_trend(capsys):
    corpus, queries = desk_corpus()
    gts = [q.gt_id for q in queries]
    scores = {}
    for label, prep in (("full", FULL), ("none", NONE)):
        index = build_index(corpus, prep)
        rankings = [
            top_k_lexical(preprocess(q.text, prep), index, "bm25", len(corpus))
            for q in queries
        ]
        scores[label] = mrr(rankings, gts)
    ok = len(queries) >= 200 and scores["full"] >= scores["none"]
    announce(capsys, 3, "preprocessing trend", ok,
             f"bm25 mrr full={scores['full']:.4f} none={scores['none']:.4f}")


def test_criterion_4_two_stage_contract(capsys):
    rng = random.Random(4004)
    start = time.perf_counter()
    ok = True
    kinds = ["lexical-bm25", "lexical-tfidf", "lexical-jaccard", "lexical-bow", "dense"]
    for _ in range(500):
        lists = random_token_lists(rng, max_docs=20, max_len=10)
        corpus = make_corpus(lists)
        index = build_index(corpus, NONE)
        provider = stub_embedder(16, NONE)
        dense = DenseArtifact(
            matrix=embed_corpus(corpus, provider), provider=provider, metric="cosine"
        )
        arts = SearchArtifacts(corpus=corpus, index=index, dense=dense)
        chosen = rng.sample(kinds, rng.randint(1, 3))
        channels = [
            ChannelSpec(f"ch{j}", kind, rng.randint(1, 8))
            for j, kind in enumerate(chosen)
        ]
        queries = [
            (f"q{j}", " ".join(random_query(rng, 5)) or "parse",
             f"d{rng.randrange(len(lists))}")
            for j in range(3)
        ]
        scorer = oracle_scorer({qid: gt for qid, _, gt in queries})
        hits = 0
        rankings = []
        for qid, text, gt in queries:
            before = scorer.pairs_scored
            ranked, cands = toss_search_detail(text, channels, scorer, arts, query_id=qid)
            rankings.append(ranked)
            union = set()
            for ch in channels:
                union |= {d for d, _ in recall_channel(text, ch, arts.for_channel(ch), query_id=qid)}
            ok &= cands.members == union  # (a) exact union
            ok &= scorer.pairs_scored - before == len(cands.members)  # (b)
            hits += gt in cands.members
        got_mrr = mrr(rankings, [gt for _, _, gt in queries])
        ok &= got_mrr == hits / len(queries)  # (c) exactly the union fraction
        # (d) growing one channel's K never lowers oracle MRR
        grown = list(channels)
        gi = rng.randrange(len(grown))
        grown[gi] = ChannelSpec(grown[gi].name, grown[gi].kind, grown[gi].k + rng.randint(1, 5))
        rankings2 = [
            toss_search(text, grown, scorer, arts, query_id=qid)
            for qid, text, _ in queries
        ]
        ok &= mrr(rankings2, [gt for _, _, gt in queries]) >= got_mrr
        if not ok:
            break
    elapsed = time.perf_counter() - start
    announce(capsys, 4, "two-stage contract", ok and elapsed < 60.0,
             f"500 trials, {elapsed:.1f}s")


def test_criterion_5_fusion_correctness(capsys):
    ordinals = {f"d{i}": i for i in range(10)}
    # min/max per model are 0/1, so zero-one normalization is the identity
    pool = {
        "ma": [("d1", 1.0), ("d2", 0.2), ("d3", 0.0)],
        "mb": [("d4", 1.0), ("d2", 0.5), ("d5", 0.0)],
        "mc": [("d5", 1.0), ("d1", 0.3), ("d3", 0.0)],
    }

    def fuse(per_model, method):
        return dict(fuse_scores(per_model, method, ordinals.__getitem__))

    ok = (
        fuse(pool, "combsum")["d2"] == pytest.approx(0.7)
        and fuse(pool, "combmnz")["d2"] == pytest.approx(1.4)
        and fuse(pool, "combanz")["d2"] == pytest.approx(0.35)
        and fuse(pool, "max")["d2"] == pytest.approx(0.5)
        and fuse(pool, "min")["d2"] == 0.0
        and fuse(pool, "combsum")["d1"] == pytest.approx(1.3)
        and fuse(pool, "combanz")["d1"] == pytest.approx(0.65)
    )
    borda_pool = {
        "ma": [("d1", 3.0), ("d2", 2.0), ("d3", 1.0), ("d4", 0.5)],
        "mb": [("d2", 9.0), ("d3", 8.0), ("d1", 7.0), ("d4", 6.0)],
    }
    got = fuse(borda_pool, "borda")
    ok &= got["d1"] == 4.0 and got["d2"] == 5.0 and got["d4"] == 0.0

    rng = random.Random(5005)
    methods = ("combsum", "combmnz", "combanz", "max", "min", "borda")
    for _ in range(500):
        per_model = {}
        for name in ("ma", "mb", "mc"):
            ids = rng.sample([f"d{i}" for i in range(8)], rng.randint(1, 6))
            per_model[name] = [(d, round(rng.random(), 3)) for d in ids]
        names = list(per_model)
        rng.shuffle(names)
        shuffled = {k: per_model[k] for k in names}
        for method in methods:
            ok &= fuse_scores(per_model, method, ordinals.__getitem__) == fuse_scores(
                shuffled, method, ordinals.__getitem__
            )
        # consensus: identical orderings in all models survive every fusion
        docs = rng.sample([f"d{i}" for i in range(8)], rng.randint(2, 6))
        base = sorted(((d, float(len(docs) - j)) for j, d in enumerate(docs)),
                      key=lambda e: -e[1])
        scale = rng.uniform(1.5, 3.0)
        consensus = {
            "ma": base,
            "mb": [(d, s * scale) for d, s in base],
            "mc": list(base),
        }
        want = [d for d, _ in base]
        for method in methods:
            got_ids = [d for d, _ in fuse_scores(consensus, method, ordinals.__getitem__)]
            ok &= got_ids == want
        if not ok:
            break
    announce(capsys, 5, "fusion correctness", ok)


def test_criterion_6_metrics_correctness(capsys):
    rng = random.Random(6006)
    ok = True
    for _ in range(1000):
        n = rng.randint(1, 10)
        rankings, gts = [], []
        for _ in range(n):
            ids = rng.sample([f"d{i}" for i in range(15)], rng.randint(0, 10))
            rankings.append([(d, float(10 - j)) for j, d in enumerate(ids)])
            gts.append(f"d{rng.randint(0, 16)}")
        bare = [[d for d, _ in r] for r in rankings]
        ok &= mrr(rankings, gts) == oracle_mrr(bare, gts)
        recalls = []
        for k in RECALL_KS:
            got = recall_at_k(rankings, gts, k)
            ok &= got == oracle_recall_at(bare, gts, k)
            recalls.append(got)
        ok &= recalls == sorted(recalls)  # monotone in K
        if not ok:
            break
    announce(capsys, 6, "metrics correctness", ok)


class _Q:
    def __init__(self, qid):
        self.id = qid
        self.text = "t"
        self.gt_id = "d"


def test_criterion_7_latency_protocol(capsys):
    queries = [_Q(f"q{i}") for i in range(120)]
    report = measure_latency(
        lambda q: time.sleep(0.005), queries, sample_size=100, repeats=3, seed=7
    )
    d = report.to_dict()
    shape = (
        d["sample_size"] == 100
        and d["repeats"] == 3
        and d["seed"] == 7
        and "per_query_std_s" in d
    )
    within = abs(report.per_query_mean - 0.005) <= 0.2 * 0.005
    announce(capsys, 7, "latency protocol", shape and within,
             f"mean {report.per_query_mean * 1000:.2f}ms std {report.per_query_std * 1000:.2f}ms")


def test_criterion_8_persistence_round_trip(capsys, tmp_path):
    # duplicated docs force score ties, so tie order is exercised
    lists = [["parse", "file"], ["parse", "file"], ["read", "data"],
             ["parse"], ["read", "data"], []]
    corpus = make_corpus(lists)
    index = build_index(corpus, FULL)
    save_lexical_index(tmp_path / "lex.toss", index)
    loaded = load_lexical_index(tmp_path / "lex.toss", expect_prep=FULL)
    queries = [["parse", "file"], ["read", "data"], ["zzz"], []]
    ok = True
    for q in queries:
        for method in LEXICAL_METHODS:
            ok &= top_k_lexical(q, index, method, 6) == top_k_lexical(q, loaded, method, 6)

    provider = stub_embedder(16, FULL)
    matrix = embed_corpus(corpus, provider)
    save_dense_matrix(tmp_path / "dense.toss", FULL, matrix.ids, matrix.vectors,
                      provider=matrix.provider_name, metric="cosine")
    _, _, ids, vectors = load_dense_matrix(tmp_path / "dense.toss")
    from toss.dense import EmbeddingMatrix, embed_query

    reloaded = EmbeddingMatrix(dim=16, ids=list(ids), vectors=vectors,
                               provider_name=matrix.provider_name)

    for text in ("parse file", "read data", ""):
        qvec = embed_query(text, provider)
        ok &= top_k_dense(qvec, matrix, 6, "cosine") == top_k_dense(qvec, reloaded, 6, "cosine")
    announce(capsys, 8, "persistence round trip", ok)


def test_criterion_9_end_to_end_desk_run(capsys):
    corpus, queries = desk_corpus()
    gts = [q.gt_id for q in queries]
    index = build_index(corpus, FULL)
    provider = stub_embedder(64, FULL)
    dense = DenseArtifact(
        matrix=embed_corpus(corpus, provider), provider=provider, metric="cosine"
    )
    arts = SearchArtifacts(corpus=corpus, index=index, dense=dense)
    channels = [ChannelSpec("bm25", "lexical-bm25", 10), ChannelSpec("dense", "dense", 10)]
    single = {}
    for ch in channels:
        rankings = [
            recall_channel(q.text, ch, arts.for_channel(ch), query_id=q.id)
            for q in queries
        ]
        single[ch.name] = mrr(rankings, gts)
    scorer = stub_scorer(index)
    rankings = [toss_search(q.text, channels, scorer, arts, query_id=q.id) for q in queries]
    toss_mrr = mrr(rankings, gts)
    best = max(single.values())
    announce(capsys, 9, "two-stage beats single channels", toss_mrr >= best - 1e-9,
             f"toss {toss_mrr:.4f} vs bm25 {single['bm25']:.4f}, dense {single['dense']:.4f}")
