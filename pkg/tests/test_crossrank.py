import random
import threading

import pytest

from toss.crossrank import (
    adapter_scorer,
    close_scorer,
    oracle_scorer,
    score_pairs,
    stub_scorer,
)
from toss.errors import AdapterError, UsageError
from toss.lexical import build_index
from toss.textprep import PrepConfig

from .conftest import make_corpus
from .oracles import oracle_bm25

NONE = PrepConfig.none()


def fixture_index():
    lists = [
        ["parse", "json", "file"],
        ["read", "file", "data"],
        ["token", "index", "parse"],
        ["merge", "sort", "list"],
    ]
    return build_index(make_corpus(lists), NONE), lists


def test_stub_matches_brute_force_bm25():
    index, lists = fixture_index()
    scorer = stub_scorer(index)
    codes = [(f"d{i}", " ".join(tokens)) for i, tokens in enumerate(lists)]
    got = score_pairs(scorer, "parse file", codes)
    expect = [oracle_bm25(["parse", "file"], lists, i) for i in range(len(lists))]
    assert got == pytest.approx(expect, abs=1e-9)


def test_stub_scores_noncorpus_text_consistently():
    index, _ = fixture_index()
    scorer = stub_scorer(index)
    # same tokens as d0, so the same corpus statistics apply
    got = score_pairs(scorer, "parse file", [("other", "parse json file")])
    expect = score_pairs(scorer, "parse file", [("d0", "parse json file")])
    assert got == expect


def test_oracle_marks_gt_highest():
    scorer = oracle_scorer({"q1": "d7"})
    codes = [("d1", "a"), ("d7", "b"), ("d9", "c")]
    scores = score_pairs(scorer, "whatever", codes, query_id="q1")
    assert scores == [0.0, 1.0, 0.0]


def test_oracle_unknown_query_all_zero():
    scorer = oracle_scorer({"q1": "d7"})
    codes = [("d1", "a"), ("d7", "b")]
    assert score_pairs(scorer, "x", codes, query_id="q404") == [0.0, 0.0]
    assert score_pairs(scorer, "x", codes, query_id=None) == [0.0, 0.0]


def test_oracle_different_queries_different_argmax():
    scorer = oracle_scorer({"q1": "a", "q2": "b"})
    codes = [("a", ""), ("b", "")]
    assert score_pairs(scorer, "x", codes, query_id="q1") == [1.0, 0.0]
    assert score_pairs(scorer, "x", codes, query_id="q2") == [0.0, 1.0]


def test_permutation_alignment():
    index, lists = fixture_index()
    scorer = stub_scorer(index)
    codes = [(f"d{i}", " ".join(tokens)) for i, tokens in enumerate(lists)]
    base = score_pairs(scorer, "parse file data", codes)
    rng = random.Random(3)
    for _ in range(5):
        perm = list(range(len(codes)))
        rng.shuffle(perm)
        permuted = score_pairs(scorer, "parse file data", [codes[i] for i in perm])
        assert permuted == [base[i] for i in perm]


def test_empty_codes_rejected():
    scorer = oracle_scorer({})
    with pytest.raises(UsageError, match="non-empty"):
        score_pairs(scorer, "q", [])


def test_invocation_counter_counts_pairs():
    index, lists = fixture_index()
    scorer = stub_scorer(index)
    codes = [(f"d{i}", " ".join(tokens)) for i, tokens in enumerate(lists)]
    assert scorer.pairs_scored == 0
    score_pairs(scorer, "parse", codes)
    score_pairs(scorer, "parse", codes[:2])
    assert scorer.pairs_scored == 6
    scorer.reset_count()
    assert scorer.pairs_scored == 0


def test_invocation_counter_thread_safe():
    scorer = oracle_scorer({})
    codes = [("d0", "x")] * 7

    def work():
        for _ in range(50):
            score_pairs(scorer, "q", codes, query_id="q")

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert scorer.pairs_scored == 4 * 50 * 7


def test_adapter_scorer_end_to_end(fake_adapter):
    scorer = adapter_scorer(fake_adapter("pair_scorer"))
    try:
        scores = score_pairs(scorer, "find parse", [("a", "parse x"), ("b", "other")])
        assert scores[0] > scores[1]
        assert scorer.pairs_scored == 2
    finally:
        close_scorer(scorer)


def test_adapter_batch_boundary_invariance(fake_adapter):
    scorer = adapter_scorer(fake_adapter("pair_scorer"))
    try:
        codes = [(f"d{i}", f"token{i} parse") for i in range(300)]  # crosses one boundary
        whole = score_pairs(scorer, "parse", codes)
        singles = [
            score_pairs(scorer, "parse", [c])[0] for c in codes[:3]
        ] + [score_pairs(scorer, "parse", [c])[0] for c in codes[255:258]]
        assert whole[:3] == singles[:3]
        assert whole[255:258] == singles[3:]
    finally:
        close_scorer(scorer)


def test_adapter_scorer_rejects_embedder_type(fake_adapter):
    with pytest.raises(AdapterError, match="embedder"):
        adapter_scorer(fake_adapter("embedder", "8"))
