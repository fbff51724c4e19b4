import os
import random
import subprocess
import sys

import numpy as np
import pytest

from toss.kernels import active_backend, numpy_backend
from toss.lexical import build_index
from toss.textprep import PrepConfig

from .conftest import make_corpus, random_token_lists

PROBE = "import toss.kernels as k; print(k.active_backend())"


def run_probe(env_value):
    env = dict(os.environ)
    env.pop("TOSS_BACKEND", None)
    if env_value is not None:
        env["TOSS_BACKEND"] = env_value
    return subprocess.run(
        [sys.executable, "-c", PROBE], capture_output=True, text=True, env=env
    )


def test_env_selects_numpy_backend():
    proc = run_probe("numpy")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "numpy"


def test_env_selects_numba_backend():
    pytest.importorskip("numba")
    proc = run_probe("numba")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "numba"


def test_default_backend_is_numba_when_available():
    pytest.importorskip("numba")
    proc = run_probe(None)
    assert proc.stdout.strip() == "numba"


def test_unknown_backend_value_rejected():
    proc = run_probe("gpu")
    assert proc.returncode != 0
    assert "TOSS_BACKEND" in proc.stderr


def test_active_backend_matches_env():
    requested = os.environ.get("TOSS_BACKEND", "numba")
    assert active_backend() == requested


def random_csr(rng):
    lists = random_token_lists(rng, max_docs=25, max_len=15)
    index = build_index(make_corpus(lists), PrepConfig.none())
    n_terms = len(index.vocabulary)
    q_size = rng.randint(1, 6)
    term_ids = np.array(
        [rng.randrange(n_terms) for _ in range(q_size)] if n_terms else [], dtype=np.int64
    )
    weights = np.array([rng.uniform(0.1, 3.0) for _ in range(len(term_ids))])
    return index, term_ids, weights


def test_backends_agree_bitwise():
    numba_backend = pytest.importorskip("toss.kernels.numba_backend")
    rng = random.Random(31)
    for _ in range(25):
        index, term_ids, weights = random_csr(rng)
        if not len(term_ids):
            continue
        norm = 1.0 - 0.75 + 0.75 * index.doc_lengths / index.avgdl
        args_bm25 = (
            index.offsets,
            index.post_docs,
            index.post_tfs,
            term_ids,
            weights,
            norm,
            1.5,
            index.doc_count,
        )
        assert np.array_equal(
            numpy_backend.bm25_accumulate(*args_bm25),
            numba_backend.bm25_accumulate(*args_bm25),
        )
        args_w = (index.offsets, index.post_docs, index.post_tfs, term_ids, weights, index.doc_count)
        assert np.array_equal(
            numpy_backend.accumulate_weighted(*args_w),
            numba_backend.accumulate_weighted(*args_w),
        )
        args_p = (index.offsets, index.post_docs, term_ids, index.doc_count)
        assert np.array_equal(
            numpy_backend.accumulate_presence(*args_p),
            numba_backend.accumulate_presence(*args_p),
        )


def naive_bm25(index, term_ids, weights, norm, k1):
    scores = [0.0] * index.doc_count
    for i, t in enumerate(term_ids):
        lo, hi = index.offsets[t], index.offsets[t + 1]
        for j in range(lo, hi):
            d = index.post_docs[j]
            tf = float(index.post_tfs[j])
            scores[d] += weights[i] * tf * (k1 + 1.0) / (tf + k1 * norm[d])
    return scores


def test_kernels_match_naive_loops():
    rng = random.Random(8)
    for _ in range(20):
        index, term_ids, weights = random_csr(rng)
        if not len(term_ids):
            continue
        norm = 1.0 - 0.75 + 0.75 * index.doc_lengths / index.avgdl
        got = numpy_backend.bm25_accumulate(
            index.offsets,
            index.post_docs,
            index.post_tfs,
            term_ids,
            weights,
            norm,
            1.5,
            index.doc_count,
        )
        expect = naive_bm25(index, term_ids, weights, norm, 1.5)
        assert got.tolist() == pytest.approx(expect, abs=1e-12)

        got_w = numpy_backend.accumulate_weighted(
            index.offsets, index.post_docs, index.post_tfs, term_ids, weights, index.doc_count
        )
        expect_w = [0.0] * index.doc_count
        for i, t in enumerate(term_ids):
            lo, hi = index.offsets[t], index.offsets[t + 1]
            for j in range(lo, hi):
                expect_w[index.post_docs[j]] += weights[i] * float(index.post_tfs[j])
        assert got_w.tolist() == pytest.approx(expect_w, abs=1e-12)

        got_p = numpy_backend.accumulate_presence(
            index.offsets, index.post_docs, term_ids, index.doc_count
        )
        expect_p = [0.0] * index.doc_count
        for t in term_ids:
            lo, hi = index.offsets[t], index.offsets[t + 1]
            for j in range(lo, hi):
                expect_p[index.post_docs[j]] += 1.0
        assert got_p.tolist() == expect_p


def test_repeated_query_term_accumulates_twice():
    index = build_index(make_corpus([["parse", "file"], ["parse"]]), PrepConfig.none())
    tid = index.vocabulary["parse"]
    term_ids = np.array([tid, tid], dtype=np.int64)
    weights = np.array([1.0, 1.0])
    once = numpy_backend.accumulate_weighted(
        index.offsets, index.post_docs, index.post_tfs, term_ids[:1], weights[:1], 2
    )
    twice = numpy_backend.accumulate_weighted(
        index.offsets, index.post_docs, index.post_tfs, term_ids, weights, 2
    )
    assert np.array_equal(twice, once * 2)
