"""Compare the numba and numpy scoring kernels on synthetic postings.

Builds a CSR-by-term postings layout of configurable size, then times the
three accumulation kernels under both backends. The numba functions are
called once before timing so compilation cost stays out of the numbers.

Usage: python3 benchmarks/bench_kernels.py [--docs 50000] [--vocab 5000]
       [--avg-len 40] [--query-terms 8] [--repeats 20]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from toss.kernels import numpy_backend

try:
    from toss.kernels import numba_backend
except ImportError:
    numba_backend = None


def synth_postings(rng, n_docs, n_terms, avg_len):
    """Zipf-ish postings: term t appears in about n_docs/(t+1) documents."""
    offsets = np.zeros(n_terms + 1, dtype=np.int64)
    docs_chunks = []
    total_budget = n_docs * avg_len
    spent = 0
    for t in range(n_terms):
        df = max(1, int(n_docs / (t + 1) ** 0.7 * 0.3))
        df = min(df, n_docs)
        members = np.sort(rng.choice(n_docs, size=df, replace=False))
        docs_chunks.append(members)
        offsets[t + 1] = offsets[t] + df
        spent += df
        if spent >= total_budget:
            offsets[t + 2 :] = offsets[t + 1]
            break
    post_docs = np.concatenate(docs_chunks).astype(np.int64)
    post_tfs = rng.integers(1, 6, size=len(post_docs)).astype(np.int64)
    doc_lengths = np.bincount(post_docs, weights=post_tfs, minlength=n_docs)
    doc_lengths = np.maximum(doc_lengths, 1.0)
    return offsets, post_docs, post_tfs, doc_lengths


def time_call(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=50_000)
    ap.add_argument("--vocab", type=int, default=5_000)
    ap.add_argument("--avg-len", type=int, default=40)
    ap.add_argument("--query-terms", type=int, default=8)
    ap.add_argument("--repeats", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    offsets, post_docs, post_tfs, doc_lengths = synth_postings(
        rng, args.docs, args.vocab, args.avg_len
    )
    print(
        f"postings: {len(post_docs):,} entries, {args.docs:,} docs, "
        f"{args.vocab:,} terms, query of {args.query_terms}"
    )

    term_ids = rng.integers(0, args.vocab, size=args.query_terms).astype(np.int64)
    weights = rng.uniform(0.5, 3.0, size=args.query_terms)
    avgdl = float(doc_lengths.mean())
    dl_norm = 1.0 - 0.75 + 0.75 * doc_lengths / avgdl

    cases = {
        "bm25_accumulate": (
            offsets, post_docs, post_tfs, term_ids, weights, dl_norm, 1.5, args.docs,
        ),
        "accumulate_weighted": (offsets, post_docs, post_tfs, term_ids, weights, args.docs),
        "accumulate_presence": (offsets, post_docs, term_ids, args.docs),
    }

    backends = {"numpy": numpy_backend}
    if numba_backend is not None:
        backends["numba"] = numba_backend
    else:
        print("numba unavailable; timing the numpy backend only")

    results: dict[str, dict[str, float]] = {}
    for name, backend in backends.items():
        for kernel, call_args in cases.items():
            fn = getattr(backend, kernel)
            fn(*call_args)  # warm-up / JIT
            results.setdefault(kernel, {})[name] = time_call(fn, call_args, args.repeats)

    width = max(len(k) for k in cases)
    header = f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for kernel, times in results.items():
        np_ms = times["numpy"] * 1e3
        if "numba" in times:
            nb_ms = times["numba"] * 1e3
            print(f"{kernel:<{width}}  {np_ms:>8.3f}ms  {nb_ms:>8.3f}ms  {np_ms / nb_ms:>7.2f}x")
        else:
            print(f"{kernel:<{width}}  {np_ms:>8.3f}ms  {'-':>10}  {'-':>8}")

    check_args = cases["bm25_accumulate"]
    outs = [backend.bm25_accumulate(*check_args) for backend in backends.values()]
    if len(outs) == 2 and not np.array_equal(outs[0], outs[1]):
        raise SystemExit("backend outputs diverged; this is a bug")
    print("backend outputs identical" if len(outs) == 2 else "single backend checked")


if __name__ == "__main__":
    main()
