"""Pure-numpy scoring kernels, semantically identical to the numba backend.

Postings use a CSR-by-term layout: term t occupies post_docs/post_tfs slice
[offsets[t], offsets[t+1]). Doc ordinals within a term are unique and sorted,
so in-place fancy-index adds are safe.
"""

from __future__ import annotations

import numpy as np


def bm25_accumulate(offsets, post_docs, post_tfs, term_ids, term_weights, doc_len_norm, k1, n_docs):
    scores = np.zeros(n_docs, dtype=np.float64)
    for i in range(term_ids.shape[0]):
        t = term_ids[i]
        lo, hi = offsets[t], offsets[t + 1]
        docs = post_docs[lo:hi]
        tfs = post_tfs[lo:hi]
        scores[docs] += term_weights[i] * tfs * (k1 + 1.0) / (tfs + k1 * doc_len_norm[docs])
    return scores


def accumulate_weighted(offsets, post_docs, post_tfs, term_ids, term_weights, n_docs):
    scores = np.zeros(n_docs, dtype=np.float64)
    for i in range(term_ids.shape[0]):
        t = term_ids[i]
        lo, hi = offsets[t], offsets[t + 1]
        scores[post_docs[lo:hi]] += term_weights[i] * post_tfs[lo:hi]
    return scores


def accumulate_presence(offsets, post_docs, term_ids, n_docs):
    hits = np.zeros(n_docs, dtype=np.float64)
    for i in range(term_ids.shape[0]):
        t = term_ids[i]
        lo, hi = offsets[t], offsets[t + 1]
        hits[post_docs[lo:hi]] += 1.0
    return hits
