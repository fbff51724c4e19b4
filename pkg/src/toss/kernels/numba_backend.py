"""Numba-compiled scoring kernels.

Same contracts as numpy_backend; accumulation order matches it term by term,
posting by posting, so both backends agree to float64 rounding.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def bm25_accumulate(offsets, post_docs, post_tfs, term_ids, term_weights, doc_len_norm, k1, n_docs):
    scores = np.zeros(n_docs, dtype=np.float64)
    for i in range(term_ids.shape[0]):
        t = term_ids[i]
        w = term_weights[i]
        for p in range(offsets[t], offsets[t + 1]):
            d = post_docs[p]
            tf = post_tfs[p]
            scores[d] += w * tf * (k1 + 1.0) / (tf + k1 * doc_len_norm[d])
    return scores


@njit(cache=True)
def accumulate_weighted(offsets, post_docs, post_tfs, term_ids, term_weights, n_docs):
    scores = np.zeros(n_docs, dtype=np.float64)
    for i in range(term_ids.shape[0]):
        t = term_ids[i]
        w = term_weights[i]
        for p in range(offsets[t], offsets[t + 1]):
            scores[post_docs[p]] += w * post_tfs[p]
    return scores


@njit(cache=True)
def accumulate_presence(offsets, post_docs, term_ids, n_docs):
    hits = np.zeros(n_docs, dtype=np.float64)
    for i in range(term_ids.shape[0]):
        t = term_ids[i]
        for p in range(offsets[t], offsets[t + 1]):
            hits[post_docs[p]] += 1.0
    return hits
