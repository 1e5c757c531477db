"""Pure-numpy sliding-window pair counting.

Fallback for :mod:`sifaudit.cooccurrence._window_kernel`; same contract,
selected at import time when the compiled extension is unavailable.
"""
from __future__ import annotations

import numpy as np
from scipy import sparse


def count_pairs(ids, window, n, start, stop):
    """Count co-occurrence pairs whose left position lies in [start, stop).

    For every position pair (i, j) with start <= i < stop, 0 < j - i <= window
    and both ids in-vocabulary (>= 0), increments both (ids[i], ids[j]) and
    (ids[j], ids[i]). Out-of-vocabulary positions (id -1) occupy a slot but
    contribute no pairs.

    Returns (rows, cols, counts) int64 arrays of unique cells in row-major
    order — identical to the compiled kernel's output.
    """
    ids = np.ascontiguousarray(ids, dtype=np.int32)
    length = ids.shape[0]
    acc = None
    for k in range(1, window + 1):
        hi = min(stop, length - k)
        if hi <= start:
            break
        left = ids[start:hi]
        right = ids[start + k : hi + k]
        mask = (left >= 0) & (right >= 0)
        l_ids = left[mask]
        r_ids = right[mask]
        if l_ids.size == 0:
            continue
        ones = np.ones(2 * l_ids.size, dtype=np.int64)
        mat = sparse.coo_matrix(
            (ones, (np.concatenate([l_ids, r_ids]), np.concatenate([r_ids, l_ids]))),
            shape=(n, n),
        ).tocsr()
        acc = mat if acc is None else acc + mat
    if acc is None:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    coo = acc.tocoo()  # csr -> coo yields row-major order
    return coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data
