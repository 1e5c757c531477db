# cython: boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled sliding-window pair counting (hash-map accumulation).

Same contract as sifaudit.cooccurrence._window_py.count_pairs; this is the
hot kernel for corpus-scale runs.
"""
from cython.operator cimport dereference as deref
from cython.operator cimport preincrement as inc
from libcpp.unordered_map cimport unordered_map

import numpy as np

cimport numpy as cnp

cnp.import_array()


def count_pairs(ids, int window, long long n, Py_ssize_t start, Py_ssize_t stop):
    """Count co-occurrence pairs whose left position lies in [start, stop).

    Increments both (ids[i], ids[j]) and (ids[j], ids[i]) for every pair of
    in-vocabulary positions with 0 < j - i <= window. Returns
    (rows, cols, counts) int64 arrays of unique cells in row-major order.
    """
    cdef const int[::1] view = np.ascontiguousarray(ids, dtype=np.int32)
    cdef Py_ssize_t length = view.shape[0]
    cdef unordered_map[unsigned long long, unsigned long long] acc
    cdef Py_ssize_t i, j, jmax
    cdef int wi, wj
    cdef unsigned long long key_ij, key_ji

    if stop > length:
        stop = length
    acc.reserve(1 << 12)
    with nogil:
        for i in range(start, stop):
            wi = view[i]
            if wi < 0:
                continue
            jmax = i + window
            if jmax >= length:
                jmax = length - 1
            for j in range(i + 1, jmax + 1):
                wj = view[j]
                if wj < 0:
                    continue
                key_ij = (<unsigned long long> wi << 32) | <unsigned int> wj
                key_ji = (<unsigned long long> wj << 32) | <unsigned int> wi
                acc[key_ij] += 1
                acc[key_ji] += 1

    cdef Py_ssize_t m = acc.size()
    keys_arr = np.empty(m, dtype=np.uint64)
    vals_arr = np.empty(m, dtype=np.int64)
    cdef unsigned long long[::1] keys = keys_arr
    cdef long long[::1] vals = vals_arr
    cdef Py_ssize_t pos = 0
    cdef unordered_map[unsigned long long, unsigned long long].iterator it = acc.begin()
    while it != acc.end():
        keys[pos] = deref(it).first
        vals[pos] = <long long> deref(it).second
        pos += 1
        inc(it)
    order = np.argsort(keys_arr, kind="stable")
    keys_sorted = keys_arr[order]
    rows = (keys_sorted >> 32).astype(np.int64)
    cols = (keys_sorted & 0xFFFFFFFF).astype(np.int64)
    return rows, cols, vals_arr[order]
