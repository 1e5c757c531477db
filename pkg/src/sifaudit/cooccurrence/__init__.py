"""Symmetric sliding-window co-occurrence counting.

The inner counting loop runs in a compiled Cython kernel when available and
falls back to a vectorized numpy implementation otherwise; both produce
bit-identical results (``benchmarks/bench_cooccurrence.py`` compares them).
Set SIFAUDIT_NO_EXT=1 to force the fallback.
"""
from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import sparse

from ..errors import DataFormatError, ParameterError
from . import _window_py

if os.environ.get("SIFAUDIT_NO_EXT") == "1":
    _kernel = _window_py
    HAVE_COMPILED_KERNEL = False
else:
    try:
        from . import _window_kernel as _kernel  # type: ignore[no-redef]

        HAVE_COMPILED_KERNEL = True
    except ImportError:
        _kernel = _window_py
        HAVE_COMPILED_KERNEL = False

_MAGIC = b"SIFCOOC1"
_COUNT_MAX = np.int64(2**31 - 1)  # counts are stored as 32-bit


def kernel_backend() -> str:
    """Name of the counting kernel selected at import ('compiled' or 'numpy')."""
    return "compiled" if HAVE_COMPILED_KERNEL else "numpy"


@dataclass(frozen=True)
class WindowConfig:
    """Symmetric context window: ``window`` tokens on each side.

    ``distance_weighting`` is accepted for config compatibility; both
    'uniform' and 'none' weigh every pair 1, keeping counts integral.
    """

    window: int = 5
    distance_weighting: str = "uniform"

    def __post_init__(self):
        if self.window < 1:
            raise ParameterError(f"window must be >= 1, got {self.window}")
        if self.distance_weighting not in ("uniform", "none"):
            raise ParameterError(
                f"unknown distance_weighting {self.distance_weighting!r}"
            )


@dataclass(frozen=True)
class CoocCounts:
    """Symmetric sparse co-occurrence counts with cached marginals."""

    n: int
    matrix: sparse.csr_matrix  # int32 data, shape (n, n)
    row_sums: np.ndarray = field(init=False)  # int64
    total_pairs: int = field(init=False)

    def __post_init__(self):
        if self.matrix.shape != (self.n, self.n):
            raise ParameterError("matrix shape does not match n")
        sums = np.asarray(self.matrix.sum(axis=1)).ravel().astype(np.int64)
        object.__setattr__(self, "row_sums", sums)
        object.__setattr__(self, "total_pairs", int(sums.sum()))

    def entry(self, w: int, c: int) -> int:
        return int(self.matrix[w, c])

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)


def _as_id_array(token_ids) -> np.ndarray:
    if isinstance(token_ids, np.ndarray):
        return np.ascontiguousarray(token_ids, dtype=np.int32)
    return np.fromiter(
        (-1 if t is None else t for t in token_ids), dtype=np.int32
    )


def _counts_from_triples(rows, cols, counts, n: int) -> CoocCounts:
    if counts.size and counts.max() > _COUNT_MAX:
        raise OverflowError("co-occurrence count exceeds 32-bit storage")
    mat = sparse.csr_matrix(
        (counts.astype(np.int32), (rows, cols)), shape=(n, n)
    )
    mat.sort_indices()
    return CoocCounts(n=n, matrix=mat)


def count_cooccurrences(
    token_ids, config: WindowConfig, n: int
) -> CoocCounts:
    """Count word-context pairs over a symmetric window.

    ``token_ids`` is a sequence of vocabulary ids with out-of-vocabulary
    positions marked -1 (or None); OOV positions occupy a slot — they do not
    shrink anyone's window — but contribute no pairs. Every ordered position
    pair (i, j) with 0 < |i - j| <= window and both ends in-vocabulary adds 1
    to entry(id_i, id_j), so the result is symmetric by construction.
    """
    ids = _as_id_array(token_ids)
    _validate_ids(ids, n)
    rows, cols, counts = _kernel.count_pairs(ids, config.window, n, 0, ids.shape[0])
    return _counts_from_triples(rows, cols, counts, n)


def count_cooccurrences_sharded(
    token_ids, config: WindowConfig, n: int, num_shards: int
) -> CoocCounts:
    """Shard the stream by left position and merge per-shard counts.

    Each shard owns pairs whose left position falls in its range and reads
    up to ``window`` positions past its boundary, so the merged result is
    byte-identical to sequential counting.
    """
    if num_shards < 1:
        raise ParameterError("num_shards must be >= 1")
    ids = _as_id_array(token_ids)
    _validate_ids(ids, n)
    length = ids.shape[0]
    bounds = np.linspace(0, length, num_shards + 1, dtype=np.int64)
    acc: Optional[sparse.csr_matrix] = None
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        rows, cols, counts = _kernel.count_pairs(ids, config.window, n, int(lo), int(hi))
        part = sparse.csr_matrix((counts, (rows, cols)), shape=(n, n))
        acc = part if acc is None else acc + part
    if acc is None:
        acc = sparse.csr_matrix((n, n), dtype=np.int64)
    coo = acc.tocoo()
    return _counts_from_triples(
        coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.astype(np.int64), n
    )


def merge_counts(parts: Sequence[CoocCounts]) -> CoocCounts:
    """Merge disjoint-shard counts by addition."""
    if not parts:
        raise ParameterError("nothing to merge")
    n = parts[0].n
    if any(p.n != n for p in parts):
        raise ParameterError("shards disagree on vocabulary size")
    acc = parts[0].matrix.astype(np.int64)
    for p in parts[1:]:
        acc = acc + p.matrix.astype(np.int64)
    coo = acc.tocoo()
    return _counts_from_triples(
        coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.astype(np.int64), n
    )


def _validate_ids(ids: np.ndarray, n: int) -> None:
    if ids.size == 0:
        return
    mx = int(ids.max())
    mn = int(ids.min())
    if mx >= n:
        raise IndexError(f"token id {mx} out of range for vocabulary size {n}")
    if mn < -1:
        raise IndexError(f"negative token id {mn}; use -1 for out-of-vocabulary")


def dump_counts(cooc: CoocCounts, path) -> None:
    """Binary dump: magic, u32 n, u64 nnz, then little-endian u32 (row, col, count) triples."""
    coo = cooc.matrix.tocoo()
    triples = np.empty(
        coo.nnz, dtype=np.dtype([("row", "<u4"), ("col", "<u4"), ("count", "<u4")])
    )
    triples["row"] = coo.row
    triples["col"] = coo.col
    triples["count"] = coo.data
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IQ", cooc.n, coo.nnz))
        triples.tofile(fh)


def load_counts(path) -> CoocCounts:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise DataFormatError(f"{path}: not a co-occurrence dump (bad magic)")
        n, nnz = struct.unpack("<IQ", fh.read(12))
        triples = np.fromfile(
            fh, dtype=np.dtype([("row", "<u4"), ("col", "<u4"), ("count", "<u4")]), count=nnz
        )
    if triples.shape[0] != nnz:
        raise DataFormatError(f"{path}: truncated dump")
    return _counts_from_triples(
        triples["row"].astype(np.int64),
        triples["col"].astype(np.int64),
        triples["count"].astype(np.int64),
        int(n),
    )


def dump_counts_tsv(cooc: CoocCounts, path) -> None:
    """Debug dump: ``row<TAB>col<TAB>count`` in row-major order."""
    coo = cooc.matrix.tocoo()
    with open(path, "w", encoding="utf-8") as fh:
        for r, c, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r}\t{c}\t{v}\n")
