"""Factorization targets built from co-occurrence counts.

Two targets share one sparse container: the shifted PMI matrix
log(#(w,c) * T / (#w * #c)) - log k, and the M matrix
((p(w) + a) / a) * (log p(w|c) + log Z). Cells with zero count are absent
from storage and treated as 0 by the factorizer — both log p(w|c) and PMI
diverge there, and truncated SVD of the sparse matrix implicitly zero-fills.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .corpus import UnigramDistribution
from .cooccurrence import CoocCounts
from .errors import DataFormatError, ParameterError

KIND_SHIFTED_PMI = "shifted_pmi"
KIND_M_MATRIX = "m_matrix"

_MAGIC = b"SIFTARG1"
_KIND_CODES = {KIND_SHIFTED_PMI: 1, KIND_M_MATRIX: 2}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}


@dataclass(frozen=True)
class FactorizationTarget:
    """Sparse real matrix tagged with how it was built."""

    n: int
    kind: str
    params: dict  # {'k': ...} or {'a': ..., 'log_z': ...}
    matrix: sparse.csr_matrix  # float64
    clamp_negative: bool

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ParameterError(f"unknown matrix kind {self.kind!r}")
        if self.matrix.shape != (self.n, self.n):
            raise ParameterError("matrix shape does not match n")
        if self.clamp_negative and self.matrix.nnz and self.matrix.data.min() <= 0:
            raise ParameterError("clamped target must store strictly positive values")

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)


def _assemble(rows, cols, vals, n, kind, params, clamp) -> FactorizationTarget:
    if clamp:
        keep = vals > 0
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
    mat = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    mat.sort_indices()
    return FactorizationTarget(
        n=n, kind=kind, params=params, matrix=mat, clamp_negative=clamp
    )


def build_shifted_pmi(cooc: CoocCounts, k: float = 1.0, clamp: bool = True) -> FactorizationTarget:
    """Shifted PMI target: log(#(w,c) * T / (#w * #c)) - log k on stored cells.

    With ``clamp`` (the default) values <= 0 are dropped, giving the
    positive-PMI variant; k=1 means plain PMI with no shift.
    """
    if k <= 0:
        raise ParameterError(f"k must be positive, got {k}")
    if cooc.total_pairs <= 0:
        raise ParameterError("co-occurrence counts are empty")
    coo = cooc.matrix.tocoo()
    counts = coo.data.astype(np.float64)
    marg = cooc.row_sums.astype(np.float64)
    vals = (
        np.log(counts)
        + np.log(float(cooc.total_pairs))
        - np.log(marg[coo.row])
        - np.log(marg[coo.col])
        - np.log(k)
    )
    return _assemble(coo.row, coo.col, vals, cooc.n, KIND_SHIFTED_PMI, {"k": float(k)}, clamp)


def build_m_matrix(
    cooc: CoocCounts,
    p: UnigramDistribution,
    a: float = 1e-3,
    log_z: float = 13.0,
    clamp: bool = True,
) -> FactorizationTarget:
    """M target: ((p(w) + a) / a) * (log p(w|c) + log Z) on stored cells.

    p(w|c) is the empirical #(w,c)/#c from the counts; p(w) comes from the
    unigram distribution. Negative cells destabilize the truncated SVD, so
    ``clamp`` defaults to dropping values <= 0; pass clamp=False for the
    unclamped variant.
    """
    if a <= 0:
        raise ParameterError(f"a must be positive, got {a}")
    if cooc.total_pairs <= 0:
        raise ParameterError("co-occurrence counts are empty")
    if p.n != cooc.n:
        raise ParameterError("unigram distribution size does not match counts")
    coo = cooc.matrix.tocoo()
    counts = coo.data.astype(np.float64)
    marg = cooc.row_sums.astype(np.float64)
    log_p_w_given_c = np.log(counts) - np.log(marg[coo.col])
    vals = ((p.p[coo.row] + a) / a) * (log_p_w_given_c + log_z)
    return _assemble(
        coo.row,
        coo.col,
        vals,
        cooc.n,
        KIND_M_MATRIX,
        {"a": float(a), "log_z": float(log_z)},
        clamp,
    )


def dump_target(target: FactorizationTarget, path) -> None:
    """Binary dump: magic, u32 n, u64 nnz, u8 kind, u8 clamp, params, f64 triples."""
    coo = target.matrix.tocoo()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IQBB", target.n, coo.nnz, _KIND_CODES[target.kind], int(target.clamp_negative)))
        if target.kind == KIND_SHIFTED_PMI:
            fh.write(struct.pack("<d", target.params["k"]))
        else:
            fh.write(struct.pack("<dd", target.params["a"], target.params["log_z"]))
        triples = np.empty(
            coo.nnz, dtype=np.dtype([("row", "<u4"), ("col", "<u4"), ("value", "<f8")])
        )
        triples["row"] = coo.row
        triples["col"] = coo.col
        triples["value"] = coo.data
        triples.tofile(fh)


def load_target(path) -> FactorizationTarget:
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise DataFormatError(f"{path}: not a factorization-target dump (bad magic)")
        n, nnz, kind_code, clamp = struct.unpack("<IQBB", fh.read(14))
        if kind_code not in _KIND_NAMES:
            raise DataFormatError(f"{path}: unknown matrix kind code {kind_code}")
        kind = _KIND_NAMES[kind_code]
        if kind == KIND_SHIFTED_PMI:
            (k,) = struct.unpack("<d", fh.read(8))
            params = {"k": k}
        else:
            a, log_z = struct.unpack("<dd", fh.read(16))
            params = {"a": a, "log_z": log_z}
        triples = np.fromfile(
            fh, dtype=np.dtype([("row", "<u4"), ("col", "<u4"), ("value", "<f8")]), count=nnz
        )
    if triples.shape[0] != nnz:
        raise DataFormatError(f"{path}: truncated dump")
    mat = sparse.csr_matrix(
        (triples["value"], (triples["row"].astype(np.int64), triples["col"].astype(np.int64))),
        shape=(int(n), int(n)),
    )
    mat.sort_indices()
    return FactorizationTarget(
        n=int(n), kind=kind, params=params, matrix=mat, clamp_negative=bool(clamp)
    )
