"""Randomized truncated SVD and embedding extraction.

Range finder with a seeded Gaussian test matrix, subspace (power)
iterations with QR re-orthonormalization, then an exact SVD of the
projected small matrix. Deterministic given (matrix, rank, seed,
oversample, power_iters).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import sparse

from .errors import DegenerateResultError, ParameterError

WEIGHTING_HALF_SIGMA = "half_sigma"
WEIGHTING_FULL_SIGMA = "full_sigma"
WEIGHTING_NO_SIGMA = "no_sigma"
_WEIGHTINGS = (WEIGHTING_HALF_SIGMA, WEIGHTING_FULL_SIGMA, WEIGHTING_NO_SIGMA)


@dataclass(frozen=True)
class SvdResult:
    """Truncated factorization A ~ U diag(S) V^T with orthonormal U, V columns."""

    U: np.ndarray  # (m, rank)
    S: np.ndarray  # (rank,), non-increasing, >= 0
    V: np.ndarray  # (n, rank)
    rank: int
    seed: int


@dataclass
class EmbeddingMatrix:
    """Dense row-per-word vectors, optionally carrying the token list.

    Row i is the embedding of vocabulary id i. ``tokens`` is set when the
    matrix was loaded from a vector file or explicitly attached; SVD-derived
    matrices get tokens attached by the pipeline.
    """

    vectors: np.ndarray  # (n, d) float64
    tokens: Optional[list] = None

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise ParameterError("embedding matrix must be 2-d")
        if self.tokens is not None and len(self.tokens) != self.vectors.shape[0]:
            raise ParameterError("token list length does not match row count")
        self._id_of = None
        self._norms = None

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    @property
    def id_of(self) -> dict:
        if self.tokens is None:
            raise ParameterError("embedding matrix has no token list attached")
        if self._id_of is None:
            self._id_of = {t: i for i, t in enumerate(self.tokens)}
        return self._id_of

    def with_tokens(self, tokens: Sequence[str]) -> "EmbeddingMatrix":
        return EmbeddingMatrix(vectors=self.vectors, tokens=list(tokens))

    def row_norms(self) -> np.ndarray:
        if self._norms is None:
            self._norms = np.linalg.norm(self.vectors, axis=1)
        return self._norms

    def unit_vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """L2-normalized rows plus a mask flagging all-zero rows.

        Zero rows cannot be normalized; they are left as zeros and flagged
        so callers can drop or report them.
        """
        norms = self.row_norms()
        zero_rows = norms == 0.0
        safe = np.where(zero_rows, 1.0, norms)
        return self.vectors / safe[:, None], zero_rows


def truncated_svd(
    target,
    rank: int,
    seed: int = 0,
    oversample: int = 10,
    power_iters: int = 4,
) -> SvdResult:
    """Rank-``rank`` randomized SVD of a sparse matrix or FactorizationTarget.

    Args:
        target: FactorizationTarget, scipy sparse matrix, or dense ndarray.
        rank: number of singular triplets to keep; must not exceed min(shape).
        seed: seeds the Gaussian test matrix; identical inputs give
            bit-identical output.
        oversample: extra test columns beyond ``rank`` (clipped at min(shape)).
        power_iters: subspace iterations; more buys accuracy on flat spectra.
    """
    mat = getattr(target, "matrix", target)
    if oversample < 0 or power_iters < 0:
        raise ParameterError("oversample and power_iters must be nonnegative")
    m, n = mat.shape
    if rank < 1 or rank > min(m, n):
        raise ParameterError(f"rank must lie in [1, {min(m, n)}], got {rank}")
    nnz = mat.nnz if sparse.issparse(mat) else np.count_nonzero(mat)
    if nnz == 0:
        raise DegenerateResultError("matrix has no nonzero entries")

    if sparse.issparse(mat):
        mat = mat.tocsr().astype(np.float64)
        mat_t = mat.T.tocsr()
    else:
        mat = np.asarray(mat, dtype=np.float64)
        mat_t = mat.T

    l = min(rank + oversample, min(m, n))
    rng = np.random.default_rng(seed)
    test = rng.standard_normal((n, l))
    q, _ = np.linalg.qr(mat @ test)
    for _ in range(power_iters):
        q, _ = np.linalg.qr(mat_t @ q)
        q, _ = np.linalg.qr(mat @ q)
    small = q.T @ mat if not sparse.issparse(mat) else (mat_t @ q).T
    u_small, s, vt = np.linalg.svd(small, full_matrices=False)
    u = q @ u_small[:, :rank]
    v = vt[:rank].T.copy()
    s = s[:rank].copy()
    _fix_signs(u, v)
    return SvdResult(U=u, S=s, V=v, rank=rank, seed=seed)


def _fix_signs(u: np.ndarray, v: np.ndarray) -> None:
    """Flip each column pair so U's largest-magnitude entry is positive."""
    idx = np.abs(u).argmax(axis=0)
    flip = u[idx, np.arange(u.shape[1])] < 0
    u[:, flip] *= -1.0
    v[:, flip] *= -1.0


def extract_embeddings(svd: SvdResult, weighting: str = WEIGHTING_HALF_SIGMA) -> EmbeddingMatrix:
    """Turn SVD factors into word vectors.

    half_sigma -> U diag(sqrt(S)) (the symmetric convention), full_sigma ->
    U diag(S), no_sigma -> U.
    """
    if weighting not in _WEIGHTINGS:
        raise ParameterError(f"weighting must be one of {_WEIGHTINGS}, got {weighting!r}")
    if weighting == WEIGHTING_NO_SIGMA:
        vectors = svd.U.copy()
    elif weighting == WEIGHTING_FULL_SIGMA:
        vectors = svd.U * svd.S
    else:
        vectors = svd.U * np.sqrt(svd.S)
    return EmbeddingMatrix(vectors=vectors)


def dump_word2vec_text(emb: EmbeddingMatrix, path, tokens: Optional[Sequence[str]] = None) -> None:
    """word2vec text format: header line 'n d', then 'token v1 ... vd'."""
    toks = list(tokens) if tokens is not None else emb.tokens
    if toks is None or len(toks) != emb.n:
        raise ParameterError("need one token per embedding row")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{emb.n} {emb.d}\n")
        for tok, row in zip(toks, emb.vectors):
            fh.write(tok + " " + " ".join(f"{x:.6f}" for x in row) + "\n")
