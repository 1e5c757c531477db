"""Sentence embeddings: plain average, SIF weighting, principal component removal.

Both methods divide by the number of in-vocabulary tokens, so they differ
only by the per-word weight a/(p(w)+a) — the factor the method comparison
isolates. PCR projects sentence vectors off the top principal directions of
the (uncentered) sentence matrix.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import DataFormatError, EmptySentenceError, ParameterError
from .svd import EmbeddingMatrix

OOV_SKIP = "skip"
OOV_ZERO = "zero"
METHOD_AVG = "avg"
METHOD_SIF = "sif"


class MissingFrequencyWarning(UserWarning):
    """A token had no entry in the frequency table; its SIF weight is 1."""


@dataclass(frozen=True)
class SentenceEmbeddingConfig:
    """Method x PCR factorial cell: how to embed and what to remove."""

    method: str = METHOD_SIF
    a: float = 1e-3
    pcr_components: int = 1
    oov_policy: str = OOV_SKIP
    freq_source: str = "file"  # 'file' or 'corpus'

    def __post_init__(self):
        if self.method not in (METHOD_AVG, METHOD_SIF):
            raise ParameterError(f"unknown method {self.method!r}")
        if self.method == METHOD_SIF and self.a <= 0:
            raise ParameterError("SIF smoothing constant a must be positive")
        if self.pcr_components < 0:
            raise ParameterError("pcr_components must be nonnegative")
        if self.oov_policy not in (OOV_SKIP, OOV_ZERO):
            raise ParameterError(f"unknown oov_policy {self.oov_policy!r}")
        if self.freq_source not in ("file", "corpus"):
            raise ParameterError(f"unknown freq_source {self.freq_source!r}")


@dataclass
class SentenceMatrix:
    """One row per sentence plus the principal components removed so far."""

    rows: np.ndarray
    sentence_ids: list
    removed_components: list = field(default_factory=list)  # (singular value, unit vector)


def _in_vocab_rows(sentence: Sequence[str], vectors: EmbeddingMatrix, oov_policy: str):
    id_of = vectors.id_of
    ids = [id_of[t] for t in sentence if t in id_of]
    if not ids:
        if oov_policy == OOV_SKIP:
            raise EmptySentenceError(
                f"no in-vocabulary token in sentence {list(sentence)[:8]!r}"
            )
        return None, None
    kept = [t for t in sentence if t in id_of]
    return vectors.vectors[ids], kept


def embed_average(
    sentence: Sequence[str], vectors: EmbeddingMatrix, config: SentenceEmbeddingConfig
) -> np.ndarray:
    """Arithmetic mean of the embeddings of in-vocabulary tokens."""
    rows, _ = _in_vocab_rows(sentence, vectors, config.oov_policy)
    if rows is None:
        return np.zeros(vectors.d)
    return rows.mean(axis=0)


def embed_sif(
    sentence: Sequence[str],
    vectors: EmbeddingMatrix,
    p: Mapping[str, float],
    a: float,
    config: SentenceEmbeddingConfig,
) -> np.ndarray:
    """Length-normalized sum of a/(p(w)+a)-weighted word vectors.

    Tokens missing from the frequency table get p = 0, i.e. weight exactly
    1, with a MissingFrequencyWarning.
    """
    if a <= 0:
        raise ParameterError("a must be positive")
    rows, kept = _in_vocab_rows(sentence, vectors, config.oov_policy)
    if rows is None:
        return np.zeros(vectors.d)
    missing = [t for t in kept if t not in p]
    if missing:
        warnings.warn(
            f"{len(missing)} token(s) missing from frequency table, e.g. {missing[0]!r}",
            MissingFrequencyWarning,
            stacklevel=2,
        )
    weights = np.array([a / (p.get(t, 0.0) + a) for t in kept])
    return (weights[:, None] * rows).sum(axis=0) / len(kept)


def remove_principal_components(
    matrix: SentenceMatrix, r: int, centered: bool = False
) -> SentenceMatrix:
    """Ensure the matrix's top-r principal directions are projected out.

    ``r`` counts components removed in total: if the matrix already records
    ``r`` or more removed components the call is a no-op, which makes
    removal idempotent. Components are the top right singular vectors of the
    uncentered row matrix (``centered=True`` estimates them after mean
    subtraction, for sensitivity runs; projection is always applied to the
    raw rows).
    """
    rows = matrix.rows
    m, d = rows.shape
    if r < 0:
        raise ParameterError("r must be nonnegative")
    if r == 0 or len(matrix.removed_components) >= r:
        return SentenceMatrix(
            rows=rows.copy(),
            sentence_ids=list(matrix.sentence_ids),
            removed_components=list(matrix.removed_components),
        )
    if r >= min(m, d):
        raise ParameterError(f"r must be < min(m, d) = {min(m, d)}, got {r}")
    extra = r - len(matrix.removed_components)
    estimate_from = rows - rows.mean(axis=0) if centered else rows
    _, svals, vt = np.linalg.svd(estimate_from, full_matrices=False)
    comps = vt[:extra]
    projected = rows - (rows @ comps.T) @ comps
    removed = list(matrix.removed_components) + [
        (float(svals[i]), comps[i].copy()) for i in range(extra)
    ]
    return SentenceMatrix(
        rows=projected,
        sentence_ids=list(matrix.sentence_ids),
        removed_components=removed,
    )


def load_glove_text(path, expected_dim: Optional[int] = None) -> EmbeddingMatrix:
    """GloVe text format: 'token v1 ... vd' per line, no header."""
    tokens: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    dim = expected_dim
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                raise DataFormatError(f"{path}:{lineno}: expected token and vector")
            tok = parts[0]
            if dim is None:
                dim = len(parts) - 1
            elif len(parts) - 1 != dim:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {dim} components, found {len(parts) - 1}"
                )
            if tok in seen:
                continue  # keep the first occurrence
            try:
                vec = np.array(parts[1:], dtype=np.float64)
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad float in vector") from exc
            seen.add(tok)
            tokens.append(tok)
            rows.append(vec)
    if not rows:
        raise DataFormatError(f"{path}: no vectors found")
    return EmbeddingMatrix(vectors=np.vstack(rows), tokens=tokens)


def load_word2vec_text(path) -> EmbeddingMatrix:
    """word2vec text format: header 'n d', then 'token v1 ... vd' per line."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise DataFormatError(f"{path}: expected 'n d' header line")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise DataFormatError(f"{path}: bad header {header!r}") from exc
        tokens: list[str] = []
        rows = np.empty((count, dim), dtype=np.float64)
        seen: set[str] = set()
        filled = 0
        for lineno, line in enumerate(fh, 2):
            if filled >= count:
                break
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise DataFormatError(
                    f"{path}:{lineno}: expected token plus {dim} components"
                )
            tok = parts[0]
            if tok in seen:
                continue
            try:
                rows[filled] = np.array(parts[1:], dtype=np.float64)
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad float in vector") from exc
            seen.add(tok)
            tokens.append(tok)
            filled += 1
    if filled != count:
        raise DataFormatError(f"{path}: header promised {count} vectors, found {filled}")
    return EmbeddingMatrix(vectors=rows, tokens=tokens)


def load_word_vectors(path, fmt: str = "auto") -> EmbeddingMatrix:
    """Load 'glove' or 'word2vec' text vectors; 'auto' sniffs for the header."""
    if fmt == "auto":
        with open(path, encoding="utf-8") as fh:
            first = fh.readline().split()
        fmt = "word2vec" if len(first) == 2 else "glove"
    if fmt == "glove":
        return load_glove_text(path)
    if fmt == "word2vec":
        return load_word2vec_text(path)
    raise ParameterError(f"unknown vector format {fmt!r}")


def load_frequency_tsv(path) -> dict[str, float]:
    """token<TAB>count lines -> normalized probabilities."""
    counts: dict[str, float] = {}
    total = 0.0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise DataFormatError(f"{path}:{lineno}: expected token<TAB>count")
            try:
                cnt = float(fields[1])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad count {fields[1]!r}") from exc
            if cnt < 0:
                raise DataFormatError(f"{path}:{lineno}: negative count")
            counts[fields[0]] = counts.get(fields[0], 0.0) + cnt
            total += cnt
    if total <= 0:
        raise DataFormatError(f"{path}: no usable counts")
    return {t: c / total for t, c in counts.items()}


def probabilities_from_vocabulary(vocab) -> dict[str, float]:
    """Corpus-derived frequency table: token -> unigram probability."""
    total = float(vocab.total_tokens)
    return {t: int(c) / total for t, c in zip(vocab.tokens, vocab.counts)}
