"""Word-level benchmarks: similarity (Spearman x 100) and analogy accuracy.

Out-of-vocabulary pairs and questions are dropped and counted, never scored
as failures; coverage is always part of the result because published scores
rarely state it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..errors import CoverageError
from ..svd import EmbeddingMatrix
from .datasets import AnalogyDataset, WordSimDataset
from .stats import spearman

ANALOGY_ADD = "add"
ANALOGY_MUL = "mul"
_MUL_EPS = 1e-3
_CHUNK = 256


@dataclass(frozen=True)
class SimilarityResult:
    score: float  # Spearman x 100
    n_pairs: int
    n_used: int
    n_dropped: int
    name: str


@dataclass(frozen=True)
class AnalogySetResult:
    accuracy: float  # percent over attempted
    n_questions: int
    n_attempted: int
    n_dropped: int


@dataclass(frozen=True)
class AnalogyResult:
    """Micro-averaged accuracy over all questions of the combined sets."""

    accuracy: float
    n_questions: int
    n_attempted: int
    n_dropped: int
    per_set: dict  # source tag -> AnalogySetResult
    method: str


def eval_similarity(vectors: EmbeddingMatrix, dataset: WordSimDataset) -> SimilarityResult:
    """Cosine similarity per pair, Spearman x 100 against the human scores."""
    unit, zero_rows = vectors.unit_vectors()
    id_of = vectors.id_of
    cosines = []
    human = []
    dropped = 0
    for w1, w2, score in dataset.pairs:
        i = id_of.get(w1)
        j = id_of.get(w2)
        if i is None or j is None or zero_rows[i] or zero_rows[j]:
            dropped += 1
            continue
        cosines.append(float(unit[i] @ unit[j]))
        human.append(score)
    if not cosines:
        raise CoverageError(f"{dataset.name}: every pair is out of vocabulary")
    return SimilarityResult(
        score=100.0 * spearman(cosines, human),
        n_pairs=len(dataset.pairs),
        n_used=len(cosines),
        n_dropped=dropped,
        name=dataset.name,
    )


def eval_analogy(
    vectors: EmbeddingMatrix,
    dataset: Union[AnalogyDataset, Sequence[AnalogyDataset]],
    method: str = ANALOGY_ADD,
) -> AnalogyResult:
    """Answer a:b :: c:? over unit vectors, excluding the three query words.

    'add' scores candidates by cos(w, b - a + c); 'mul' by the multiplicative
    combination of the three shifted cosines. Accuracy is micro-averaged over
    the attempted questions of all given sets, with a per-set breakdown.
    """
    datasets = [dataset] if isinstance(dataset, AnalogyDataset) else list(dataset)
    unit, zero_rows = vectors.unit_vectors()
    id_of = vectors.id_of

    per_set = {}
    total_correct = 0
    total_attempted = 0
    total_questions = 0
    total_dropped = 0
    for ds in datasets:
        qids = []
        for a, b, c, d in ds.questions:
            ids = (id_of.get(a), id_of.get(b), id_of.get(c), id_of.get(d))
            if any(i is None or zero_rows[i] for i in ids):
                continue
            qids.append(ids)
        dropped = len(ds.questions) - len(qids)
        correct = _count_correct(unit, zero_rows, qids, method)
        per_set[ds.source] = AnalogySetResult(
            accuracy=100.0 * correct / len(qids) if qids else 0.0,
            n_questions=len(ds.questions),
            n_attempted=len(qids),
            n_dropped=dropped,
        )
        total_correct += correct
        total_attempted += len(qids)
        total_questions += len(ds.questions)
        total_dropped += dropped
    if total_attempted == 0:
        raise CoverageError("every analogy question is out of vocabulary")
    return AnalogyResult(
        accuracy=100.0 * total_correct / total_attempted,
        n_questions=total_questions,
        n_attempted=total_attempted,
        n_dropped=total_dropped,
        per_set=per_set,
        method=method,
    )


def _count_correct(unit, zero_rows, qids, method) -> int:
    if not qids:
        return 0
    ids = np.asarray(qids, dtype=np.int64)  # columns a, b, c, d
    correct = 0
    for lo in range(0, ids.shape[0], _CHUNK):
        batch = ids[lo : lo + _CHUNK]
        a, b, c, d = batch.T
        if method == ANALOGY_ADD:
            queries = unit[b] - unit[a] + unit[c]
            scores = unit @ queries.T  # (n, batch)
        else:
            # shift cosines into [0, 1] to keep the product monotone
            pos_a = (1.0 + unit @ unit[a].T) / 2.0
            pos_b = (1.0 + unit @ unit[b].T) / 2.0
            pos_c = (1.0 + unit @ unit[c].T) / 2.0
            scores = pos_b * pos_c / (pos_a + _MUL_EPS)
        scores[zero_rows] = -np.inf
        cols = np.arange(batch.shape[0])
        scores[a, cols] = -np.inf
        scores[b, cols] = -np.inf
        scores[c, cols] = -np.inf
        predicted = scores.argmax(axis=0)
        correct += int((predicted == d).sum())
    return correct
