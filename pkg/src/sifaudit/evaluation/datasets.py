"""Benchmark dataset containers and file parsers.

Tokens are lowercased on load to match lowercase training corpora; gold
scores are validated against each dataset's declared range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DataFormatError

STS_SCORE_RANGE = (0.0, 5.0)


@dataclass(frozen=True)
class WordSimDataset:
    """Pairs (word1, word2, human similarity score)."""

    pairs: list
    name: str = "wordsim"

    def __post_init__(self):
        if not self.pairs:
            raise DataFormatError(f"{self.name}: no pairs")
        for w1, w2, score in self.pairs:
            if not math.isfinite(score):
                raise DataFormatError(f"{self.name}: non-finite score for ({w1}, {w2})")


@dataclass(frozen=True)
class AnalogyDataset:
    """Questions (a, b, c, expected_d); every question has four distinct words."""

    questions: list
    source: str  # 'google' | 'msr' | custom tag
    n_filtered: int = 0  # lines dropped for repeated words within a question


@dataclass(frozen=True)
class StsDataset:
    """Sentence pairs with gold similarity in [0, 5]."""

    pairs: list  # (sentence1, sentence2, gold)
    name: str

    def __post_init__(self):
        if not self.pairs:
            raise DataFormatError(f"{self.name}: no sentence pairs")
        lo, hi = STS_SCORE_RANGE
        for _, _, gold in self.pairs:
            if not (lo <= gold <= hi):
                raise DataFormatError(
                    f"{self.name}: gold score {gold} outside [{lo}, {hi}]"
                )


def load_wordsim(path, name: str = "wordsim") -> WordSimDataset:
    """'word1 word2 score' per line, tab- or whitespace-separated.

    A non-numeric first line is treated as a header and skipped.
    """
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            fields = line.split("\t") if "\t" in line else line.split()
            if len(fields) < 3:
                raise DataFormatError(f"{path}:{lineno}: expected 'word word score'")
            try:
                score = float(fields[2])
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise DataFormatError(f"{path}:{lineno}: bad score {fields[2]!r}")
            pairs.append((fields[0].lower(), fields[1].lower(), score))
    return WordSimDataset(pairs=pairs, name=name)


def load_analogy(path, source: str) -> AnalogyDataset:
    """'a b c d' per line; ': section' header lines are skipped.

    Covers both the sectioned (Google) and plain (MSR) layouts. Lines whose
    four words are not distinct are dropped and counted.
    """
    questions = []
    filtered = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith(":"):
                continue
            fields = line.lower().split()
            if len(fields) != 4:
                raise DataFormatError(f"{path}:{lineno}: expected four words")
            if len(set(fields)) != 4:
                filtered += 1
                continue
            questions.append(tuple(fields))
    if not questions:
        raise DataFormatError(f"{path}: no analogy questions")
    return AnalogyDataset(questions=questions, source=source, n_filtered=filtered)


def load_sts_tsv(path, name: str) -> StsDataset:
    """Tab-separated 'sentence1<TAB>sentence2<TAB>gold' (one pair per line)."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise DataFormatError(
                    f"{path}:{lineno}: expected sentence<TAB>sentence<TAB>score"
                )
            try:
                gold = float(fields[2])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad gold score {fields[2]!r}") from exc
            pairs.append((fields[0], fields[1], gold))
    return StsDataset(pairs=pairs, name=name)


def load_sts_pair_files(input_path, gold_path, name: str) -> StsDataset:
    """SemEval layout: input file 'sentence1<TAB>sentence2' plus a parallel
    gold-score file (one float per line; blank gold lines drop the pair)."""
    with open(input_path, encoding="utf-8") as fh:
        input_lines = fh.read().split("\n")
    if input_lines and input_lines[-1] == "":
        input_lines.pop()
    with open(gold_path, encoding="utf-8") as fh:
        gold_lines = fh.read().split("\n")
    if gold_lines and gold_lines[-1] == "":
        gold_lines.pop()
    if len(input_lines) != len(gold_lines):
        raise DataFormatError(
            f"{name}: {input_path} has {len(input_lines)} pairs but "
            f"{gold_path} has {len(gold_lines)} scores"
        )
    pairs = []
    for lineno, (pair_line, gold_line) in enumerate(zip(input_lines, gold_lines), 1):
        gold_line = gold_line.strip()
        if not gold_line:
            continue  # unannotated pair
        fields = pair_line.split("\t")
        if len(fields) < 2:
            raise DataFormatError(f"{input_path}:{lineno}: expected two tab-separated sentences")
        try:
            gold = float(gold_line)
        except ValueError as exc:
            raise DataFormatError(f"{gold_path}:{lineno}: bad gold score {gold_line!r}") from exc
        pairs.append((fields[0], fields[1], gold))
    return StsDataset(pairs=pairs, name=name)
