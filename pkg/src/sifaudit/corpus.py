"""Corpus ingestion: tokenization, frequency-capped vocabulary, unigram probabilities.

Handles text8-style input (one huge line of lowercase space-separated words)
as well as ordinary plain text, streaming in bounded memory.
"""
from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator

import numpy as np

from .errors import DataFormatError, EmptyCorpusError, ParameterError

_CHUNK_SIZE = 1 << 20


@dataclass(frozen=True)
class Vocabulary:
    """Frequency-ranked token <-> id map.

    Ids are contiguous 0..n-1, ordered by descending raw count with ties
    broken lexicographically. ``total_tokens`` counts only in-vocabulary
    occurrences so that unigram probabilities sum to one.
    """

    tokens: tuple[str, ...]
    id_of: dict[str, int]
    counts: np.ndarray  # int64, aligned with tokens
    total_tokens: int

    def __post_init__(self):
        n = len(self.tokens)
        if len(self.id_of) != n or self.counts.shape != (n,):
            raise ParameterError("vocabulary fields disagree on size")
        if n and np.any(np.diff(self.counts) > 0):
            raise ParameterError("vocabulary counts must be non-increasing in id order")
        if int(self.counts.sum()) != self.total_tokens:
            raise ParameterError("total_tokens must equal the sum of counts")

    @property
    def n(self) -> int:
        return len(self.tokens)

    def count_of(self, token: str) -> int:
        return int(self.counts[self.id_of[token]])

    def encode(self, tokens: Iterable[str]) -> np.ndarray:
        """Map tokens to ids, -1 for out-of-vocabulary tokens."""
        get = self.id_of.get
        return np.fromiter((get(t, -1) for t in tokens), dtype=np.int32)


@dataclass(frozen=True)
class UnigramDistribution:
    """Empirical word probabilities p[i] = count_i / total, aligned to a Vocabulary."""

    p: np.ndarray  # float64

    def __post_init__(self):
        if self.p.size == 0:
            raise ParameterError("empty distribution")
        if np.any(self.p <= 0) or np.any(self.p > 1):
            raise ParameterError("probabilities must lie in (0, 1]")
        if abs(float(self.p.sum()) - 1.0) > 1e-9:
            raise ParameterError("probabilities must sum to 1 within 1e-9")

    @property
    def n(self) -> int:
        return self.p.size


def tokenize(stream: BinaryIO) -> Iterator[str]:
    """Yield lowercased whitespace-delimited tokens from a byte stream.

    Decodes UTF-8 incrementally; a hard decode failure reports the absolute
    byte offset of the offending byte. Tokens never contain whitespace and
    are never empty.
    """
    carry_bytes = b""
    carry_text = ""
    base = 0  # file offset of carry_bytes[0]
    while True:
        chunk = stream.read(_CHUNK_SIZE)
        if not chunk:
            break
        data = carry_bytes + chunk
        try:
            text = data.decode("utf-8")
            carry_bytes = b""
        except UnicodeDecodeError as exc:
            if exc.reason == "unexpected end of data" and exc.end == len(data):
                text = data[: exc.start].decode("utf-8")
                carry_bytes = data[exc.start :]
                base += exc.start
            else:
                raise DataFormatError(
                    f"invalid UTF-8 at byte offset {base + exc.start}: {exc.reason}"
                ) from exc
        else:
            base += len(data)
        text = carry_text + text
        parts = text.split()
        if text and not text[-1].isspace():
            carry_text = parts.pop() if parts else ""
        else:
            carry_text = ""
        for tok in parts:
            yield tok.lower()
    if carry_bytes:
        raise DataFormatError(
            f"invalid UTF-8 at byte offset {base}: truncated multi-byte sequence"
        )
    if carry_text:
        yield carry_text.lower()


def tokenize_file(path) -> Iterator[str]:
    with open(path, "rb") as fh:
        yield from tokenize(fh)


def tokenize_string(text: str) -> list[str]:
    """Whitespace-split and lowercase an in-memory sentence."""
    return text.lower().split()


def build_vocabulary(tokens: Iterable[str], max_size: int) -> Vocabulary:
    """Build a Vocabulary of the ``max_size`` most frequent tokens.

    Ties in frequency are broken lexicographically ascending so rebuilt
    vocabularies are deterministic. Raises EmptyCorpusError on an empty
    stream.
    """
    if max_size < 1:
        raise ParameterError(f"max_size must be >= 1, got {max_size}")
    counter = Counter(tokens)
    if not counter:
        raise EmptyCorpusError("token stream is empty")
    # heapq.nsmallest on (-count, token) = top counts, lexicographic ties
    ranked = heapq.nsmallest(max_size, counter.items(), key=lambda kv: (-kv[1], kv[0]))
    toks = tuple(t for t, _ in ranked)
    counts = np.array([c for _, c in ranked], dtype=np.int64)
    return Vocabulary(
        tokens=toks,
        id_of={t: i for i, t in enumerate(toks)},
        counts=counts,
        total_tokens=int(counts.sum()),
    )


def unigram_probabilities(vocab: Vocabulary) -> UnigramDistribution:
    """Empirical unigram distribution over the vocabulary."""
    if vocab.n == 0:
        raise ParameterError("vocabulary is empty")
    return UnigramDistribution(p=vocab.counts / float(vocab.total_tokens))


def dump_vocabulary_tsv(vocab: Vocabulary, path) -> None:
    """Write ``token<TAB>count`` lines in id order."""
    with open(path, "w", encoding="utf-8") as fh:
        for tok, cnt in zip(vocab.tokens, vocab.counts):
            fh.write(f"{tok}\t{int(cnt)}\n")


def load_vocabulary_tsv(path) -> Vocabulary:
    """Read a vocabulary dump written by :func:`dump_vocabulary_tsv`."""
    toks: list[str] = []
    counts: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise DataFormatError(f"{path}:{lineno}: expected token<TAB>count")
            try:
                counts.append(int(fields[1]))
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad count {fields[1]!r}") from exc
            toks.append(fields[0])
    if not toks:
        raise EmptyCorpusError(f"{path}: empty vocabulary file")
    arr = np.array(counts, dtype=np.int64)
    return Vocabulary(
        tokens=tuple(toks),
        id_of={t: i for i, t in enumerate(toks)},
        counts=arr,
        total_tokens=int(arr.sum()),
    )
