"""Greedy sub-word segmentation against a piece vocabulary."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class PieceVocabulary:
    """Maps pieces to embedding rows; row 0 is reserved for unknowns."""

    UNKNOWN_ROW = 0

    def __init__(self, pieces: Sequence[str]) -> None:
        if len(set(pieces)) != len(pieces):
            raise ValueError("duplicate pieces")
        if any(not p for p in pieces):
            raise ValueError("empty piece")
        self._rows: dict[str, int] = {p: i + 1 for i, p in enumerate(pieces)}
        self.pieces = tuple(pieces)
        self._max_len = max((len(p) for p in pieces), default=1)

    @property
    def table_rows(self) -> int:
        """Number of embedding rows, including the reserved unknown row."""
        return len(self.pieces) + 1

    @property
    def max_piece_length(self) -> int:
        return self._max_len

    def row(self, piece: str) -> int:
        return self._rows.get(piece, self.UNKNOWN_ROW)

    def __contains__(self, piece: str) -> bool:
        return piece in self._rows

    def __len__(self) -> int:
        return len(self.pieces)

    @classmethod
    def build_from_words(
        cls, words: Iterable[str], max_size: int = 1024, max_ngram: int = 4
    ) -> "PieceVocabulary":
        """Frequency-built vocabulary: single characters first, then n-grams.

        Deterministic for a given word iterable: candidates are ranked by
        descending count with lexicographic tie-break. ``max_size`` counts
        the reserved unknown row.
        """
        chars: Counter[str] = Counter()
        ngrams: Counter[str] = Counter()
        for w in words:
            chars.update(w)
            for n in range(2, max_ngram + 1):
                for i in range(len(w) - n + 1):
                    ngrams[w[i : i + n]] += 1
        budget = max_size - 1
        ranked_chars = sorted(chars, key=lambda c: (-chars[c], c))
        pieces = ranked_chars[:budget]
        budget -= len(pieces)
        if budget > 0:
            ranked = sorted(ngrams, key=lambda g: (-ngrams[g], g))
            pieces.extend(ranked[:budget])
        return cls(pieces)


@dataclass(frozen=True)
class SubPiece:
    text: str
    start: int
    end: int
    continuation: bool


@dataclass(frozen=True)
class SubTokenization:
    token: str
    pieces: tuple[SubPiece, ...]

    def __post_init__(self) -> None:
        if "".join(p.text for p in self.pieces) != self.token:
            raise ValueError("pieces do not concatenate to the token")

    def __len__(self) -> int:
        return len(self.pieces)


def subtokenize(
    token: str, vocabulary: PieceVocabulary | Mapping[str, int]
) -> SubTokenization:
    """Greedy longest-prefix segmentation.

    Characters not covered by any vocabulary piece become their own
    single-character pieces (resolved to the unknown row later), so the
    concatenation property holds for arbitrary input.
    """
    if not token:
        raise ValueError("cannot subtokenize an empty token")
    if isinstance(vocabulary, PieceVocabulary):
        contains = vocabulary.__contains__
        max_len = vocabulary.max_piece_length
    else:
        contains = vocabulary.__contains__
        max_len = max((len(p) for p in vocabulary), default=1)
    pieces: list[SubPiece] = []
    i, n = 0, len(token)
    while i < n:
        length = min(max_len, n - i)
        while length > 1 and not contains(token[i : i + length]):
            length -= 1
        piece = token[i : i + length]
        # a 1-char piece is used whether or not the vocabulary knows it
        pieces.append(SubPiece(piece, i, i + length, continuation=i > 0))
        i += length
    return SubTokenization(token, tuple(pieces))
