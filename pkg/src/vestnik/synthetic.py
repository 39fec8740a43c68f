"""Seeded synthetic corpora for experiments and the acceptance checks.

Everything here is deterministic for a given seed: word shapes, sentence
composition and the OCR-style corruption applied on top.
"""

from __future__ import annotations

import random
from typing import Mapping, Sequence

from .aligned import AlignedSample, make_sample
from .lexicon import Lexicon
from .orthography import OrthographyVersion

ALPHABET = "абвгдежзиклмнопрстух"

#: Classic shape-confusion pairs seen in Cyrillic OCR output.
DEFAULT_CONFUSIONS: Mapping[str, str] = {
    "и": "н",
    "н": "и",
    "о": "с",
    "с": "о",
    "п": "л",
    "л": "п",
    "г": "т",
    "е": "в",
}


def make_words(
    count: int, seed: int = 0, min_len: int = 4, max_len: int = 8
) -> list[str]:
    """Distinct pronounceable-ish lowercase words."""
    rng = random.Random(seed)
    words: set[str] = set()
    while len(words) < count:
        n = rng.randint(min_len, max_len)
        words.add("".join(rng.choice(ALPHABET) for _ in range(n)))
    return sorted(words)


def make_lexicon(count: int = 200, seed: int = 0) -> Lexicon:
    return Lexicon(OrthographyVersion.MODERN, make_words(count, seed))


def make_sentences(
    words: Sequence[str],
    count: int = 500,
    words_per_sentence: int = 8,
    seed: int = 1,
) -> list[str]:
    rng = random.Random(seed)
    return [
        " ".join(rng.choice(words) for _ in range(words_per_sentence))
        for _ in range(count)
    ]


def corrupt_word(
    word: str, rng: random.Random, confusions: Mapping[str, str] = DEFAULT_CONFUSIONS
) -> str:
    """Apply one character substitution, preferring a confusion-table hit."""
    confusable = [i for i, c in enumerate(word) if c in confusions]
    if confusable:
        i = rng.choice(confusable)
        return word[:i] + confusions[word[i]] + word[i + 1 :]
    i = rng.randrange(len(word))
    replacement = rng.choice([c for c in ALPHABET if c != word[i]])
    return word[:i] + replacement + word[i + 1 :]


def corrupt_sentences(
    sentences: Sequence[str],
    rate: float = 0.15,
    seed: int = 2,
    confusions: Mapping[str, str] = DEFAULT_CONFUSIONS,
) -> list[AlignedSample]:
    """Corrupt a fraction of tokens per sentence, yielding aligned samples."""
    rng = random.Random(seed)
    samples: list[AlignedSample] = []
    for sentence in sentences:
        out_tokens = []
        for token in sentence.split(" "):
            if token and rng.random() < rate:
                out_tokens.append(corrupt_word(token, rng, confusions))
            else:
                out_tokens.append(token)
        samples.append(make_sample(" ".join(out_tokens), sentence))
    return samples
