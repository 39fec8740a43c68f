"""Cleaning and tokenization of raw OCR page text.

Pages arrive as UTF-8 dumps from the scanning pipeline, optionally carrying
a metadata block between ``===META`` and ``===END`` lines. Cleaning strips
those blocks, rejoins words hyphenated across line breaks, and tokenizes
with character offsets that stay valid for later highlighting.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

META_OPEN = "===META"
META_CLOSE = "===END"

# Cyrillic codepoint ranges. The base block already contains the pre-reform
# letters (yat, the yuses, decimal i); the extra blocks cover rarer archaic
# codepoints found in older scans.
_CYRILLIC_RANGES = (
    (0x0400, 0x04FF),
    (0x0500, 0x052F),
    (0x1C80, 0x1C8F),
    (0x2DE0, 0x2DFF),
    (0xA640, 0xA69F),
)


class UnterminatedMetadataBlock(ValueError):
    """A ``===META`` line appeared without a matching ``===END``."""


class TokenKind(str, Enum):
    WORD = "word"
    NUMBER = "number"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    kind: TokenKind

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError(f"empty token span [{self.start}, {self.end})")
        if len(self.surface) != self.end - self.start:
            raise ValueError("surface length does not match span")


@dataclass(frozen=True)
class RawPage:
    """One scanned newspaper page as delivered by the OCR pipeline."""

    newspaper_id: str
    issue_date: datetime.date
    page_number: int
    body: str
    source_path: str = ""

    def __post_init__(self) -> None:
        if self.page_number < 1:
            raise ValueError(f"page_number must be >= 1, got {self.page_number}")
        if not 1800 <= self.issue_date.year <= 2000:
            raise ValueError(f"issue_date {self.issue_date} outside 1800-2000")


@dataclass(frozen=True)
class CleanPage:
    """A page after metadata stripping and de-hyphenation."""

    origin: RawPage
    text: str
    tokens: tuple[Token, ...]

    @classmethod
    def from_raw(cls, raw: RawPage) -> "CleanPage":
        text = dehyphenate(strip_metadata(raw.body).split("\n"))
        return cls(origin=raw, text=text, tokens=tuple(tokenize(text)))


def is_letter(c: str) -> bool:
    """True for Latin and Cyrillic letters, including archaic Cyrillic."""
    if ("a" <= c <= "z") or ("A" <= c <= "Z"):
        return True
    if not c.isalpha():
        return False
    cp = ord(c)
    return any(lo <= cp <= hi for lo, hi in _CYRILLIC_RANGES)


def _is_digit(c: str) -> bool:
    return "0" <= c <= "9"


def tokenize(text: str) -> list[Token]:
    """Split text into word, number and punctuation tokens with offsets.

    Maximal runs of Cyrillic or Latin letters become one word token, maximal
    ASCII digit runs one number token, and every other non-whitespace
    character a single punctuation token. Whitespace separates tokens and is
    never emitted.
    """
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if is_letter(c):
            j = i + 1
            while j < n and is_letter(text[j]):
                j += 1
            tokens.append(Token(text[i:j], i, j, TokenKind.WORD))
        elif _is_digit(c):
            j = i + 1
            while j < n and _is_digit(text[j]):
                j += 1
            tokens.append(Token(text[i:j], i, j, TokenKind.NUMBER))
        else:
            j = i + 1
            tokens.append(Token(c, i, j, TokenKind.PUNCTUATION))
        i = j
    return tokens


def dehyphenate(lines: Sequence[str]) -> str:
    """Rejoin words broken across line ends, fold other breaks to spaces.

    A line ending in letter+"-" whose successor starts with a lowercase
    letter is glued to it with the hyphen removed. Every other line break
    becomes a single space.
    """
    parts: list[str] = []
    for line in lines:
        if (
            parts
            and parts[-1].endswith("-")
            and len(parts[-1]) >= 2
            and is_letter(parts[-1][-2])
            and line
            and is_letter(line[0])
            and line[0].islower()
        ):
            parts[-1] = parts[-1][:-1] + line
        else:
            parts.append(line)
    return " ".join(parts)


def strip_metadata(body: str) -> str:
    """Drop scanner metadata blocks delimited by ===META / ===END lines.

    Lines outside the markers are preserved byte-exactly. An opening marker
    without a closing one raises :class:`UnterminatedMetadataBlock`.
    """
    kept: list[str] = []
    inside = False
    for line in body.split("\n"):
        if inside:
            if line == META_CLOSE:
                inside = False
        elif line == META_OPEN:
            inside = True
        else:
            kept.append(line)
    if inside:
        raise UnterminatedMetadataBlock("===META without closing ===END")
    return "\n".join(kept)
