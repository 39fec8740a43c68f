"""Page-level correction: flag suspicious tokens, splice in top candidates."""

from __future__ import annotations

from dataclasses import dataclass

from ..analyzer import CleanPage, Token, TokenKind
from ..lexicon import Lexicon
from .channel import ConfusionModel, generate_candidates
from .detector import (
    DetectorModel,
    baseline_detect,
    detector_forward,
    token_is_erroneous,
)
from .subtokens import subtokenize


@dataclass(frozen=True)
class Correction:
    """One entry of the correction log."""

    offset: int
    original: str
    replacement: str | None
    total_cost: float | None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "offset": self.offset,
            "original": self.original,
            "replacement": self.replacement,
            "total_cost": self.total_cost,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Correction":
        return cls(
            offset=data["offset"],
            original=data["original"],
            replacement=data.get("replacement"),
            total_cost=data.get("total_cost"),
            note=data.get("note", ""),
        )


def _match_case(original: str, replacement: str) -> str:
    if original.isupper() and len(original) > 1:
        return replacement.upper()
    if original[:1].isupper():
        return replacement[:1].upper() + replacement[1:]
    return replacement


def flag_tokens(
    page: CleanPage,
    lexicon: Lexicon,
    detector: DetectorModel | None = None,
    threshold: float = 0.5,
) -> list[int]:
    """Indices of word tokens the detector considers erroneous.

    With no model this is the dictionary baseline. With a model, tokens are
    sub-tokenized, packed into chunks that respect the model's sequence
    limit without splitting a token, and classified per piece.
    """
    word_indices = [
        i for i, t in enumerate(page.tokens) if t.kind is TokenKind.WORD
    ]
    if detector is None:
        return [i for i in word_indices if baseline_detect(page.tokens[i], lexicon)]

    max_seq = detector.config.max_sequence
    flagged: list[int] = []
    chunk: list[tuple[int, int]] = []  # (token index, piece count)
    pieces: list[str] = []

    def run_chunk() -> None:
        if not pieces:
            return
        probs = detector_forward(detector, pieces)
        pos = 0
        for tok_idx, count in chunk:
            token_probs = probs[pos : pos + count]
            pos += count
            if token_is_erroneous(
                token_probs, detector.config.token_rule, threshold
            ):
                flagged.append(tok_idx)

    for i in word_indices:
        sub = subtokenize(page.tokens[i].surface, detector.vocabulary)
        token_pieces = [p.text for p in sub.pieces][:max_seq]
        if pieces and len(pieces) + len(token_pieces) > max_seq:
            run_chunk()
            chunk, pieces = [], []
        chunk.append((i, len(token_pieces)))
        pieces.extend(token_pieces)
    run_chunk()
    return flagged


def correct_page(
    page: CleanPage,
    detector: DetectorModel | None,
    lexicon: Lexicon,
    confusion: ConfusionModel,
    max_edit: int = 2,
    beam: int = 64,
    threshold: float = 0.5,
) -> tuple[str, list[Correction]]:
    """Replace flagged tokens by their top candidates.

    Unflagged text is preserved byte-exactly. Flagged tokens without any
    candidate stay unchanged but are logged with a ``no-candidate`` note.
    """
    flagged = flag_tokens(page, lexicon, detector, threshold)
    log: list[Correction] = []
    replacements: list[tuple[Token, str]] = []
    for idx in flagged:
        token = page.tokens[idx]
        candidates = generate_candidates(
            token.surface, lexicon, confusion, max_edit=max_edit, beam=beam
        )
        if not candidates:
            log.append(
                Correction(token.start, token.surface, None, None, "no-candidate")
            )
            continue
        best = candidates[0]
        replacement = _match_case(token.surface, best.word)
        log.append(
            Correction(token.start, token.surface, replacement, best.total)
        )
        replacements.append((token, replacement))

    text = page.text
    for token, replacement in sorted(replacements, key=lambda r: -r[0].start):
        text = text[: token.start] + replacement + text[token.end :]
    return text, log
