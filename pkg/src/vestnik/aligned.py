"""Three-line aligned corpus format: OCR text, aligned OCR, aligned gold.

Each sample is stored as

    OCR:<raw ocr text>
    ALN:<ocr text with @ padding>
    GLD:<gold text with @ padding>

where the two padded lines have equal length and removing the '@' padding
from the ALN line recovers the OCR line. '@' is reserved as the padding
character and must not occur in the texts themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

PAD = "@"

_PREFIX_OCR = "OCR:"
_PREFIX_ALN = "ALN:"
_PREFIX_GLD = "GLD:"


class FormatError(ValueError):
    """An aligned corpus file violated the three-line format."""

    def __init__(self, line_number: int, message: str) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class AlignedSample:
    ocr_input: str
    ocr_aligned: str
    gold_aligned: str

    def __post_init__(self) -> None:
        if len(self.ocr_aligned) != len(self.gold_aligned):
            raise ValueError("aligned lines differ in length")
        if self.ocr_aligned.replace(PAD, "") != self.ocr_input:
            raise ValueError("aligned OCR does not reduce to the input")

    @property
    def gold_input(self) -> str:
        return self.gold_aligned.replace(PAD, "")


def make_sample(ocr: str, gold: str) -> AlignedSample:
    """Build a sample from a raw pair, computing the padded alignment."""
    from .correction.align import align_chars

    ocr_out: list[str] = []
    gold_out: list[str] = []
    for op in align_chars(ocr, gold):
        if op.kind in ("match", "substitute"):
            ocr_out.append(ocr[op.ocr_pos])
            gold_out.append(gold[op.gold_pos])
        elif op.kind == "delete":
            ocr_out.append(ocr[op.ocr_pos])
            gold_out.append(PAD)
        else:  # insert
            ocr_out.append(PAD)
            gold_out.append(gold[op.gold_pos])
    return AlignedSample(ocr, "".join(ocr_out), "".join(gold_out))


def load_aligned_file(path: str | Path) -> list[AlignedSample]:
    """Parse an aligned corpus file into samples.

    Blank lines between samples are allowed. Any structural violation raises
    :class:`FormatError` carrying the offending line number.
    """
    samples: list[AlignedSample] = []
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    i = 0
    n = len(lines)
    while i < n:
        if not lines[i].strip():
            i += 1
            continue
        if not lines[i].startswith(_PREFIX_OCR):
            raise FormatError(i + 1, f"expected {_PREFIX_OCR!r} line")
        if i + 2 >= n:
            raise FormatError(i + 1, "truncated sample")
        if not lines[i + 1].startswith(_PREFIX_ALN):
            raise FormatError(i + 2, f"expected {_PREFIX_ALN!r} line")
        if not lines[i + 2].startswith(_PREFIX_GLD):
            raise FormatError(i + 3, f"expected {_PREFIX_GLD!r} line")
        ocr = lines[i][len(_PREFIX_OCR):]
        aln = lines[i + 1][len(_PREFIX_ALN):]
        gld = lines[i + 2][len(_PREFIX_GLD):]
        try:
            samples.append(AlignedSample(ocr, aln, gld))
        except ValueError as exc:
            raise FormatError(i + 1, str(exc)) from exc
        i += 3
    return samples


def dump_aligned_file(samples: Iterable[AlignedSample], path: str | Path) -> None:
    out: list[str] = []
    for s in samples:
        out.append(_PREFIX_OCR + s.ocr_input)
        out.append(_PREFIX_ALN + s.ocr_aligned)
        out.append(_PREFIX_GLD + s.gold_aligned)
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def pairs_from_samples(
    samples: Sequence[AlignedSample],
) -> list[tuple[str, str]]:
    """(ocr, gold) string pairs, convenient for confusion training."""
    return [(s.ocr_input, s.gold_input) for s in samples]
