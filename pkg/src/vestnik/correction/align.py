"""Unit-cost character alignment between OCR output and gold text.

The alignment drives three consumers: training labels for the detector,
token-to-gold pairing for the metrics, and the padded interchange format.
The backtrace is deterministic: at equal cost it prefers match over
substitute over delete over insert.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EditOp:
    """One alignment step. Positions are None where not applicable."""

    kind: str  # match | substitute | delete | insert
    ocr_pos: int | None
    gold_pos: int | None


def align_chars(ocr: str, gold: str) -> list[EditOp]:
    """Minimum-cost edit script from ocr to gold, deterministic backtrace."""
    m, n = len(ocr), len(gold)
    # D[i][j] = distance between ocr[:i] and gold[:j]
    dist = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        dist[i][0] = i
    for j in range(1, n + 1):
        dist[0][j] = j
    for i in range(1, m + 1):
        row = dist[i]
        prev = dist[i - 1]
        oc = ocr[i - 1]
        for j in range(1, n + 1):
            sub = prev[j - 1] + (0 if oc == gold[j - 1] else 1)
            dele = prev[j] + 1
            ins = row[j - 1] + 1
            row[j] = min(sub, dele, ins)
    ops: list[EditOp] = []
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ocr[i - 1] == gold[j - 1] and dist[i][j] == dist[i - 1][j - 1]:
            ops.append(EditOp("match", i - 1, j - 1))
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and dist[i][j] == dist[i - 1][j - 1] + 1:
            ops.append(EditOp("substitute", i - 1, j - 1))
            i -= 1
            j -= 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            ops.append(EditOp("delete", i - 1, None))
            i -= 1
        else:
            ops.append(EditOp("insert", None, j - 1))
            j -= 1
    ops.reverse()
    return ops


def alignment_cost(ops: list[EditOp]) -> int:
    return sum(1 for op in ops if op.kind != "match")


@dataclass(frozen=True)
class CharAlignment:
    """Alignment plus the per-character annotations consumers need.

    ``error_positions`` holds OCR indices touched by a non-identity edit;
    insertions anchor to the following OCR character (or the last one at the
    end of the string). ``gold_ranges`` gives, per OCR index, the half-open
    gold span that character aligns to, or None if nothing maps there.
    """

    ops: tuple[EditOp, ...]
    error_positions: frozenset[int]
    gold_ranges: tuple[tuple[int, int] | None, ...]


def char_alignment(ocr: str, gold: str) -> CharAlignment:
    ops = align_chars(ocr, gold)
    errors: set[int] = set()
    ranges: list[list[int] | None] = [None] * len(ocr)

    def extend(idx: int, lo: int, hi: int) -> None:
        r = ranges[idx]
        if r is None:
            ranges[idx] = [lo, hi]
        else:
            r[0] = min(r[0], lo)
            r[1] = max(r[1], hi)

    cursor = 0  # OCR characters consumed so far
    for op in ops:
        if op.kind == "match":
            extend(op.ocr_pos, op.gold_pos, op.gold_pos + 1)
            cursor += 1
        elif op.kind == "substitute":
            errors.add(op.ocr_pos)
            extend(op.ocr_pos, op.gold_pos, op.gold_pos + 1)
            cursor += 1
        elif op.kind == "delete":
            errors.add(op.ocr_pos)
            # spurious OCR character: empty gold span at the current point
            gold_point = _gold_cursor(ranges, op.ocr_pos)
            extend(op.ocr_pos, gold_point, gold_point)
            cursor += 1
        else:  # insert: anchor to the next OCR character, or the last one
            if ocr:
                anchor = min(cursor, len(ocr) - 1)
                errors.add(anchor)
                extend(anchor, op.gold_pos, op.gold_pos + 1)
    return CharAlignment(
        tuple(ops),
        frozenset(errors),
        tuple(tuple(r) if r is not None else None for r in ranges),
    )


def _gold_cursor(ranges: list[list[int] | None], upto: int) -> int:
    """Gold offset reached just before OCR index ``upto``."""
    for idx in range(upto - 1, -1, -1):
        r = ranges[idx]
        if r is not None:
            return r[1]
    return 0
