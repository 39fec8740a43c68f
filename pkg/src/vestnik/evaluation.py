"""Detection and correction quality metrics over aligned corpora.

Detection quality is token-level precision/recall/F-measure against labels
derived from the character alignment. Correction quality is the percentage
of improvement: how much of the summed Levenshtein distance to the gold
standard the corrector removed. Each distinct token is weighted by its
occurrence count, which the per-occurrence sum below realizes directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .aligned import AlignedSample, load_aligned_file  # noqa: F401  (re-export)
from .analyzer import Token, TokenKind, tokenize
from .correction.align import char_alignment
from .correction.channel import ConfusionModel, generate_candidates
from .correction.corrector import _match_case
from .correction.detector import (
    DetectorModel,
    baseline_detect,
    detector_forward,
    token_is_erroneous,
)
from .correction.subtokens import subtokenize
from .lexicon import Lexicon


class ZeroDistance(ValueError):
    """The raw OCR already matches the gold standard everywhere."""


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between two strings."""
    if a == b:
        return 0
    m, n = len(a), len(b)
    if m == 0:
        return n
    if n == 0:
        return m
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        ca = a[i - 1]
        for j in range(1, n + 1):
            cur[j] = min(
                prev[j - 1] + (0 if ca == b[j - 1] else 1),
                prev[j] + 1,
                cur[j - 1] + 1,
            )
        prev = cur
    return prev[n]


def eval_detection(
    predicted: Iterable, gold: Iterable, all_tokens: Iterable | None = None
) -> tuple[float, float, float]:
    """Token-level precision, recall and F-measure.

    ``predicted`` and ``gold`` are sets of token identities (any hashable).
    Empty denominators follow the zero convention.
    """
    predicted = set(predicted)
    gold = set(gold)
    if all_tokens is not None:
        universe = set(all_tokens)
        if not predicted <= universe or not gold <= universe:
            raise ValueError("labels reference tokens outside the universe")
    tp = len(predicted & gold)
    fp = len(predicted - gold)
    fn = len(gold - predicted)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f_score = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f_score


def correction_distances(
    triples: Iterable[tuple[str, str, str]]
) -> tuple[int, int]:
    """Summed distances (raw vs gold, corrected vs gold) over token triples."""
    distance_raw = 0
    distance_corrected = 0
    for raw, corrected, gold in triples:
        distance_raw += levenshtein(raw, gold)
        distance_corrected += levenshtein(corrected, gold)
    return distance_raw, distance_corrected


def eval_correction(triples: Iterable[tuple[str, str, str]]) -> float:
    """Percentage of improvement over (raw, corrected, gold) token triples."""
    distance_raw, distance_corrected = correction_distances(triples)
    if distance_raw == 0:
        raise ZeroDistance("raw text already matches the gold standard")
    return 100.0 * (distance_raw - distance_corrected) / distance_raw


def token_gold_pairs(sample: AlignedSample) -> list[tuple[Token, str]]:
    """Word tokens of the OCR text paired with their aligned gold slices."""
    alignment = char_alignment(sample.ocr_input, sample.gold_input)
    gold = sample.gold_input
    pairs: list[tuple[Token, str]] = []
    for token in tokenize(sample.ocr_input):
        if token.kind is not TokenKind.WORD:
            continue
        lo, hi = None, None
        for pos in range(token.start, token.end):
            r = alignment.gold_ranges[pos]
            if r is None:
                continue
            lo = r[0] if lo is None else min(lo, r[0])
            hi = r[1] if hi is None else max(hi, r[1])
        pairs.append((token, gold[lo:hi] if lo is not None else ""))
    return pairs


@dataclass(frozen=True)
class EvaluationReport:
    precision: float
    recall: float
    f_score: float
    improvement_pct: float
    token_count: int
    distance_raw: int
    distance_corrected: int

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f_score": self.f_score,
            "improvement_pct": self.improvement_pct,
            "token_count": self.token_count,
            "distance_raw": self.distance_raw,
            "distance_corrected": self.distance_corrected,
        }


def evaluate_run(
    samples: Sequence[AlignedSample],
    lexicon: Lexicon,
    confusion: ConfusionModel | None = None,
    detector: DetectorModel | None = None,
    threshold: float = 0.5,
    max_edit: int = 2,
    beam: int = 64,
) -> EvaluationReport:
    """Run detection plus correction over samples and score both.

    ``detector=None`` uses the dictionary baseline. ``confusion=None`` uses
    uniform edit costs.
    """
    confusion = confusion or ConfusionModel.uniform()
    predicted: set[tuple[int, int]] = set()
    gold_set: set[tuple[int, int]] = set()
    universe: set[tuple[int, int]] = set()
    triples: list[tuple[str, str, str]] = []
    for s_idx, sample in enumerate(samples):
        for t_idx, (token, gold_slice) in enumerate(token_gold_pairs(sample)):
            key = (s_idx, t_idx)
            universe.add(key)
            if token.surface != gold_slice:
                gold_set.add(key)
            if detector is None:
                is_bad = baseline_detect(token, lexicon)
            else:
                sub = subtokenize(token.surface, detector.vocabulary)
                pieces = [p.text for p in sub.pieces][: detector.config.max_sequence]
                probs = detector_forward(detector, pieces)
                is_bad = token_is_erroneous(
                    probs, detector.config.token_rule, threshold
                )
            corrected = token.surface
            if is_bad:
                predicted.add(key)
                candidates = generate_candidates(
                    token.surface, lexicon, confusion, max_edit=max_edit, beam=beam
                )
                if candidates:
                    corrected = _match_case(token.surface, candidates[0].word)
            triples.append((token.surface, corrected, gold_slice))
    precision, recall, f_score = eval_detection(predicted, gold_set, universe)
    distance_raw, distance_corrected = correction_distances(triples)
    if distance_raw == 0:
        raise ZeroDistance("raw text already matches the gold standard")
    improvement = 100.0 * (distance_raw - distance_corrected) / distance_raw
    return EvaluationReport(
        precision=precision,
        recall=recall,
        f_score=f_score,
        improvement_pct=improvement,
        token_count=len(universe),
        distance_raw=distance_raw,
        distance_corrected=distance_corrected,
    )
