"""Noisy-channel scoring: learned character edit costs plus word frequency.

The confusion model holds negative log probabilities for character edits,
estimated from aligned OCR/gold pairs with add-one smoothing over the
observed alphabet. Candidate ranking combines the channel cost (weighted
edit distance from the OCR token to a lexicon word) with a source cost (the
word's negative log relative frequency).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ..aligned import AlignedSample
from ..lexicon import Lexicon
from .align import align_chars
from .detector import EmptyCorpus

#: Key used for the empty side of insertions and deletions.
EPSILON = ""


class ConfusionModel:
    """Per-character edit costs; identity substitutions always cost 0."""

    def __init__(
        self,
        costs: dict[tuple[str, str], float],
        row_floor: dict[str, float],
        default_cost: float,
    ) -> None:
        for pair, cost in costs.items():
            if not math.isfinite(cost) or cost < 0:
                raise ValueError(f"bad cost for {pair}: {cost}")
        if default_cost < 0 or not math.isfinite(default_cost):
            raise ValueError(f"bad default cost {default_cost}")
        self._costs = dict(costs)
        self._row_floor = dict(row_floor)
        self.default_cost = default_cost

    @classmethod
    def uniform(cls, edit_cost: float = 1.0) -> "ConfusionModel":
        """Untrained channel: every non-identity edit costs the same."""
        return cls({}, {}, edit_cost)

    def _lookup(self, a: str, b: str) -> float:
        cost = self._costs.get((a, b))
        if cost is not None:
            return cost
        floor = self._row_floor.get(a)
        if floor is not None:
            return floor
        return self.default_cost

    def substitution_cost(self, a: str, b: str) -> float:
        if a == b:
            return 0.0
        return self._lookup(a, b)

    def insertion_cost(self, b: str) -> float:
        """Cost of the channel having swallowed gold character b."""
        return self._lookup(EPSILON, b)

    def deletion_cost(self, a: str) -> float:
        """Cost of the channel having fabricated OCR character a."""
        return self._lookup(a, EPSILON)

    def save(self, path: str | Path) -> None:
        payload = {
            "format_version": 1,
            "default_cost": self.default_cost,
            "row_floor": self._row_floor,
            "costs": [[a, b, c] for (a, b), c in sorted(self._costs.items())],
        }
        Path(path).write_text(
            json.dumps(payload, ensure_ascii=False, sort_keys=True), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "ConfusionModel":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("format_version") != 1:
            raise ValueError("unsupported confusion model version")
        costs = {(a, b): float(c) for a, b, c in payload["costs"]}
        return cls(costs, dict(payload["row_floor"]), float(payload["default_cost"]))


def learn_confusion(
    pairs: Sequence[AlignedSample] | Sequence[tuple[str, str]],
) -> ConfusionModel:
    """Estimate edit costs from aligned pairs.

    cost(a -> b) = -log((count(a -> b) + 1) / (count(a -> anything) + |alphabet|)),
    with the empty string standing in for the missing side of insertions and
    deletions. Unseen pairs in an observed row fall back to that row's
    smoothed floor; characters never observed at all get -log(1/|alphabet|).
    """
    if not pairs:
        raise EmptyCorpus("no aligned pairs to learn from")
    counts: dict[str, dict[str, int]] = {}
    alphabet: set[str] = set()

    def bump(a: str, b: str) -> None:
        counts.setdefault(a, {})
        counts[a][b] = counts[a].get(b, 0) + 1

    for item in pairs:
        if isinstance(item, AlignedSample):
            ocr, gold = item.ocr_input, item.gold_input
        else:
            ocr, gold = item
        alphabet.update(ocr)
        alphabet.update(gold)
        for op in align_chars(ocr, gold):
            if op.kind == "match" or op.kind == "substitute":
                bump(ocr[op.ocr_pos], gold[op.gold_pos])
            elif op.kind == "delete":
                bump(ocr[op.ocr_pos], EPSILON)
            else:
                bump(EPSILON, gold[op.gold_pos])

    sigma = max(1, len(alphabet))
    costs: dict[tuple[str, str], float] = {}
    row_floor: dict[str, float] = {}
    for a, row in counts.items():
        total = sum(row.values())
        row_floor[a] = -math.log(1.0 / (total + sigma))
        for b, c in row.items():
            if a == b:
                continue  # identity is forced to zero
            costs[(a, b)] = -math.log((c + 1.0) / (total + sigma))
    default_cost = -math.log(1.0 / sigma)
    return ConfusionModel(costs, row_floor, default_cost)


@dataclass(frozen=True)
class Candidate:
    """A lexicon word proposed as the intended form of an OCR token."""

    word: str
    channel_cost: float
    source_cost: float

    @property
    def total(self) -> float:
        return self.channel_cost + self.source_cost


def weighted_edit_distance(source: str, target: str, confusion: ConfusionModel) -> float:
    """Minimum-cost transformation of the OCR token into a lexicon word."""
    m, n = len(source), len(target)
    prev = [0.0] * (n + 1)
    for j in range(1, n + 1):
        prev[j] = prev[j - 1] + confusion.insertion_cost(target[j - 1])
    for i in range(1, m + 1):
        cur = [prev[0] + confusion.deletion_cost(source[i - 1])] + [0.0] * n
        sc = source[i - 1]
        for j in range(1, n + 1):
            tc = target[j - 1]
            cur[j] = min(
                prev[j - 1] + confusion.substitution_cost(sc, tc),
                prev[j] + confusion.deletion_cost(sc),
                cur[j - 1] + confusion.insertion_cost(tc),
            )
        prev = cur
    return prev[n]


def unit_distance_within(a: str, b: str, limit: int) -> int | None:
    """Levenshtein distance if it does not exceed limit, else None."""
    if abs(len(a) - len(b)) > limit:
        return None
    m, n = len(a), len(b)
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        ac = a[i - 1]
        best = cur[0]
        for j in range(1, n + 1):
            cur[j] = min(
                prev[j - 1] + (0 if ac == b[j - 1] else 1),
                prev[j] + 1,
                cur[j - 1] + 1,
            )
            if cur[j] < best:
                best = cur[j]
        if best > limit:
            return None
        prev = cur
    return prev[n] if prev[n] <= limit else None


def generate_candidates(
    token: str,
    lexicon: Lexicon,
    confusion: ConfusionModel,
    max_edit: int = 2,
    beam: int = 64,
) -> list[Candidate]:
    """Ranked correction candidates for one token.

    Every lexicon word within unit edit distance ``max_edit`` is scored by
    channel cost plus source cost and the cheapest ``beam`` are returned,
    ties broken lexicographically. Equivalent to a brute-force scan of the
    whole lexicon; the length bucketing only skips words that cannot pass
    the distance filter.
    """
    if not token:
        raise ValueError("cannot generate candidates for an empty token")
    lt = token.lower()
    total = lexicon.total_count
    found: list[Candidate] = []
    for length in range(max(1, len(lt) - max_edit), len(lt) + max_edit + 1):
        for word in lexicon.words_of_length(length):
            if unit_distance_within(lt, word, max_edit) is None:
                continue
            channel = weighted_edit_distance(lt, word, confusion)
            source = -math.log(lexicon.frequency.get(word, 1) / total)
            found.append(Candidate(word, channel, source))
    found.sort(key=lambda c: (c.total, c.word))
    return found[:beam]
