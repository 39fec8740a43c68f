"""Word-form lexicon with optional occurrence counts.

The production dictionary is a plain word list (one form per line, optional
tab-separated count). Entries are lowercase single words; frequencies feed
the source model of the noisy-channel corrector.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping

from .analyzer import is_letter
from .orthography import OrthographyVersion


class Lexicon:
    """Immutable set of word forms for one orthography version."""

    def __init__(
        self,
        version: OrthographyVersion,
        words: Mapping[str, int] | Iterable[str],
    ) -> None:
        if isinstance(words, Mapping):
            frequency = {w: int(c) for w, c in words.items()}
        else:
            frequency = {w: 1 for w in words}
        if not frequency:
            raise ValueError("lexicon must not be empty")
        for word, count in frequency.items():
            if not word or word != word.lower() or not all(is_letter(c) for c in word):
                raise ValueError(f"lexicon entry is not a lowercase word: {word!r}")
            if count < 1:
                raise ValueError(f"bad count {count} for {word!r}")
        self.version = version
        self.frequency = frequency
        self.entries = frozenset(frequency)
        self.total_count = sum(frequency.values())
        self._by_length: dict[int, tuple[str, ...]] | None = None

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def words_of_length(self, n: int) -> tuple[str, ...]:
        """Entries of exactly n characters, sorted (built lazily once)."""
        if self._by_length is None:
            buckets: dict[int, list[str]] = {}
            for w in sorted(self.entries):
                buckets.setdefault(len(w), []).append(w)
            self._by_length = {k: tuple(v) for k, v in buckets.items()}
        return self._by_length.get(n, ())

    @classmethod
    def load(
        cls, path: str | Path, version: OrthographyVersion = OrthographyVersion.MODERN
    ) -> "Lexicon":
        """Read a word list: one ``word`` or ``word<TAB>count`` per line.

        Blank lines and '#' comments are skipped; words are lowercased and
        duplicate lines sum their counts.
        """
        frequency: dict[str, int] = {}
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            word = parts[0].lower()
            count = 1
            if len(parts) > 1:
                try:
                    count = int(parts[1])
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad count {parts[1]!r}") from exc
            frequency[word] = frequency.get(word, 0) + count
        return cls(version, frequency)

    def save(self, path: str | Path) -> None:
        lines = [f"{w}\t{self.frequency[w]}" for w in sorted(self.entries)]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
