"""Conversion between modern and pre-1945 Bulgarian spellings.

The 1945 reform dropped the word-final er (ъ/ь after a consonant), replaced
yat (ѣ) with е or я depending on the word, big yus (ѫ) with ъ, iotated yus
(ѭ) with ю and decimal i (і) with и. Toward modern spelling the mapping is
deterministic up to the yat exceptions, which an exception lexicon resolves.
The reverse direction is ambiguous, so it yields a capped variant set whose
first element is the deterministic preferred form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .analyzer import TokenKind, is_letter, tokenize


class OrthographyVersion(Enum):
    MODERN = "modern"
    HISTORICAL = "historical"


class EmptyText(ValueError):
    """Version detection got whitespace-only input."""


class VariantOverflow(ValueError):
    """Variant generation could not produce even one variant."""


class InvalidLexicon(ValueError):
    """A lexicon violated its contract (for instance, it was empty)."""


#: Letters counted as vowels when checking "after a consonant". The archaic
#: vowels are included so historical words are judged by their own alphabet.
VOWELS = frozenset("аеиоуъьюяѣіѫѭѥ")

#: Letters whose mere presence marks a word as pre-reform.
ARCHAIC_LETTERS = frozenset("ѣѫѭіѥ")

#: Word-final letters dropped by the reform when they follow a consonant.
FINAL_ER = frozenset("ъь")

DEFAULT_DETECTION_THRESHOLD = 0.02
DEFAULT_MAX_VARIANTS = 16


def _is_consonant(c: str) -> bool:
    return is_letter(c) and c.lower() not in VOWELS


@dataclass(frozen=True)
class ConversionRule:
    """One reform delta, as stored in an overridable rules file.

    ``historical_form`` and ``modern_form`` are single characters; an empty
    ``modern_form`` means the historical character was dropped entirely.
    ``position`` is one of ``any``, ``final``, ``non_final``. ``direction``
    ``to_modern`` restricts the rule to normalization; ``both`` also makes it
    generate historical variants.
    """

    rule_id: str
    historical_form: str
    modern_form: str
    position: str = "any"
    direction: str = "both"

    def __post_init__(self) -> None:
        if self.historical_form == self.modern_form:
            raise ValueError(f"rule {self.rule_id}: forms must differ")
        if self.position not in ("any", "final", "non_final"):
            raise ValueError(f"rule {self.rule_id}: bad position {self.position}")
        if self.direction not in ("to_modern", "both"):
            raise ValueError(f"rule {self.rule_id}: bad direction {self.direction}")


@dataclass(frozen=True)
class _SiteOption:
    char: str
    non_final_only: bool = False


class OrthographyRules:
    """Compiled rule table used by both conversion directions."""

    def __init__(
        self,
        to_modern_map: Mapping[str, tuple[str, bool]],
        final_drop: Iterable[str],
        append_char: str,
        sites: Mapping[str, Sequence[_SiteOption]],
        rules: Sequence[ConversionRule] = (),
    ) -> None:
        # hist char -> (modern char, non_final_only)
        self.to_modern_map = dict(to_modern_map)
        self.final_drop = frozenset(final_drop)
        self.append_char = append_char
        self.sites = {k: tuple(v) for k, v in sites.items()}
        self.rules = tuple(rules)

    _DEFAULT: "OrthographyRules | None" = None

    @classmethod
    def default(cls) -> "OrthographyRules":
        """The built-in reform table.

        Final er ъ/ь is dropped toward modern and ъ restored toward
        historical. Ambiguous sites expand as е -> {ѣ, е}, я -> {ѣ, я} and
        non-final ъ -> {ъ, ѫ}, first option preferred.
        """
        if cls._DEFAULT is None:
            cls._DEFAULT = cls(
                to_modern_map={
                    "ѣ": ("е", False),
                    "ѫ": ("ъ", True),
                    "ѭ": ("ю", False),
                    "і": ("и", False),
                },
                final_drop="ъь",
                append_char="ъ",
                sites={
                    "е": (_SiteOption("ѣ"), _SiteOption("е")),
                    "я": (_SiteOption("ѣ"), _SiteOption("я")),
                    "ъ": (_SiteOption("ъ"), _SiteOption("ѫ", non_final_only=True)),
                },
                rules=(
                    ConversionRule("R1", "ъ", "", "final", "both"),
                    ConversionRule("R1b", "ь", "", "final", "to_modern"),
                    ConversionRule("R2", "ѣ", "е", "any", "both"),
                    ConversionRule("R2a", "ѣ", "я", "any", "both"),
                    ConversionRule("R3", "ѫ", "ъ", "non_final", "both"),
                    ConversionRule("R4", "ѭ", "ю", "any", "both"),
                    ConversionRule("R5", "і", "и", "any", "both"),
                ),
            )
        return cls._DEFAULT

    @classmethod
    def from_rules(cls, rules: Sequence[ConversionRule]) -> "OrthographyRules":
        """Compile a rule list loaded from a rules file.

        For each historical character the first listed modern form wins in
        the to-modern direction. Variant options for a modern character
        follow file order, with the identity option appended last.
        """
        ids = [r.rule_id for r in rules]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate rule ids")
        to_modern_map: dict[str, tuple[str, bool]] = {}
        final_drop: set[str] = set()
        append_char = ""
        sites: dict[str, list[_SiteOption]] = {}
        for r in rules:
            if r.modern_form == "":
                if r.position == "final":
                    final_drop.add(r.historical_form)
                    if r.direction == "both" and not append_char:
                        append_char = r.historical_form
                continue
            if r.historical_form not in to_modern_map:
                to_modern_map[r.historical_form] = (
                    r.modern_form,
                    r.position == "non_final",
                )
            if r.direction == "both":
                opts = sites.setdefault(r.modern_form, [])
                opts.append(
                    _SiteOption(r.historical_form, r.position == "non_final")
                )
        for modern_char, opts in sites.items():
            opts.append(_SiteOption(modern_char))
        return cls(to_modern_map, final_drop, append_char or "ъ", sites, rules)


def load_rules_file(path: str | Path) -> OrthographyRules:
    """Read a TSV rules file: id, historical, modern, position, direction."""
    rules = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise ValueError(f"{path}:{lineno}: expected 5 tab-separated fields")
        rule_id, hist, modern, position, direction = parts
        rules.append(ConversionRule(rule_id, hist, modern, position, direction))
    return OrthographyRules.from_rules(rules)


class YatLexicon:
    """Exception list mapping modern word forms to their yat spellings."""

    def __init__(self, entries: Mapping[str, str]) -> None:
        for modern, historical in entries.items():
            if modern != modern.lower() or historical != historical.lower():
                raise ValueError(f"lexicon entry not lowercase: {modern} -> {historical}")
            if not historical or not all(is_letter(c) for c in historical):
                raise ValueError(f"bad historical form for {modern!r}: {historical!r}")
        self.entries = dict(entries)
        self._inverse: dict[str, str] = {}
        for modern, historical in self.entries.items():
            # first mapping wins when two modern forms share a spelling
            self._inverse.setdefault(historical, modern)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, modern: str) -> bool:
        return modern in self.entries

    def historical_of(self, modern: str) -> str | None:
        return self.entries.get(modern)

    def modern_of(self, historical: str) -> str | None:
        return self._inverse.get(historical)

    @classmethod
    def load(cls, path: str | Path) -> "YatLexicon":
        """Read a TSV file of ``modern<TAB>historical`` pairs, '#' comments."""
        entries: dict[str, str] = {}
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected modern<TAB>historical")
            entries[parts[0]] = parts[1]
        return cls(entries)


@dataclass(frozen=True)
class VariantSet:
    """Ordered spelling variants; the first element is the preferred one."""

    variants: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.variants:
            raise VariantOverflow("variant set may not be empty")
        if len(set(self.variants)) != len(self.variants):
            raise ValueError("duplicate variants")

    @property
    def preferred(self) -> str:
        return self.variants[0]

    def __iter__(self):
        return iter(self.variants)

    def __len__(self) -> int:
        return len(self.variants)


def detect_version(
    text: str, threshold: float = DEFAULT_DETECTION_THRESHOLD
) -> tuple[OrthographyVersion, float]:
    """Heuristic orthography detection for one document or page.

    Confidence is the fraction of words carrying an archaic signal: an
    archaic letter anywhere, or a final er after a consonant.
    """
    if not text.strip():
        raise EmptyText("cannot detect orthography of empty text")
    words = [t.surface.lower() for t in tokenize(text) if t.kind is TokenKind.WORD]
    if not words:
        return OrthographyVersion.MODERN, 0.0
    signal = 0
    for w in words:
        if set(w) & ARCHAIC_LETTERS:
            signal += 1
        elif len(w) >= 2 and w[-1] in FINAL_ER and _is_consonant(w[-2]):
            signal += 1
    confidence = signal / max(1, len(words))
    version = (
        OrthographyVersion.HISTORICAL
        if confidence >= threshold
        else OrthographyVersion.MODERN
    )
    return version, confidence


def to_modern(
    word: str,
    rules: OrthographyRules | None = None,
    yat_lexicon: YatLexicon | None = None,
) -> str:
    """Normalize one word to modern spelling.

    The yat lexicon's inverse mapping takes precedence, which is what picks
    я over the default е for exception words. Character case is preserved on
    the rule path; lexicon hits return the stored lowercase form.
    """
    rules = rules or OrthographyRules.default()
    if yat_lexicon is not None:
        hit = yat_lexicon.modern_of(word.lower())
        if hit is not None:
            return hit
    chars = list(word)
    if (
        len(chars) >= 2
        and chars[-1].lower() in rules.final_drop
        and _is_consonant(chars[-2])
    ):
        chars.pop()
    last = len(chars) - 1
    out: list[str] = []
    for i, c in enumerate(chars):
        mapped = rules.to_modern_map.get(c.lower())
        if mapped is not None:
            target, non_final_only = mapped
            if not (non_final_only and i == last):
                out.append(target.upper() if c.isupper() else target)
                continue
        out.append(c)
    return "".join(out)


def to_historical(
    word: str,
    rules: OrthographyRules | None = None,
    yat_lexicon: YatLexicon | None = None,
    max_variants: int = DEFAULT_MAX_VARIANTS,
) -> VariantSet:
    """Expand one modern word into candidate historical spellings.

    A yat-lexicon hit short-circuits to the single listed form. Otherwise
    every ambiguous site expands (preferred option first), the Cartesian
    product is emitted in site order and a final er is appended to variants
    ending in a consonant. Output is lowercase.
    """
    if max_variants < 1:
        raise VariantOverflow("max_variants must be at least 1")
    if not word:
        raise ValueError("cannot convert an empty word")
    rules = rules or OrthographyRules.default()
    lw = word.lower()
    if yat_lexicon is not None:
        hit = yat_lexicon.historical_of(lw)
        if hit is not None:
            return VariantSet((hit,))
    last = len(lw) - 1
    options: list[tuple[str, ...]] = []
    for i, c in enumerate(lw):
        site = rules.sites.get(c)
        if site:
            usable = tuple(
                o.char for o in site if not (o.non_final_only and i == last)
            )
            options.append(usable if usable else (c,))
        else:
            options.append((c,))
    variants: list[str] = []
    seen: set[str] = set()
    for combo in itertools.product(*options):
        v = "".join(combo)
        if v and _is_consonant(v[-1]):
            v += rules.append_char
        if v not in seen:
            seen.add(v)
            variants.append(v)
        if len(variants) >= max_variants:
            break
    return VariantSet(tuple(variants))


class SpellingConverter:
    """Bundles a rule table and yat lexicon for per-word conversion."""

    def __init__(
        self,
        rules: OrthographyRules | None = None,
        yat_lexicon: YatLexicon | None = None,
        max_variants: int = DEFAULT_MAX_VARIANTS,
    ) -> None:
        self.rules = rules or OrthographyRules.default()
        self.yat_lexicon = yat_lexicon
        self.max_variants = max_variants

    def modern(self, word: str) -> str:
        return to_modern(word, self.rules, self.yat_lexicon)

    def historical_preferred(self, word: str) -> str:
        return to_historical(
            word, self.rules, self.yat_lexicon, self.max_variants
        ).preferred

    def historical_variants(self, word: str) -> VariantSet:
        return to_historical(word, self.rules, self.yat_lexicon, self.max_variants)


def convert_lexicon(
    modern_words,
    rules: OrthographyRules | None = None,
    yat_lexicon: YatLexicon | None = None,
    max_variants: int = DEFAULT_MAX_VARIANTS,
):
    """Convert a modern word list into its historical counterpart.

    Accepts a :class:`~vestnik.lexicon.Lexicon` or any iterable of words and
    returns a historical :class:`~vestnik.lexicon.Lexicon` holding the union
    of all variants. Frequencies carry over to each variant (max on
    collision).
    """
    from .lexicon import Lexicon

    if isinstance(modern_words, Lexicon):
        items = [(w, modern_words.frequency.get(w, 1)) for w in sorted(modern_words.entries)]
    else:
        items = [(w, 1) for w in sorted(set(modern_words))]
    if not items:
        raise InvalidLexicon("cannot convert an empty lexicon")
    freq: dict[str, int] = {}
    for word, count in items:
        for variant in to_historical(word, rules, yat_lexicon, max_variants):
            freq[variant] = max(freq.get(variant, 0), count)
    return Lexicon(OrthographyVersion.HISTORICAL, freq)
