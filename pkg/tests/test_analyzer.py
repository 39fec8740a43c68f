"""Tokenizer, de-hyphenation and metadata stripping."""

import datetime

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vestnik.analyzer import (
    CleanPage,
    RawPage,
    Token,
    TokenKind,
    UnterminatedMetadataBlock,
    dehyphenate,
    is_letter,
    strip_metadata,
    tokenize,
)


def oracle_tokenize(text):
    """Independent character-class scanner used to cross-check tokenize."""
    out = []
    run = []
    run_kind = None

    def classify(c):
        if c.isspace():
            return None
        if is_letter(c):
            return TokenKind.WORD
        if "0" <= c <= "9":
            return TokenKind.NUMBER
        return TokenKind.PUNCTUATION

    def flush(end):
        if run:
            out.append((("".join(run)), end - len(run), end, run_kind))

    for i, c in enumerate(text):
        kind = classify(c)
        if kind is None:
            flush(i)
            run.clear()
            run_kind = None
        elif kind == TokenKind.PUNCTUATION:
            flush(i)
            run.clear()
            out.append((c, i, i + 1, kind))
            run_kind = None
        elif kind == run_kind:
            run.append(c)
        else:
            flush(i)
            run.clear()
            run.append(c)
            run_kind = kind
    flush(len(text))
    return out


def as_tuples(tokens):
    return [(t.surface, t.start, t.end, t.kind) for t in tokens]


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_words_and_punct(self):
        # hand-applied run rules, cross-checked below against the oracle
        assert as_tuples(tokenize("Нова книга.")) == [
            ("Нова", 0, 4, TokenKind.WORD),
            ("книга", 5, 10, TokenKind.WORD),
            (".", 10, 11, TokenKind.PUNCTUATION),
        ]
        assert as_tuples(tokenize("Нова книга.")) == oracle_tokenize("Нова книга.")

    def test_number_run(self):
        assert as_tuples(tokenize("1882 г.")) == [
            ("1882", 0, 4, TokenKind.NUMBER),
            ("г", 5, 6, TokenKind.WORD),
            (".", 6, 7, TokenKind.PUNCTUATION),
        ]
        assert as_tuples(tokenize("1882 г.")) == oracle_tokenize("1882 г.")

    def test_archaic_letters_are_word_chars(self):
        tokens = tokenize("хлѣбъ ѫгълъ і ѭ ѥ")
        assert [t.kind for t in tokens] == [TokenKind.WORD] * 5

    def test_offsets_slice_back(self):
        text = "Миръ, 1882-та г.!"
        for t in tokenize(text):
            assert text[t.start : t.end] == t.surface

    @given(st.text(alphabet="абвѣѫ .,-7xY\n\t", max_size=60))
    @settings(max_examples=200)
    def test_matches_oracle(self, text):
        assert as_tuples(tokenize(text)) == oracle_tokenize(text)

    @given(st.text(max_size=40))
    def test_total_and_bounded(self, text):
        tokens = tokenize(text)
        assert sum(t.end - t.start for t in tokens) <= len(text)
        for a, b in zip(tokens, tokens[1:]):
            assert a.end <= b.start  # non-overlapping, sorted

    @given(st.text(alphabet="абв гд1.", max_size=40))
    def test_idempotent_on_surfaces(self, text):
        surfaces = [t.surface for t in tokenize(text)]
        again = [t.surface for t in tokenize(" ".join(surfaces))]
        assert surfaces == again


class TestDehyphenate:
    def test_single_line(self):
        assert dehyphenate(["без дефис"]) == "без дефис"

    def test_joins_broken_word(self):
        assert dehyphenate(["кни-", "га"]) == "книга"

    def test_hyphen_after_non_letter_kept(self):
        assert dehyphenate(["ул. -", "Шипка"]) == "ул. - Шипка"

    def test_uppercase_continuation_not_joined(self):
        assert dehyphenate(["кни-", "Га"]) == "кни- Га"

    def test_chained_joins(self):
        assert dehyphenate(["кни-", "га-", "та"]) == "книгата"

    def test_empty(self):
        assert dehyphenate([]) == ""

    @given(st.lists(st.text(alphabet="абвг- ", max_size=8), max_size=6))
    def test_never_adds_or_changes_letters(self, lines):
        joined = dehyphenate(lines)
        before = [c for line in lines for c in line if c not in "- "]
        after = [c for c in joined if c not in "- "]
        assert before == after
        assert joined.count("-") <= sum(line.count("-") for line in lines)


class TestStripMetadata:
    def test_no_markers_identity(self):
        body = "първи ред\nвтори ред"
        assert strip_metadata(body) == body

    def test_strips_block(self):
        assert strip_metadata("===META\nscan:42\n===END\nТекстъ") == "Текстъ"

    def test_unterminated(self):
        with pytest.raises(UnterminatedMetadataBlock):
            strip_metadata("===META\nx")

    def test_idempotent(self):
        body = "a\n===META\nz\n===END\nb\n===END\nc"
        once = strip_metadata(body)
        assert strip_metadata(once) == once

    def test_multiple_blocks(self):
        body = "a\n===META\nx\n===END\nb\n===META\ny\n===END\nc"
        assert strip_metadata(body) == "a\nb\nc"


class TestPages:
    def test_raw_page_validation(self):
        with pytest.raises(ValueError):
            RawPage("в1", datetime.date(1790, 1, 1), 1, "текст")
        with pytest.raises(ValueError):
            RawPage("в1", datetime.date(1900, 1, 1), 0, "текст")

    def test_clean_page_pipeline(self):
        raw = RawPage(
            "в1",
            datetime.date(1900, 1, 1),
            2,
            "===META\nscan:1\n===END\nНова кни-\nга.",
        )
        page = CleanPage.from_raw(raw)
        assert page.text == "Нова книга."
        assert [t.surface for t in page.tokens] == ["Нова", "книга", "."]
        # tokens re-derivable from the text
        assert list(page.tokens) == tokenize(page.text)

    def test_token_invariant(self):
        with pytest.raises(ValueError):
            Token("x", 3, 3, TokenKind.WORD)
