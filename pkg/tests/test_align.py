"""Character alignment and its annotations."""

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from vestnik.correction.align import align_chars, alignment_cost, char_alignment
from vestnik.evaluation import levenshtein


def test_identity():
    ops = align_chars("абв", "абв")
    assert [op.kind for op in ops] == ["match", "match", "match"]


def test_single_substitution():
    # DP matrix by hand: one substitution at position 2
    ops = align_chars("кннга", "книга")
    kinds = [(op.kind, op.ocr_pos) for op in ops if op.kind != "match"]
    assert kinds == [("substitute", 2)]
    assert alignment_cost(ops) == 1


def test_deletions_only():
    ops = align_chars("ab", "")
    assert [op.kind for op in ops] == ["delete", "delete"]


def test_insertions_only():
    ops = align_chars("", "ab")
    assert [op.kind for op in ops] == ["insert", "insert"]


def test_tie_break_prefers_match_then_substitute():
    # "ab" -> "b" could delete either char; cost 1 either way. The stated
    # preference keeps the match on 'b' and deletes 'a'.
    ops = align_chars("ab", "b")
    assert [(op.kind, op.ocr_pos) for op in ops] == [("delete", 0), ("match", 1)]


@given(
    st.text(alphabet="абвг", max_size=8),
    st.text(alphabet="абвг", max_size=8),
)
@settings(max_examples=300)
def test_cost_equals_levenshtein(a, b):
    assert alignment_cost(align_chars(a, b)) == levenshtein(a, b)


def test_cost_equals_levenshtein_exhaustive_short():
    alphabet = "аб"
    strings = [
        "".join(p)
        for n in range(4)
        for p in itertools.product(alphabet, repeat=n)
    ]
    for a in strings:
        for b in strings:
            assert alignment_cost(align_chars(a, b)) == levenshtein(a, b)


class TestCharAlignment:
    def test_substitution_marks_position(self):
        al = char_alignment("кннга", "книга")
        assert al.error_positions == frozenset({2})
        assert al.gold_ranges[2] == (2, 3)

    def test_clean_pair_has_no_errors(self):
        al = char_alignment("мир", "мир")
        assert al.error_positions == frozenset()
        assert al.gold_ranges == ((0, 1), (1, 2), (2, 3))

    def test_insert_anchors_to_following_char(self):
        # OCR dropped the first gold char
        al = char_alignment("ир", "мир")
        assert 0 in al.error_positions
        lo, hi = al.gold_ranges[0]
        assert (lo, hi) == (0, 2)  # covers the inserted 'м' and matched 'и'

    def test_insert_at_end_anchors_to_last_char(self):
        al = char_alignment("ми", "мир")
        assert 1 in al.error_positions

    def test_delete_marks_spurious_char(self):
        al = char_alignment("миир", "мир")
        assert len(al.error_positions) == 1
        assert al.error_positions <= {1, 2}

    def test_token_slices_recoverable(self):
        # two words, error only in the second
        al = char_alignment("мир кннга", "мир книга")
        assert al.error_positions == frozenset({6})
        # slice the gold text by the ranges of the second word
        spans = [al.gold_ranges[i] for i in range(4, 9)]
        lo = min(s[0] for s in spans if s)
        hi = max(s[1] for s in spans if s)
        assert "мир книга"[lo:hi] == "книга"
