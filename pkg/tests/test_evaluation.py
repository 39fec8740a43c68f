"""Levenshtein metric, detection F, percentage of improvement, file loader."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vestnik.aligned import FormatError, dump_aligned_file, load_aligned_file, make_sample
from vestnik.correction.channel import learn_confusion
from vestnik.evaluation import (
    EvaluationReport,
    ZeroDistance,
    correction_distances,
    eval_correction,
    eval_detection,
    evaluate_run,
    levenshtein,
    token_gold_pairs,
)
from vestnik.lexicon import Lexicon
from vestnik.orthography import OrthographyVersion


def oracle_levenshtein(a, b, _memo=None):
    """Naive recursion with memo; independent of the DP implementation."""
    memo = {} if _memo is None else _memo

    def rec(i, j):
        if (i, j) in memo:
            return memo[(i, j)]
        if i == 0:
            result = j
        elif j == 0:
            result = i
        else:
            result = min(
                rec(i - 1, j - 1) + (0 if a[i - 1] == b[j - 1] else 1),
                rec(i - 1, j) + 1,
                rec(i, j - 1) + 1,
            )
        memo[(i, j)] = result
        return result

    return rec(len(a), len(b))


class TestLevenshtein:
    def test_identity(self):
        assert levenshtein("абв", "абв") == 0

    def test_classic(self):
        assert levenshtein("kitten", "sitting") == 3
        assert levenshtein("kitten", "sitting") == oracle_levenshtein("kitten", "sitting")

    def test_insertions_only(self):
        assert levenshtein("", "аб") == 2

    def test_exhaustive_up_to_length_three(self):
        strings = [
            "".join(p)
            for n in range(4)
            for p in itertools.product("аб", repeat=n)
        ]
        for a in strings:
            for b in strings:
                assert levenshtein(a, b) == oracle_levenshtein(a, b)

    @given(st.text(alphabet="абвг", max_size=8), st.text(alphabet="абвг", max_size=8))
    @settings(max_examples=300)
    def test_metric_properties(self, a, b):
        d = levenshtein(a, b)
        assert d == levenshtein(b, a)
        assert (d == 0) == (a == b)
        assert d <= max(len(a), len(b))

    @given(
        st.text(alphabet="аб", max_size=6),
        st.text(alphabet="аб", max_size=6),
        st.text(alphabet="аб", max_size=6),
    )
    @settings(max_examples=200)
    def test_triangle_inequality(self, a, b, c):
        assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


class TestEvalDetection:
    def test_perfect(self):
        p, r, f = eval_detection({1, 2}, {1, 2})
        assert (p, r, f) == (1.0, 1.0, 1.0)

    def test_empty_prediction_convention(self):
        p, r, f = eval_detection(set(), {1, 2})
        assert (p, r, f) == (0.0, 0.0, 0.0)

    def test_arithmetic(self):
        # TP=3, FP=1, FN=1
        p, r, f = eval_detection({1, 2, 3, 4}, {1, 2, 3, 5})
        assert p == pytest.approx(0.75)
        assert r == pytest.approx(0.75)
        assert f == pytest.approx(0.75)

    def test_universe_validated(self):
        with pytest.raises(ValueError):
            eval_detection({9}, {1}, all_tokens={1, 2})


class TestEvalCorrection:
    def test_oracle_corrector_scores_hundred(self):
        triples = [("кннга", "книга", "книга"), ("мир", "мир", "мир")]
        assert eval_correction(triples) == 100.0

    def test_identity_corrector_scores_zero(self):
        triples = [("кннга", "кннга", "книга"), ("мир", "мир", "мир")]
        assert eval_correction(triples) == 0.0

    def test_stated_arithmetic(self):
        # raw distances {2, 2}, corrected {1, 0} -> 100 * (4 - 1) / 4
        triples = [("ааxx", "ааxа", "аааа"), ("ббyy", "бббб", "бббб")]
        assert correction_distances(triples) == (4, 1)
        assert eval_correction(triples) == pytest.approx(75.0)

    def test_zero_distance_raises(self):
        with pytest.raises(ZeroDistance):
            eval_correction([("мир", "мир", "мир")])

    def test_can_be_negative(self):
        # one real error left in place, one correct token broken
        triples = [("мир", "щур", "мир"), ("водо", "водо", "вода")]
        assert eval_correction(triples) < 0

    def test_weighting_by_occurrence(self):
        # the same distinct pair repeated carries double weight
        once = [("аб", "аб", "ав"), ("xy", "xy", "xz")]
        twice = [("аб", "аб", "ав")] * 2 + [("xy", "xz", "xz")] * 2
        assert eval_correction(once) == pytest.approx(0.0)
        assert eval_correction(twice) == pytest.approx(50.0)

    def test_monotone_in_corrections(self):
        base = [("кннга", "кннга", "книга"), ("водо", "водо", "вода")]
        better = [("кннга", "книга", "книга"), ("водо", "водо", "вода")]
        assert eval_correction(better) > eval_correction(base)


class TestAlignedFile:
    def test_round_trip(self, tmp_path):
        samples = [make_sample("кннга", "книга"), make_sample("ми", "мир")]
        path = tmp_path / "corpus.txt"
        dump_aligned_file(samples, path)
        loaded = load_aligned_file(path)
        assert loaded == samples

    def test_two_samples(self, tmp_path):
        path = tmp_path / "ok.txt"
        path.write_text(
            "OCR:аб\nALN:аб\nGLD:ав\n\nOCR:х\nALN:х@\nGLD:ху\n", encoding="utf-8"
        )
        samples = load_aligned_file(path)
        assert len(samples) == 2
        assert samples[1].gold_input == "ху"

    def test_unequal_lengths_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("OCR:аб\nALN:аб\nGLD:абв\n", encoding="utf-8")
        with pytest.raises(FormatError) as info:
            load_aligned_file(path)
        assert info.value.line_number == 1

    def test_pad_removal_reproduces_input(self):
        sample = make_sample("мр", "мир")
        assert sample.ocr_aligned.replace("@", "") == sample.ocr_input

    def test_missing_prefix_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("OCR:аб\nGLD:аб\nALN:аб\n", encoding="utf-8")
        with pytest.raises(FormatError) as info:
            load_aligned_file(path)
        assert info.value.line_number == 2


class TestTokenGoldPairs:
    def test_substitution_pairing(self):
        sample = make_sample("мир кннга", "мир книга")
        pairs = token_gold_pairs(sample)
        assert [(t.surface, g) for t, g in pairs] == [
            ("мир", "мир"),
            ("кннга", "книга"),
        ]

    def test_length_changing_pairing(self):
        sample = make_sample("мр вода", "мир вода")
        pairs = token_gold_pairs(sample)
        assert [(t.surface, g) for t, g in pairs] == [("мр", "мир"), ("вода", "вода")]


class TestEvaluateRun:
    def test_baseline_run(self):
        lexicon = Lexicon(OrthographyVersion.MODERN, ["книга", "вода", "мир"])
        samples = [
            make_sample("кннга вода", "книга вода"),
            make_sample("мир", "мир"),
        ]
        confusion = learn_confusion(samples)
        report = evaluate_run(samples, lexicon, confusion=confusion)
        assert report.precision == 1.0
        assert report.recall == 1.0
        assert report.f_score == 1.0
        assert report.improvement_pct == 100.0
        assert report.token_count == 3
        assert report.distance_raw == 1
        assert report.distance_corrected == 0

    def test_zero_distance_run(self):
        lexicon = Lexicon(OrthographyVersion.MODERN, ["мир"])
        with pytest.raises(ZeroDistance):
            evaluate_run([make_sample("мир", "мир")], lexicon)

    def test_report_json_fields(self):
        report = EvaluationReport(1.0, 0.5, 2 / 3, 42.0, 10, 20, 11)
        data = report.to_json()
        assert set(data) == {
            "precision",
            "recall",
            "f_score",
            "improvement_pct",
            "token_count",
            "distance_raw",
            "distance_corrected",
        }
