"""Confusion model estimation and noisy-channel candidate ranking."""

import math

import pytest

from vestnik.correction.channel import (
    Candidate,
    ConfusionModel,
    generate_candidates,
    learn_confusion,
    unit_distance_within,
    weighted_edit_distance,
)
from vestnik.correction.detector import EmptyCorpus
from vestnik.evaluation import levenshtein
from vestnik.lexicon import Lexicon
from vestnik.orthography import OrthographyVersion


def brute_force_candidates(token, lexicon, confusion, max_edit=2, beam=64):
    """Scan the whole lexicon; the production path must agree exactly."""
    found = []
    for word in lexicon.entries:
        if levenshtein(token.lower(), word) <= max_edit:
            channel = weighted_edit_distance(token.lower(), word, confusion)
            source = -math.log(lexicon.frequency.get(word, 1) / lexicon.total_count)
            found.append(Candidate(word, channel, source))
    found.sort(key=lambda c: (c.total, c.word))
    return found[:beam]


@pytest.fixture
def small_lexicon():
    return Lexicon(OrthographyVersion.MODERN, ["книга", "нога", "вода", "мир"])


class TestLearnConfusion:
    def test_identity_corpus_floor(self):
        model = learn_confusion([("аб", "аб"), ("аб", "аб")])
        # counts: а->а 2, б->б 2; alphabet {а,б}; unseen non-identity edits
        # fall to the row floor -log(1/(2+2))
        floor = -math.log(1.0 / 4.0)
        assert model.substitution_cost("а", "б") == pytest.approx(floor)
        assert model.substitution_cost("б", "а") == pytest.approx(floor)
        assert model.substitution_cost("а", "а") == 0.0

    def test_observed_substitution_cheaper_than_unseen(self):
        model = learn_confusion([("нн", "ии")])
        assert model.substitution_cost("н", "и") < model.substitution_cost("н", "х")

    def test_smoothed_value(self):
        model = learn_confusion([("н", "и")])
        # alphabet {н, и}; row н total 1; cost = -log((1+1)/(1+2))
        assert model.substitution_cost("н", "и") == pytest.approx(-math.log(2 / 3))

    def test_empty_raises(self):
        with pytest.raises(EmptyCorpus):
            learn_confusion([])

    def test_unseen_char_gets_default(self):
        model = learn_confusion([("аб", "аб")])
        assert model.substitution_cost("ю", "я") == model.default_cost

    def test_identity_forced_zero_even_for_unseen(self):
        model = learn_confusion([("аб", "аб")])
        assert model.substitution_cost("ю", "ю") == 0.0

    def test_save_load_round_trip(self, tmp_path):
        model = learn_confusion([("кннга", "книга"), ("вода", "вода")])
        path = tmp_path / "confusion.json"
        model.save(path)
        loaded = ConfusionModel.load(path)
        for pair in [("н", "и"), ("к", "к"), ("х", "щ")]:
            assert loaded.substitution_cost(*pair) == pytest.approx(
                model.substitution_cost(*pair)
            )
        assert loaded.insertion_cost("а") == pytest.approx(model.insertion_cost("а"))
        assert loaded.deletion_cost("а") == pytest.approx(model.deletion_cost("а"))


class TestWeightedDistance:
    def test_identity_is_free(self):
        model = ConfusionModel.uniform(1.0)
        assert weighted_edit_distance("мир", "мир", model) == 0.0

    def test_uniform_matches_levenshtein(self):
        model = ConfusionModel.uniform(1.0)
        for a, b in [("кннга", "книга"), ("аб", "ба"), ("", "аб"), ("мир", "")]:
            assert weighted_edit_distance(a, b, model) == pytest.approx(
                levenshtein(a, b)
            )

    def test_learned_costs_reduce_distance(self):
        model = learn_confusion([("нннн", "ииии")])
        cheap = weighted_edit_distance("н", "и", model)
        dear = weighted_edit_distance("н", "х", model)
        assert cheap < dear


class TestUnitDistanceWithin:
    def test_within(self):
        assert unit_distance_within("кннга", "книга", 2) == 1

    def test_exceeds(self):
        assert unit_distance_within("абвгд", "хцчшщ", 2) is None

    def test_length_gap(self):
        assert unit_distance_within("а", "абвг", 2) is None


class TestGenerateCandidates:
    def test_identity_first(self, small_lexicon):
        model = ConfusionModel.uniform(1.0)
        candidates = generate_candidates("книга", small_lexicon, model)
        assert candidates[0].word == "книга"
        assert candidates[0].channel_cost == 0.0

    def test_ranked_substitution(self, small_lexicon):
        model = ConfusionModel.uniform(1.0)
        candidates = generate_candidates("кннга", small_lexicon, model)
        assert [c.word for c in candidates][0] == "книга"

    def test_no_candidates(self, small_lexicon):
        model = ConfusionModel.uniform(1.0)
        assert generate_candidates("ѩ", small_lexicon, model) == []

    def test_beam_cap(self, small_lexicon):
        model = ConfusionModel.uniform(1.0)
        candidates = generate_candidates("нога", small_lexicon, model, max_edit=4, beam=2)
        assert len(candidates) == 2

    def test_total_is_exact_sum(self, small_lexicon):
        model = ConfusionModel.uniform(1.0)
        for c in generate_candidates("вода", small_lexicon, model):
            assert c.total == c.channel_cost + c.source_cost

    def test_agrees_with_brute_force(self):
        import random

        rng = random.Random(7)
        alphabet = "абвгд"
        words = {
            "".join(rng.choice(alphabet) for _ in range(rng.randint(2, 6)))
            for _ in range(300)
        }
        lexicon = Lexicon(
            OrthographyVersion.MODERN,
            {w: rng.randint(1, 9) for w in words},
        )
        confusion = learn_confusion([("абвг", "авбг"), ("дд", "гг")])
        for _ in range(40):
            token = "".join(rng.choice(alphabet) for _ in range(rng.randint(2, 6)))
            fast = generate_candidates(token, lexicon, confusion)
            slow = brute_force_candidates(token, lexicon, confusion)
            assert fast == slow

    def test_frequency_breaks_ties(self):
        lexicon = Lexicon(OrthographyVersion.MODERN, {"мара": 90, "марс": 10})
        model = ConfusionModel.uniform(1.0)
        candidates = generate_candidates("мард", lexicon, model)
        # both are one uniform substitution away; the frequent word wins
        assert candidates[0].word == "мара"
