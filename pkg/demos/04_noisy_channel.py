"""Ranking correction candidates with learned confusion costs."""

from vestnik.correction.channel import (
    ConfusionModel,
    generate_candidates,
    learn_confusion,
)
from vestnik.lexicon import Lexicon
from vestnik.orthography import OrthographyVersion
from vestnik.synthetic import corrupt_sentences, make_lexicon, make_sentences

# estimate the channel from a corrupted corpus of known provenance
lexicon = make_lexicon(120, seed=4)
sentences = make_sentences(sorted(lexicon.entries), count=200, seed=5)
samples = corrupt_sentences(sentences, rate=0.2, seed=6)
learned = learn_confusion(samples)

print("learned edit costs (lower = more plausible OCR confusion):")
for a, b in [("и", "н"), ("о", "с"), ("и", "ж")]:
    print(f"  {a} -> {b}: {learned.substitution_cost(a, b):.3f}")

words = Lexicon(OrthographyVersion.MODERN, {"книга": 50, "нога": 10, "нива": 10})
print()
for channel_name, channel in [("uniform", ConfusionModel.uniform()), ("learned", learned)]:
    candidates = generate_candidates("кннга", words, channel)
    print(f"candidates for 'кннга' with the {channel_name} channel:")
    for c in candidates:
        print(
            f"  {c.word:8s} channel={c.channel_cost:6.3f} "
            f"source={c.source_cost:5.3f} total={c.total:6.3f}"
        )
