"""Training the convolutional sub-token detector on a synthetic corpus.

OCR output is simulated by и/н and о/с shape confusions; the detector
learns to flag damaged tokens from piece embeddings alone.
"""

import datetime
import random

from vestnik.aligned import make_sample
from vestnik.analyzer import CleanPage, RawPage
from vestnik.correction.corrector import flag_tokens
from vestnik.correction.detector import DetectorConfig, train_detector
from vestnik.lexicon import Lexicon
from vestnik.orthography import OrthographyVersion

WORDS = ["книга", "нива", "вино", "народ", "писмо", "масло", "вода", "мир"]

rng = random.Random(7)
samples = []
for _ in range(150):
    gold = " ".join(rng.choice(WORDS) for _ in range(5))
    tokens = gold.split()
    i = rng.randrange(len(tokens))
    tokens[i] = tokens[i].replace("и", "н").replace("о", "с")
    samples.append(make_sample(" ".join(tokens), gold))

config = DetectorConfig(
    kernel_sizes=(2, 3, 4),
    filters_per_kernel=8,
    embedding_dim=12,
    pool_window=2,
    max_sequence=64,
)
model = train_detector(samples, config, epochs=10, learning_rate=0.3, seed=0)

print("loss per epoch (entry 0 is the untrained loss):")
for epoch, loss in enumerate(model.loss_history):
    print(f"  epoch {epoch:2d}: {loss:.4f}")

page = CleanPage.from_raw(
    RawPage("в1", datetime.date(1900, 1, 1), 1, "кннга до нивата и виното")
)
lexicon = Lexicon(OrthographyVersion.MODERN, WORDS)
flagged = flag_tokens(page, lexicon, model)
print()
print("flagged tokens:", [page.tokens[i].surface for i in flagged])
