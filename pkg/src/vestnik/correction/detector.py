"""Convolutional sub-token error detector.

Pieces are embedded from a trainable table and run through parallel 1-D
convolutions of increasing kernel size (32 filters each at defaults), a
stride-1 max pool that keeps sequence length, and a per-position linear
classifier. Backpropagation is hand-rolled in numpy so gradients can be
checked against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..aligned import AlignedSample
from ..analyzer import Token, TokenKind, tokenize
from .align import char_alignment
from .subtokens import PieceVocabulary, subtokenize


class SequenceTooLong(ValueError):
    """Piece sequence exceeds the model's max_sequence."""


class EmptyCorpus(ValueError):
    """Training or estimation got an empty corpus."""


@dataclass(frozen=True)
class DetectorConfig:
    kernel_sizes: tuple[int, ...] = (2, 3, 4, 5, 6)
    filters_per_kernel: int = 32
    embedding_dim: int = 32
    pool_window: int = 2
    max_sequence: int = 128
    token_rule: str = "any_flagged"  # or "more_than_one"

    def __post_init__(self) -> None:
        if not self.kernel_sizes or any(k < 1 for k in self.kernel_sizes):
            raise ValueError("kernel sizes must be positive")
        if list(self.kernel_sizes) != sorted(set(self.kernel_sizes)):
            raise ValueError("kernel sizes must be strictly increasing")
        for name in ("filters_per_kernel", "embedding_dim", "pool_window", "max_sequence"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.token_rule not in ("any_flagged", "more_than_one"):
            raise ValueError(f"unknown token_rule {self.token_rule!r}")

    @property
    def concat_dim(self) -> int:
        return self.filters_per_kernel * len(self.kernel_sizes)


class DetectorModel:
    """Weights for one detector, immutable by convention after training."""

    def __init__(
        self,
        config: DetectorConfig,
        vocabulary: PieceVocabulary,
        embedding: np.ndarray,
        conv_weights: Mapping[int, np.ndarray],
        conv_biases: Mapping[int, np.ndarray],
        out_weights: np.ndarray,
        out_bias: np.ndarray,
        loss_history: tuple[float, ...] = (),
    ) -> None:
        d, f = config.embedding_dim, config.filters_per_kernel
        if embedding.shape != (vocabulary.table_rows, d):
            raise ValueError(f"embedding shape {embedding.shape} inconsistent")
        for k in config.kernel_sizes:
            if conv_weights[k].shape != (k, d, f):
                raise ValueError(f"conv weights for kernel {k} have wrong shape")
            if conv_biases[k].shape != (f,):
                raise ValueError(f"conv bias for kernel {k} has wrong shape")
        if out_weights.shape != (config.concat_dim, 2) or out_bias.shape != (2,):
            raise ValueError("output layer shape inconsistent")
        arrays = [embedding, out_weights, out_bias]
        arrays += [conv_weights[k] for k in config.kernel_sizes]
        arrays += [conv_biases[k] for k in config.kernel_sizes]
        if any(not np.all(np.isfinite(a)) for a in arrays):
            raise ValueError("model weights must be finite")
        self.config = config
        self.vocabulary = vocabulary
        self.embedding = embedding
        self.conv_weights = {k: conv_weights[k] for k in config.kernel_sizes}
        self.conv_biases = {k: conv_biases[k] for k in config.kernel_sizes}
        self.out_weights = out_weights
        self.out_bias = out_bias
        self.loss_history = loss_history

    @classmethod
    def zeros(cls, config: DetectorConfig, vocabulary: PieceVocabulary) -> "DetectorModel":
        d, f = config.embedding_dim, config.filters_per_kernel
        return cls(
            config,
            vocabulary,
            np.zeros((vocabulary.table_rows, d)),
            {k: np.zeros((k, d, f)) for k in config.kernel_sizes},
            {k: np.zeros(f) for k in config.kernel_sizes},
            np.zeros((config.concat_dim, 2)),
            np.zeros(2),
        )

    @classmethod
    def random(
        cls,
        config: DetectorConfig,
        vocabulary: PieceVocabulary,
        rng: np.random.Generator,
        scale: float = 0.5,
    ) -> "DetectorModel":
        d, f = config.embedding_dim, config.filters_per_kernel
        return cls(
            config,
            vocabulary,
            rng.normal(0.0, scale, (vocabulary.table_rows, d)),
            {k: rng.normal(0.0, scale, (k, d, f)) for k in config.kernel_sizes},
            {k: rng.normal(0.0, scale, f) for k in config.kernel_sizes},
            rng.normal(0.0, scale, (config.concat_dim, 2)),
            rng.normal(0.0, scale, 2),
        )

    def replace_weights(
        self,
        embedding: np.ndarray,
        conv_weights: Mapping[int, np.ndarray],
        conv_biases: Mapping[int, np.ndarray],
        out_weights: np.ndarray,
        out_bias: np.ndarray,
        loss_history: tuple[float, ...] = (),
    ) -> "DetectorModel":
        return DetectorModel(
            self.config,
            self.vocabulary,
            embedding,
            conv_weights,
            conv_biases,
            out_weights,
            out_bias,
            loss_history,
        )

    def rows_for(self, pieces: Sequence[str]) -> np.ndarray:
        return np.array([self.vocabulary.row(p) for p in pieces], dtype=np.intp)

    def save(self, path: str | Path) -> None:
        """Portable dump: every tensor plus config and vocabulary."""
        cfg = self.config
        payload: dict[str, np.ndarray] = {
            "format_version": np.array([1], dtype=np.int64),
            "kernel_sizes": np.array(cfg.kernel_sizes, dtype=np.int64),
            "scalars": np.array(
                [cfg.filters_per_kernel, cfg.embedding_dim, cfg.pool_window, cfg.max_sequence],
                dtype=np.int64,
            ),
            "token_rule": np.array([cfg.token_rule]),
            # pieces never contain whitespace, so a newline join is safe
            "pieces": np.array(["\n".join(self.vocabulary.pieces)]),
            "embedding": self.embedding,
            "out_weights": self.out_weights,
            "out_bias": self.out_bias,
            "loss_history": np.array(self.loss_history, dtype=np.float64),
        }
        for k in cfg.kernel_sizes:
            payload[f"conv_w_{k}"] = self.conv_weights[k]
            payload[f"conv_b_{k}"] = self.conv_biases[k]
        with open(path, "wb") as fh:
            np.savez(fh, **payload)

    @classmethod
    def load(cls, path: str | Path) -> "DetectorModel":
        with np.load(path) as data:
            version = int(data["format_version"][0])
            if version != 1:
                raise ValueError(f"unsupported model format version {version}")
            kernel_sizes = tuple(int(k) for k in data["kernel_sizes"])
            filters, dim, pool, max_seq = (int(v) for v in data["scalars"])
            config = DetectorConfig(
                kernel_sizes=kernel_sizes,
                filters_per_kernel=filters,
                embedding_dim=dim,
                pool_window=pool,
                max_sequence=max_seq,
                token_rule=str(data["token_rule"][0]),
            )
            joined = str(data["pieces"][0])
            vocabulary = PieceVocabulary(joined.split("\n") if joined else [])
            model = cls(
                config,
                vocabulary,
                data["embedding"],
                {k: data[f"conv_w_{k}"] for k in kernel_sizes},
                {k: data[f"conv_b_{k}"] for k in kernel_sizes},
                data["out_weights"],
                data["out_bias"],
                tuple(float(x) for x in data["loss_history"]),
            )
        return model


def _sliding(x: np.ndarray, window: int) -> np.ndarray:
    """(N, D) -> (N - window + 1, window, D) view."""
    return np.lib.stride_tricks.sliding_window_view(x, (window, x.shape[1])).reshape(
        x.shape[0] - window + 1, window, x.shape[1]
    )


def _forward(model: DetectorModel, rows: np.ndarray) -> dict:
    """Full forward pass, caching intermediates for backprop."""
    cfg = model.config
    L = len(rows)
    x = model.embedding[rows]  # (L, D)
    cache: dict = {"rows": rows, "x": x, "kernels": {}}
    pooled_maps = []
    for k in cfg.kernel_sizes:
        pad_left = (k - 1) // 2
        pad_right = k - 1 - pad_left
        xp = np.pad(x, ((pad_left, pad_right), (0, 0)))
        win = _sliding(xp, k)  # (L, k, D)
        pre = np.einsum("lkd,kdf->lf", win, model.conv_weights[k]) + model.conv_biases[k]
        post = np.maximum(pre, 0.0)
        w = cfg.pool_window
        post_padded = np.concatenate(
            [post, np.full((w - 1, post.shape[1]), -np.inf)]
        ) if w > 1 else post
        pwin = _sliding(post_padded, w)  # (L, w, F)
        arg = np.argmax(pwin, axis=1)  # first max, deterministic
        pooled = np.take_along_axis(pwin, arg[:, None, :], axis=1)[:, 0, :]
        cache["kernels"][k] = {
            "pad_left": pad_left,
            "win": win,
            "pre": pre,
            "post": post,
            "arg": arg,
        }
        pooled_maps.append(pooled)
    concat = np.concatenate(pooled_maps, axis=1)  # (L, concat_dim)
    logits = concat @ model.out_weights + model.out_bias
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)
    cache["concat"] = concat
    cache["logits"] = logits
    cache["probs"] = probs
    return cache


def _check_sequence(model: DetectorModel, pieces: Sequence[str]) -> np.ndarray:
    if len(pieces) == 0:
        raise ValueError("piece sequence must be non-empty")
    if len(pieces) > model.config.max_sequence:
        raise SequenceTooLong(
            f"{len(pieces)} pieces exceed max_sequence {model.config.max_sequence}"
        )
    return model.rows_for(pieces)


def detector_forward(model: DetectorModel, pieces: Sequence[str]) -> np.ndarray:
    """Per-piece probability of the erroneous class, shape (L,)."""
    rows = _check_sequence(model, pieces)
    return _forward(model, rows)["probs"][:, 1]


def detector_class_probabilities(model: DetectorModel, pieces: Sequence[str]) -> np.ndarray:
    """Both class probabilities per position, shape (L, 2)."""
    rows = _check_sequence(model, pieces)
    return _forward(model, rows)["probs"]


@dataclass
class DetectorGradients:
    loss: float
    embedding: np.ndarray
    conv_weights: dict[int, np.ndarray]
    conv_biases: dict[int, np.ndarray]
    out_weights: np.ndarray
    out_bias: np.ndarray


def detector_gradient(
    model: DetectorModel, pieces: Sequence[str], labels: Sequence[int]
) -> DetectorGradients:
    """Gradients of mean cross-entropy over all weight tensors."""
    rows = _check_sequence(model, pieces)
    y = np.asarray(labels, dtype=np.intp)
    if y.shape != (len(rows),) or not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0/1 and match the sequence length")
    cfg = model.config
    cache = _forward(model, rows)
    L = len(rows)
    probs = cache["probs"]
    loss = float(-np.mean(np.log(probs[np.arange(L), y])))

    dlogits = probs.copy()
    dlogits[np.arange(L), y] -= 1.0
    dlogits /= L
    d_out_w = cache["concat"].T @ dlogits
    d_out_b = dlogits.sum(axis=0)
    dconcat = dlogits @ model.out_weights.T

    d_embedding = np.zeros_like(model.embedding)
    dx = np.zeros_like(cache["x"])
    d_conv_w: dict[int, np.ndarray] = {}
    d_conv_b: dict[int, np.ndarray] = {}
    f = cfg.filters_per_kernel
    for idx, k in enumerate(cfg.kernel_sizes):
        kc = cache["kernels"][k]
        dpooled = dconcat[:, idx * f : (idx + 1) * f]  # (L, F)
        dpost = np.zeros_like(kc["post"])
        abs_rows = np.arange(L)[:, None] + kc["arg"]  # argmax never hits the pad
        np.add.at(dpost, (abs_rows, np.arange(f)[None, :]), dpooled)
        dpre = dpost * (kc["pre"] > 0)
        d_conv_w[k] = np.einsum("lkd,lf->kdf", kc["win"], dpre)
        d_conv_b[k] = dpre.sum(axis=0)
        dwin = np.einsum("lf,kdf->lkd", dpre, model.conv_weights[k])
        dxp = np.zeros((L + k - 1, cfg.embedding_dim))
        for off in range(k):
            dxp[off : off + L] += dwin[:, off, :]
        pad_left = kc["pad_left"]
        dx += dxp[pad_left : pad_left + L]
    np.add.at(d_embedding, rows, dx)
    return DetectorGradients(loss, d_embedding, d_conv_w, d_conv_b, d_out_w, d_out_b)


def token_is_erroneous(
    probabilities: Sequence[float],
    token_rule: str = "any_flagged",
    threshold: float = 0.5,
) -> bool:
    """Collapse per-piece probabilities into one token-level decision."""
    probs = list(probabilities)
    if not probs:
        raise ValueError("need at least one piece probability")
    flagged = sum(1 for p in probs if p > threshold)
    if token_rule == "any_flagged":
        return flagged >= 1
    if token_rule == "more_than_one":
        return flagged >= 2
    raise ValueError(f"unknown token_rule {token_rule!r}")


def baseline_detect(token: Token, lexicon) -> bool:
    """Dictionary gate: a word token is suspicious iff it is out of lexicon."""
    return token.kind is TokenKind.WORD and token.surface.lower() not in lexicon


def sample_sequences(
    sample: AlignedSample, vocabulary: PieceVocabulary, max_sequence: int
) -> list[tuple[list[str], list[int], list[int]]]:
    """Piece sequences with labels for one aligned sample.

    Returns chunks of (pieces, labels, token_ids) no longer than
    ``max_sequence``, split at token boundaries. A piece is labeled
    erroneous iff any of its characters takes part in a non-identity edit
    against the gold text.
    """
    alignment = char_alignment(sample.ocr_input, sample.gold_input)
    chunks: list[tuple[list[str], list[int], list[int]]] = []
    pieces: list[str] = []
    labels: list[int] = []
    token_ids: list[int] = []
    for t_idx, token in enumerate(tokenize(sample.ocr_input)):
        if token.kind is not TokenKind.WORD:
            continue
        sub = subtokenize(token.surface, vocabulary)
        if len(sub.pieces) > max_sequence:
            sub_pieces = sub.pieces[:max_sequence]
        else:
            sub_pieces = sub.pieces
        if pieces and len(pieces) + len(sub_pieces) > max_sequence:
            chunks.append((pieces, labels, token_ids))
            pieces, labels, token_ids = [], [], []
        for p in sub_pieces:
            span = range(token.start + p.start, token.start + p.end)
            label = int(any(pos in alignment.error_positions for pos in span))
            pieces.append(p.text)
            labels.append(label)
            token_ids.append(t_idx)
    if pieces:
        chunks.append((pieces, labels, token_ids))
    return chunks


def _corpus_loss(model: DetectorModel, sequences) -> float:
    total, count = 0.0, 0
    for pieces, labels, _ in sequences:
        rows = model.rows_for(pieces)
        cache = _forward(model, rows)
        y = np.asarray(labels, dtype=np.intp)
        total += float(-np.sum(np.log(cache["probs"][np.arange(len(rows)), y])))
        count += len(rows)
    return total / max(1, count)


def train_detector(
    corpus: Sequence[AlignedSample],
    config: DetectorConfig | None = None,
    epochs: int = 10,
    learning_rate: float = 0.5,
    seed: int = 0,
    max_vocab: int = 1024,
) -> DetectorModel:
    """Train a detector with plain SGD over aligned OCR/gold samples.

    Deterministic for a given seed: initialization and per-epoch shuffling
    come from one seeded generator. If the final full-corpus loss exceeds
    the initial one the run restarts with a quartered learning rate (up to
    three times), so the returned model never ends worse than it started.
    The loss trajectory is kept on ``model.loss_history`` with entry 0 being
    the pre-training loss.
    """
    if not corpus:
        raise EmptyCorpus("training corpus is empty")
    if config is None:
        config = DetectorConfig()
    words: list[str] = []
    for sample in corpus:
        words.extend(
            t.surface for t in tokenize(sample.ocr_input) if t.kind is TokenKind.WORD
        )
    if not words:
        raise EmptyCorpus("training corpus contains no word tokens")
    vocabulary = PieceVocabulary.build_from_words(words, max_size=max_vocab)
    sequences: list[tuple[list[str], list[int], list[int]]] = []
    for sample in corpus:
        sequences.extend(sample_sequences(sample, vocabulary, config.max_sequence))
    if not sequences:
        raise EmptyCorpus("training corpus produced no piece sequences")

    lr = learning_rate
    for _ in range(4):
        rng = np.random.default_rng(seed)
        model = DetectorModel.random(config, vocabulary, rng, scale=0.1)
        history = [_corpus_loss(model, sequences)]
        for _epoch in range(epochs):
            order = rng.permutation(len(sequences))
            for s_idx in order:
                pieces, labels, _ = sequences[s_idx]
                g = detector_gradient(model, pieces, labels)
                model = model.replace_weights(
                    model.embedding - lr * g.embedding,
                    {k: model.conv_weights[k] - lr * g.conv_weights[k] for k in config.kernel_sizes},
                    {k: model.conv_biases[k] - lr * g.conv_biases[k] for k in config.kernel_sizes},
                    model.out_weights - lr * g.out_weights,
                    model.out_bias - lr * g.out_bias,
                )
            history.append(_corpus_loss(model, sequences))
        if history[-1] <= history[0]:
            break
        lr /= 4.0
    return model.replace_weights(
        model.embedding,
        model.conv_weights,
        model.conv_biases,
        model.out_weights,
        model.out_bias,
        loss_history=tuple(history),
    )
