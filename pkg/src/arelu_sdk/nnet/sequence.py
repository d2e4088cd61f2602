# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Tiny autoregressive model for the token-copy task, plus beam search.

At step ``t`` the model sees two embeddings: the source token aligned with
``t`` (a past-the-end marker once ``t`` runs off the source) and the
previously emitted token (BOS at ``t = 0``).  Their concatenation feeds a
two-layer :class:`TinyNetwork` whose output logits cover the vocabulary.
Step ``t`` therefore depends only on the source and on tokens ``< t``.

Sequence scores multiply per-step weights.  alpha-ReLU weights are not
normalized, so every step's weights are renormalized over their support
before scoring; the raw-weight score is kept next to it.  A step whose
weights are all zero falls back to the logit argmax and scores zero.
"""

from __future__ import annotations

import dataclasses
import math
import time
from typing import Sequence

import numpy as np

from arelu_sdk.common.errors import ConfigError, InputDomainError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.heads import OutputHead
from arelu_sdk.losses.types import reduce_mean
from arelu_sdk.nnet.datasets import EOS, CopyExample
from arelu_sdk.nnet.network import TinyNetwork
from arelu_sdk.nnet.optim import build_optimizer
from arelu_sdk.nnet.training import TrainConfig, TrainingRecord

__all__ = [
    "SequenceModelConfig",
    "SequenceModel",
    "Hypothesis",
    "SequenceScore",
    "train_sequence_model",
    "decode",
    "score_sequence",
]

logger = get_logger(__name__)

NEG_INF = float("-inf")


@dataclasses.dataclass(frozen=True)
class SequenceModelConfig:
    vocab: int = 50
    embed_dim: int = 16
    hidden: int = 128
    activation: str = "relu"
    seed: int = 0


class SequenceModel:
    """Embedding tables plus a two-layer network; EOS is token 0."""

    eos: int = EOS

    def __init__(self, config: SequenceModelConfig):
        if config.vocab < 3:
            raise ConfigError(f"vocab must be >= 3, got {config.vocab}")
        self.config = config
        rng = np.random.default_rng(config.seed)
        # row ``vocab`` is the past-the-end marker (source) / BOS (previous token)
        self.source_embedding = rng.standard_normal((config.vocab + 1, config.embed_dim))
        self.prev_embedding = rng.standard_normal((config.vocab + 1, config.embed_dim))
        self.net = TinyNetwork(
            (2 * config.embed_dim, config.hidden, config.vocab),
            activation=config.activation,
            seed=config.seed + 1,
        )

    @property
    def vocab(self) -> int:
        return self.config.vocab

    @property
    def parameters(self) -> list[np.ndarray]:
        return [self.source_embedding, self.prev_embedding, *self.net.weights]

    def _indices(
        self, source: Sequence[int], prefixes: Sequence[Sequence[int]]
    ) -> tuple[np.ndarray, np.ndarray]:
        marker = self.vocab
        src_idx = np.array(
            [source[len(p)] if len(p) < len(source) else marker for p in prefixes], dtype=np.intp
        )
        prev_idx = np.array([p[-1] if len(p) else marker for p in prefixes], dtype=np.intp)
        return src_idx, prev_idx

    def _features(self, src_idx: np.ndarray, prev_idx: np.ndarray) -> np.ndarray:
        return np.concatenate(
            [self.source_embedding[src_idx], self.prev_embedding[prev_idx]], axis=-1
        )

    def step_logits(self, source: Sequence[int], prefixes: Sequence[Sequence[int]]) -> np.ndarray:
        """Next-token logits ``(len(prefixes), vocab)`` for each prefix of one source."""
        src_idx, prev_idx = self._indices(source, prefixes)
        return self.net.forward(self._features(src_idx, prev_idx))

    def teacher_forced_rows(
        self, examples: Sequence[CopyExample]
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Source indices, previous-token indices and labels for every target step.

        Each target contributes one row per token plus one for the closing EOS.
        """
        src_rows: list[np.ndarray] = []
        prev_rows: list[np.ndarray] = []
        labels: list[int] = []
        for ex in examples:
            gold = list(ex.target) + [self.eos]
            prefixes = [gold[:t] for t in range(len(gold))]
            src_idx, prev_idx = self._indices(ex.source, prefixes)
            src_rows.append(src_idx)
            prev_rows.append(prev_idx)
            labels.extend(gold)
        return (
            np.concatenate(src_rows),
            np.concatenate(prev_rows),
            np.asarray(labels, dtype=np.intp),
        )

    def teacher_forced_logits(self, examples: Sequence[CopyExample]) -> np.ndarray:
        """Logits for every teacher-forced step of *examples*, stacked row-wise."""
        src_idx, prev_idx, _ = self.teacher_forced_rows(examples)
        return self.net.forward(self._features(src_idx, prev_idx))

    def gradients(
        self, src_idx: np.ndarray, prev_idx: np.ndarray, labels: np.ndarray, head: OutputHead
    ) -> tuple[list[np.ndarray], float]:
        """Mean-loss gradients for ``parameters`` (embeddings first)."""
        feats = self._features(src_idx, prev_idx)
        grads = self.net.backward(feats, labels, head, want_input=True)
        assert grads.input is not None
        e = self.config.embed_dim
        g_src = np.zeros_like(self.source_embedding)
        g_prev = np.zeros_like(self.prev_embedding)
        np.add.at(g_src, src_idx, grads.input[:, :e])
        np.add.at(g_prev, prev_idx, grads.input[:, e:])
        return [g_src, g_prev, *grads.weights], grads.loss


def train_sequence_model(
    model: SequenceModel,
    examples: Sequence[CopyExample],
    head: OutputHead,
    config: TrainConfig | None = None,
) -> list[TrainingRecord]:
    """Teacher-forced full-batch training; accuracy is per target token."""
    config = config or TrainConfig()
    if not examples:
        raise InputDomainError("training set is empty")
    src_idx, prev_idx, labels = model.teacher_forced_rows(examples)
    optimizer = build_optimizer(config.optimizer)
    rng = np.random.default_rng(config.seed)
    n = labels.size
    records: list[TrainingRecord] = []

    start = time.perf_counter()
    for step in range(1, config.optimizer.steps + 1):
        if config.batch_size is None or config.batch_size >= n:
            idx = slice(None)
        else:
            idx = rng.choice(n, size=config.batch_size, replace=False)
        grads, _ = model.gradients(src_idx[idx], prev_idx[idx], labels[idx], head)
        optimizer.step(model.parameters, grads)
        if step % config.log_every == 0 or step == config.optimizer.steps:
            logits = model.net.forward(model._features(src_idx, prev_idx))
            weights = head.transform(logits)
            time_ms = (time.perf_counter() - start) * 1e3
            records.append(
                TrainingRecord(
                    step=step,
                    loss=float(reduce_mean(head.loss(logits, labels)).value),
                    accuracy=float(np.mean(np.argmax(logits, axis=-1) == labels)),
                    sparsity_mean=float(np.mean(weights.zero_fraction())),
                    wall_ms=time_ms,
                )
            )
    if records:
        logger.info(
            "sequence model trained",
            head=head.KIND,
            steps=config.optimizer.steps,
            loss=records[-1].loss,
            token_accuracy=records[-1].accuracy,
        )
    return records


# ---------------------------------------------------------------------------
# Scoring and decoding
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Hypothesis:
    tokens: tuple[int, ...]
    """Emitted tokens without the final EOS."""

    log_score: float
    """Sum of log renormalized step weights; ``-inf`` once a step scores zero."""

    raw_log_score: float
    """Sum of log raw step weights."""

    finished: bool

    @property
    def score(self) -> float:
        return math.exp(self.log_score) if self.log_score > NEG_INF else 0.0


@dataclasses.dataclass(frozen=True)
class SequenceScore:
    log_score: float
    raw_log_score: float

    @property
    def score(self) -> float:
        return math.exp(self.log_score) if self.log_score > NEG_INF else 0.0


def _log(x: float) -> float:
    return math.log(x) if x > 0 else NEG_INF


def score_sequence(
    model: SequenceModel, source: Sequence[int], tokens: Sequence[int], head: OutputHead
) -> SequenceScore:
    """Score ``tokens + [EOS]`` under the model; the empty sequence scores EOS at step 1."""
    gold = list(tokens) + [model.eos]
    logits = model.step_logits(source, [gold[:t] for t in range(len(gold))])
    weights = head.transform(logits).values
    log_score = raw = 0.0
    for t, token in enumerate(gold):
        total = float(weights[t].sum())
        w = float(weights[t, token])
        log_score += _log(w / total) if total > 0 else NEG_INF
        raw += _log(w)
    return SequenceScore(log_score=log_score, raw_log_score=raw)


def decode(
    model: SequenceModel,
    source: Sequence[int],
    head: OutputHead,
    beam: int = 5,
    max_len: int | None = None,
) -> Hypothesis:
    """Beam search over per-step weights of *head*; ``beam=1`` is greedy.

    Only positive-weight tokens are expanded (the top ``beam`` of them per
    hypothesis).  No length normalization is applied.
    """
    if beam < 1:
        raise ConfigError(f"beam width must be >= 1, got {beam}")
    max_len = 2 * len(source) + 2 if max_len is None else max_len

    beams = [Hypothesis((), 0.0, 0.0, False)]
    finished: list[Hypothesis] = []

    for length in range(max_len + 1):
        logits = model.step_logits(source, [h.tokens for h in beams])
        weights = head.transform(logits).values
        candidates: list[Hypothesis] = []
        for hyp, w, z in zip(beams, weights, logits):
            total = float(w.sum())
            if length == max_len:
                # at the cap the only continuation is EOS
                eos_w = float(w[model.eos])
                tokens = [model.eos]
                steps = [(_log(eos_w / total) if total > 0 else NEG_INF, _log(eos_w))]
            elif total <= 0.0:
                tokens = [int(np.argmax(z))]
                steps = [(NEG_INF, NEG_INF)]
            else:
                positive = np.flatnonzero(w > 0)
                tokens = positive[np.argsort(-w[positive], kind="stable")][:beam].tolist()
                steps = [(_log(w[t] / total), _log(w[t])) for t in tokens]
            for token, (step_log, step_raw) in zip(tokens, steps):
                done = token == model.eos
                candidates.append(
                    Hypothesis(
                        tokens=hyp.tokens if done else hyp.tokens + (int(token),),
                        log_score=hyp.log_score + step_log,
                        raw_log_score=hyp.raw_log_score + step_raw,
                        finished=done,
                    )
                )
        candidates.sort(key=lambda h: -h.log_score)
        beams = []
        for cand in candidates[:beam]:
            (finished if cand.finished else beams).append(cand)
        if not beams:
            break
        # scores never increase, so an active beam cannot overtake the best finished one
        if finished and max(h.log_score for h in finished) >= beams[0].log_score:
            break

    pool = finished or beams
    return max(pool, key=lambda h: h.log_score)
