# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""How often a model scores the empty output above its own beam hypothesis.

Dense softmax outputs leave some mass on EOS at the first step, so after
training on data with a few empty targets the empty string can outscore a
long beam hypothesis.  A sparse transform that gives EOS exactly zero weight
at step 1 can never prefer it.
"""

from __future__ import annotations

import csv
import dataclasses
from pathlib import Path
from typing import Iterable, Sequence

from arelu_sdk.calibration import calibrate_tau
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.factory import OutputFactory
from arelu_sdk.heads import OutputHead
from arelu_sdk.nnet.datasets import CopyExample, CopyTaskConfig, token_copy
from arelu_sdk.nnet.optim import OptimizerConfig
from arelu_sdk.nnet.sequence import (
    SequenceModel,
    SequenceModelConfig,
    decode,
    score_sequence,
    train_sequence_model,
)
from arelu_sdk.nnet.training import TrainConfig
from arelu_sdk.transforms.types import TransformKind, normalize_kind

__all__ = [
    "EmptySequenceResult",
    "EmptySequenceConfig",
    "empty_sequence_rate",
    "run_empty_sequence",
    "write_empty_sequence_csv",
    "EMPTY_SEQUENCE_CSV_HEADER",
]

logger = get_logger(__name__)

EMPTY_SEQUENCE_CSV_HEADER = ("transform", "seed", "examples", "empty_preferred", "rate_percent")


@dataclasses.dataclass(frozen=True)
class EmptySequenceResult:
    transform: str
    seed: int
    examples: int
    empty_preferred: int

    @property
    def rate_percent(self) -> float:
        return 100.0 * self.empty_preferred / self.examples if self.examples else 0.0


def empty_sequence_rate(
    model: SequenceModel,
    dev: Sequence[CopyExample],
    head: OutputHead,
    beam: int = 5,
    seed: int = 0,
) -> EmptySequenceResult:
    """Count dev sources whose normalized empty-output score beats the beam hypothesis.

    The comparison is strict: a beam that itself returns the empty output
    does not count.
    """
    preferred = 0
    for ex in dev:
        best = decode(model, ex.source, head, beam=beam)
        empty = score_sequence(model, ex.source, (), head)
        if empty.log_score > best.log_score:
            preferred += 1
    result = EmptySequenceResult(
        transform=head.KIND, seed=seed, examples=len(dev), empty_preferred=preferred
    )
    logger.info(
        "empty sequence rate",
        transform=result.transform,
        seed=seed,
        examples=result.examples,
        rate_percent=result.rate_percent,
    )
    return result


@dataclasses.dataclass(frozen=True)
class EmptySequenceConfig:
    task: CopyTaskConfig = dataclasses.field(
        default_factory=lambda: CopyTaskConfig(noise=0.05, empty_rate=0.1)
    )
    """Training pairs carry substitution noise and a share of empty targets."""

    model: SequenceModelConfig = dataclasses.field(default_factory=SequenceModelConfig)
    train: TrainConfig = dataclasses.field(
        default_factory=lambda: TrainConfig(
            optimizer=OptimizerConfig(learning_rate=1e-2, steps=300), log_every=50
        )
    )
    beam: int = 5
    alpha: float = 1.5
    calibrate: bool = True
    """Calibrate alpha-ReLU's threshold on the untrained model; otherwise ``tau = 0``."""


def run_empty_sequence(
    kinds: Sequence[str] = (
        TransformKind.SOFTMAX,
        TransformKind.ENTMAX_SORTED_15,
        TransformKind.ARELU,
    ),
    seeds: Sequence[int] = (0,),
    config: EmptySequenceConfig | None = None,
) -> list[EmptySequenceResult]:
    """Train one sequence model per (kind, seed) and measure its empty-preferred rate.

    Data and initial weights depend on the seed only, so every kind sees the
    same task and starting point.
    """
    config = config or EmptySequenceConfig()
    factory = OutputFactory()
    results = []
    for seed in seeds:
        train_pairs, dev = token_copy(dataclasses.replace(config.task, seed=seed))
        for kind in kinds:
            model_cfg = dataclasses.replace(config.model, vocab=config.task.vocab, seed=seed)
            model = SequenceModel(model_cfg)
            tau = 0.0
            if config.calibrate and normalize_kind(kind) == TransformKind.ARELU:
                tau = calibrate_tau(model.teacher_forced_logits(train_pairs), config.alpha)
            head = factory.create_head(kind, alpha=config.alpha, tau=tau)
            train_config = dataclasses.replace(config.train, seed=seed)
            train_sequence_model(model, train_pairs, head, train_config)
            results.append(empty_sequence_rate(model, dev, head, beam=config.beam, seed=seed))
    return results


def write_empty_sequence_csv(results: Iterable[EmptySequenceResult], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(EMPTY_SEQUENCE_CSV_HEADER)
        for r in results:
            writer.writerow(
                [r.transform, r.seed, r.examples, r.empty_preferred, repr(r.rate_percent)]
            )
    return path
