# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Deterministic training loop for :class:`TinyNetwork`.

Given the same network seed, data, head and config, two runs produce the same
records except for ``wall_ms``.
"""

from __future__ import annotations

import dataclasses
import json
import time
from pathlib import Path
from typing import Iterable

import numpy as np

from arelu_sdk.common.errors import InputDomainError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.heads import OutputHead
from arelu_sdk.losses.types import reduce_mean
from arelu_sdk.nnet.datasets import ClassificationData
from arelu_sdk.nnet.network import TinyNetwork
from arelu_sdk.nnet.optim import OptimizerConfig, build_optimizer

__all__ = [
    "TrainConfig",
    "TrainingRecord",
    "EvalMetrics",
    "evaluate",
    "train",
    "write_jsonl",
    "read_jsonl",
]

logger = get_logger(__name__)


@dataclasses.dataclass(frozen=True)
class TrainConfig:
    optimizer: OptimizerConfig = dataclasses.field(default_factory=OptimizerConfig)

    batch_size: int | None = None
    """Mini-batch size; ``None`` trains full-batch."""

    log_every: int = 1
    seed: int = 0
    """Seed for mini-batch shuffling."""


@dataclasses.dataclass(frozen=True)
class TrainingRecord:
    step: int
    loss: float
    accuracy: float
    sparsity_mean: float
    wall_ms: float
    """Elapsed wall-clock milliseconds since the run started; excluded from determinism checks."""


@dataclasses.dataclass(frozen=True)
class EvalMetrics:
    loss: float
    accuracy: float
    sparsity_mean: float
    """Mean share of exactly-zero output weights."""

    max_weight_mean: float
    """Mean of the largest output weight per example."""


def evaluate(net: TinyNetwork, data: ClassificationData, head: OutputHead) -> EvalMetrics:
    logits = net.forward(data.x)
    weights = head.transform(logits)
    loss = reduce_mean(head.loss(logits, data.y))
    return EvalMetrics(
        loss=float(loss.value),
        accuracy=float(np.mean(np.argmax(logits, axis=-1) == data.y)),
        sparsity_mean=float(np.mean(weights.zero_fraction())),
        max_weight_mean=float(np.mean(weights.values.max(axis=-1))),
    )


def _batches(n: int, batch_size: int | None, rng: np.random.Generator) -> Iterable[np.ndarray]:
    if batch_size is None or batch_size >= n:
        while True:
            yield np.arange(n)
    while True:
        order = rng.permutation(n)
        for start in range(0, n - batch_size + 1, batch_size):
            yield order[start : start + batch_size]


def train(
    net: TinyNetwork,
    data: ClassificationData,
    head: OutputHead,
    config: TrainConfig | None = None,
) -> list[TrainingRecord]:
    """Train *net* in place and return one record per logging step.

    Raises:
        InputDomainError: empty dataset.
    """
    config = config or TrainConfig()
    if len(data) == 0:
        raise InputDomainError("training set is empty")

    optimizer = build_optimizer(config.optimizer)
    rng = np.random.default_rng(config.seed)
    batches = _batches(len(data), config.batch_size, rng)
    records: list[TrainingRecord] = []
    start = time.perf_counter()

    for step in range(1, config.optimizer.steps + 1):
        idx = next(batches)
        grads = net.backward(data.x[idx], data.y[idx], head)
        optimizer.step(net.weights, grads.weights)
        if step % config.log_every == 0 or step == config.optimizer.steps:
            metrics = evaluate(net, data, head)
            records.append(
                TrainingRecord(
                    step=step,
                    loss=metrics.loss,
                    accuracy=metrics.accuracy,
                    sparsity_mean=metrics.sparsity_mean,
                    wall_ms=(time.perf_counter() - start) * 1e3,
                )
            )

    if records:
        last = records[-1]
        logger.info(
            "training finished",
            head=head.KIND,
            steps=config.optimizer.steps,
            loss=last.loss,
            accuracy=last.accuracy,
            sparsity_mean=last.sparsity_mean,
        )
    return records


def write_jsonl(records: Iterable[TrainingRecord], path: str | Path) -> Path:
    """One JSON object per line, keys in ``TrainingRecord`` field order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(dataclasses.asdict(record)) + "\n")
    return path


def read_jsonl(path: str | Path) -> list[TrainingRecord]:
    with Path(path).open(encoding="utf-8") as fh:
        return [TrainingRecord(**json.loads(line)) for line in fh if line.strip()]
