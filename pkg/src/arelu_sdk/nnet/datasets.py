# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Desk-scale synthetic tasks.

* Gaussian-cluster classification: ``n_classes`` well separated clusters.
* Token copy: the target repeats the source and ends with EOS.  Optional
  substitution noise and empty targets imitate noisy parallel data.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from arelu_sdk.common.errors import ConfigError

__all__ = [
    "EOS",
    "ClassificationData",
    "GaussianTaskConfig",
    "gaussian_clusters",
    "CopyExample",
    "CopyTaskConfig",
    "token_copy",
]

EOS = 0
"""End-of-sequence token id in every copy-task vocabulary."""


@dataclasses.dataclass(frozen=True)
class ClassificationData:
    x: np.ndarray
    y: np.ndarray

    def __len__(self) -> int:
        return int(self.y.shape[0])

    @property
    def num_classes(self) -> int:
        return int(self.y.max()) + 1 if len(self) else 0


@dataclasses.dataclass(frozen=True)
class GaussianTaskConfig:
    n_classes: int = 10
    per_class: int = 40
    dim: int = 16
    center_scale: float = 3.0
    """Standard deviation of the cluster centers."""

    noise: float = 1.0
    """Standard deviation of points around their center."""

    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_classes < 2 or self.per_class < 1 or self.dim < 1:
            raise ConfigError(f"invalid gaussian task config: {self}")


def gaussian_clusters(config: GaussianTaskConfig) -> ClassificationData:
    """Points drawn around one random center per class, shuffled with the same seed."""
    rng = np.random.default_rng(config.seed)
    centers = rng.standard_normal((config.n_classes, config.dim)) * config.center_scale
    y = np.repeat(np.arange(config.n_classes), config.per_class)
    x = centers[y] + rng.standard_normal((y.size, config.dim)) * config.noise
    order = rng.permutation(y.size)
    return ClassificationData(x=x[order], y=y[order])


@dataclasses.dataclass(frozen=True)
class CopyExample:
    source: tuple[int, ...]
    target: tuple[int, ...]
    """Gold output without the trailing EOS."""


@dataclasses.dataclass(frozen=True)
class CopyTaskConfig:
    vocab: int = 50
    """Vocabulary size including EOS."""

    min_len: int = 3
    max_len: int = 12
    n_train: int = 600
    n_dev: int = 200

    noise: float = 0.0
    """Probability that a target token is replaced by a random non-EOS token."""

    empty_rate: float = 0.0
    """Share of training pairs whose target is empty."""

    seed: int = 0

    def __post_init__(self) -> None:
        if self.vocab < 3:
            raise ConfigError(f"vocab must be >= 3, got {self.vocab}")
        if not 1 <= self.min_len <= self.max_len:
            raise ConfigError(f"need 1 <= min_len <= max_len, got {self.min_len}, {self.max_len}")
        if not (0.0 <= self.noise < 1.0 and 0.0 <= self.empty_rate < 1.0):
            raise ConfigError("noise and empty_rate must lie in [0, 1)")


def _sample_source(rng: np.random.Generator, config: CopyTaskConfig) -> tuple[int, ...]:
    length = int(rng.integers(config.min_len, config.max_len + 1))
    return tuple(int(t) for t in rng.integers(1, config.vocab, size=length))


def token_copy(config: CopyTaskConfig) -> tuple[list[CopyExample], list[CopyExample]]:
    """Return ``(train, dev)``; noise and empty targets apply to training pairs only."""
    rng = np.random.default_rng(config.seed)
    train: list[CopyExample] = []
    for _ in range(config.n_train):
        source = _sample_source(rng, config)
        if rng.random() < config.empty_rate:
            train.append(CopyExample(source, ()))
            continue
        target = list(source)
        for i in range(len(target)):
            if rng.random() < config.noise:
                target[i] = int(rng.integers(1, config.vocab))
        train.append(CopyExample(source, tuple(target)))
    dev = []
    for _ in range(config.n_dev):
        source = _sample_source(rng, config)
        dev.append(CopyExample(source, source))
    return train, dev
