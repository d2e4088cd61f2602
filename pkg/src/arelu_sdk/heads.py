# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Output heads: a transform paired with its matched loss.

Networks, experiments and the CLI talk to an :class:`OutputHead` rather than
to the individual functions, so swapping softmax for alpha-ReLU is a one-word
change::

    head = OutputFactory().create_head("arelu", tau=0.3)
    weights = head.transform(logits)
    result = head.loss(logits, labels)
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import ClassVar

import numpy.typing as npt

from arelu_sdk.losses.fenchel_young import (
    arelu_loss,
    cross_entropy,
    entmax_loss,
    sparsemax_loss,
)
from arelu_sdk.losses.types import LossResult
from arelu_sdk.transforms.arelu import arelu
from arelu_sdk.transforms.entmax import entmax15_sorted, entmax_bisect
from arelu_sdk.transforms.softmax import softmax
from arelu_sdk.transforms.sparsemax import sparsemax
from arelu_sdk.transforms.types import (
    DEFAULT_ALPHA,
    TransformConfig,
    TransformKind,
    WeightVector,
)

__all__ = [
    "OutputHead",
    "SoftmaxHead",
    "SparsemaxHead",
    "EntmaxSortedHead",
    "EntmaxBisectHead",
    "AReluHead",
]


class OutputHead(ABC):
    """A transform and the loss whose logit gradient is ``transform(z) - e_y``."""

    KIND: ClassVar[str]
    """Registry key; one of :class:`TransformKind`."""

    NORMALIZED: ClassVar[bool] = True
    """Whether :meth:`transform` rows sum to one."""

    LOSS_NAME: ClassVar[str]

    def __init__(self, alpha: float = DEFAULT_ALPHA, tau: float = 0.0):
        self._config = TransformConfig(kind=self.KIND, alpha=alpha, tau=tau)

    @classmethod
    def from_config(cls, config: TransformConfig) -> OutputHead:
        return cls(alpha=config.alpha, tau=config.tau)

    @property
    def config(self) -> TransformConfig:
        return self._config

    @property
    def alpha(self) -> float:
        return self._config.alpha

    @property
    def tau(self) -> float:
        return self._config.tau

    @abstractmethod
    def transform(self, z: npt.ArrayLike) -> WeightVector:
        """Map logits ``(..., d)`` to nonnegative weights."""

    @abstractmethod
    def loss(self, z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult:
        """Per-row loss values and gradients w.r.t. the logits."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}(alpha={self.alpha}, tau={self.tau})"


class SoftmaxHead(OutputHead):
    KIND = TransformKind.SOFTMAX
    LOSS_NAME = "cross_entropy"

    def transform(self, z: npt.ArrayLike) -> WeightVector:
        return softmax(z)

    def loss(self, z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult:
        return cross_entropy(z, y)


class SparsemaxHead(OutputHead):
    KIND = TransformKind.SPARSEMAX
    LOSS_NAME = "sparsemax_loss"

    def transform(self, z: npt.ArrayLike) -> WeightVector:
        return sparsemax(z).weights

    def loss(self, z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult:
        return sparsemax_loss(z, y)


class EntmaxSortedHead(OutputHead):
    KIND = TransformKind.ENTMAX_SORTED_15
    LOSS_NAME = "entmax_loss"

    def transform(self, z: npt.ArrayLike) -> WeightVector:
        return entmax15_sorted(z).weights

    def loss(self, z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult:
        return entmax_loss(z, y, 1.5, solver=entmax15_sorted)


class EntmaxBisectHead(OutputHead):
    KIND = TransformKind.ENTMAX_BISECT
    LOSS_NAME = "entmax_loss"

    def transform(self, z: npt.ArrayLike) -> WeightVector:
        return entmax_bisect(z, self.alpha).weights

    def loss(self, z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult:
        return entmax_loss(z, y, self.alpha)


class AReluHead(OutputHead):
    KIND = TransformKind.ARELU
    NORMALIZED = False
    LOSS_NAME = "arelu_loss"

    def transform(self, z: npt.ArrayLike) -> WeightVector:
        return arelu(z, self._config)

    def loss(self, z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult:
        return arelu_loss(z, y, self._config)
