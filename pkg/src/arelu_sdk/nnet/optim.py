# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import dataclasses
from abc import ABC, abstractmethod
from typing import Literal, Sequence

import numpy as np

from arelu_sdk.common.errors import ConfigError, ShapeError

__all__ = ["OptimizerConfig", "Optimizer", "SGD", "Adam", "build_optimizer", "optimizer_step"]


@dataclasses.dataclass(frozen=True)
class OptimizerConfig:
    kind: Literal["sgd", "adam"] = "adam"

    learning_rate: float = 1e-2
    """Step size eta; must be positive."""

    beta1: float = 0.9
    beta2: float = 0.998
    eps: float = 1e-8

    steps: int = 300
    """Number of optimizer steps a training run performs."""

    def __post_init__(self) -> None:
        if self.kind not in ("sgd", "adam"):
            raise ConfigError(f"Unknown optimizer: {self.kind!r}. Available: ['sgd', 'adam']")
        if not (np.isfinite(self.learning_rate) and self.learning_rate > 0):
            raise ConfigError(f"learning rate must be > 0, got {self.learning_rate!r}")
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {value!r}")
        if self.steps < 0:
            raise ConfigError(f"steps must be >= 0, got {self.steps!r}")


class Optimizer(ABC):
    """Updates a list of parameter arrays in place."""

    def __init__(self, config: OptimizerConfig):
        self.config = config
        self.t = 0

    @staticmethod
    def _check(params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        if len(params) != len(grads) or any(p.shape != g.shape for p, g in zip(params, grads)):
            raise ShapeError("gradient shapes do not match parameter shapes")

    def step(self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        self._check(params, grads)
        self.t += 1
        self._update(params, grads)

    @abstractmethod
    def _update(self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None: ...


class SGD(Optimizer):
    """``theta <- theta - eta * grad``."""

    def _update(self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        for p, g in zip(params, grads):
            p -= self.config.learning_rate * g


class Adam(Optimizer):
    """Adam with bias-corrected first and second moments."""

    def __init__(self, config: OptimizerConfig):
        super().__init__(config)
        self._m: list[np.ndarray] | None = None
        self._v: list[np.ndarray] | None = None

    def _update(self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        cfg = self.config
        if self._m is None or self._v is None:
            self._m = [np.zeros_like(p) for p in params]
            self._v = [np.zeros_like(p) for p in params]
        correction1 = 1.0 - cfg.beta1**self.t
        correction2 = 1.0 - cfg.beta2**self.t
        for p, g, m, v in zip(params, grads, self._m, self._v):
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * g * g
            p -= cfg.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + cfg.eps)


def build_optimizer(config: OptimizerConfig) -> Optimizer:
    return SGD(config) if config.kind == "sgd" else Adam(config)


def optimizer_step(net, grads: Sequence[np.ndarray], optimizer: Optimizer | OptimizerConfig):
    """Apply one update to ``net.weights`` and return the network.

    Passing a bare :class:`OptimizerConfig` uses a fresh optimizer, which is
    only meaningful for SGD or a first Adam step; keep an :class:`Optimizer`
    around across steps for Adam's moment state.
    """
    if isinstance(optimizer, OptimizerConfig):
        optimizer = build_optimizer(optimizer)
    optimizer.step(net.weights, grads)
    return net
