# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Feedforward network in the neural-tangent parameterization.

    h^(0) = x
    z^(k) = W^(k-1) h^(k-1) / sqrt(n_(k-1))
    h^(k) = act(z^(k)),   k = 1 .. L-1
    z     = z^(L)

Weights are i.i.d. standard normal at initialization; the ``1/sqrt(n)``
factor lives in the forward pass, not in the initial scale.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Protocol

import numpy as np
import numpy.typing as npt

from arelu_sdk.common.errors import ConfigError, ShapeError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.losses.types import LossResult, reduce_mean

__all__ = ["ACTIVATIONS", "Activation", "ForwardCache", "Gradients", "HeadLike", "TinyNetwork"]

logger = get_logger(__name__)


@dataclasses.dataclass(frozen=True)
class Activation:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    """Derivative evaluated at the pre-activation; 0 at the ReLU kink."""

    kinks: tuple[float, ...] = ()
    """Pre-activation values where the derivative jumps."""


ACTIVATIONS: dict[str, Activation] = {
    "relu": Activation(
        "relu",
        lambda z: np.maximum(z, 0.0),
        lambda z: (z > 0).astype(z.dtype),
        kinks=(0.0,),
    ),
    "identity": Activation("identity", lambda z: z, np.ones_like),
    "tanh": Activation("tanh", np.tanh, lambda z: 1.0 - np.tanh(z) ** 2),
}


@dataclasses.dataclass
class ForwardCache:
    """Per-layer inputs ``h^(k)`` and pre-activations ``z^(k+1)`` from one forward pass."""

    inputs: list[np.ndarray]
    preactivations: list[np.ndarray]

    @property
    def logits(self) -> np.ndarray:
        return self.preactivations[-1]


@dataclasses.dataclass
class Gradients:
    weights: list[np.ndarray]
    loss: float
    input: np.ndarray | None = None
    """Gradient w.r.t. the network input, when requested."""


class HeadLike(Protocol):
    """Anything with a ``loss(z, y) -> LossResult`` method (see ``arelu_sdk.heads``)."""

    def loss(self, z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult: ...


class TinyNetwork:
    """Dense network with ``len(widths) - 1`` weight matrices.

    Args:
        widths: ``(n_0, n_1, ..., n_L)``; ``n_L`` is the number of outputs ``d``.
        activation: hidden nonlinearity name, see :data:`ACTIVATIONS`.
        seed: seed for the standard-normal initialization.
        weights: explicit weight matrices; skips random initialization.
    """

    def __init__(
        self,
        widths: tuple[int, ...] | list[int],
        activation: str = "relu",
        seed: int = 0,
        weights: list[np.ndarray] | None = None,
    ):
        widths = tuple(int(n) for n in widths)
        if len(widths) < 2 or min(widths) < 1:
            raise ConfigError(f"need at least input and output widths >= 1, got {widths}")
        if activation not in ACTIVATIONS:
            raise ConfigError(
                f"Unknown activation: {activation!r}. Available: {list(ACTIVATIONS)}"
            )
        self.widths = widths
        self.activation = ACTIVATIONS[activation]
        self.seed = seed

        if weights is None:
            rng = np.random.default_rng(seed)
            weights = [
                rng.standard_normal((n_out, n_in))
                for n_in, n_out in zip(widths[:-1], widths[1:])
            ]
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        if len(self.weights) != len(widths) - 1:
            raise ShapeError(f"expected {len(widths) - 1} weight matrices, got {len(self.weights)}")
        for k, w in enumerate(self.weights):
            expected = (widths[k + 1], widths[k])
            if w.shape != expected:
                raise ShapeError(f"W^({k}) has shape {w.shape}, expected {expected}")
        logger.debug(
            "network initialized",
            widths=widths,
            activation=activation,
            parameters=self.num_parameters,
        )

    # ------------------------------------------------------------------
    # Introspection
    # ------------------------------------------------------------------

    @property
    def depth(self) -> int:
        """Number of weight matrices ``L``."""
        return len(self.weights)

    @property
    def input_dim(self) -> int:
        return self.widths[0]

    @property
    def output_dim(self) -> int:
        return self.widths[-1]

    @property
    def num_parameters(self) -> int:
        return sum(w.size for w in self.weights)

    def copy(self) -> TinyNetwork:
        return TinyNetwork(
            self.widths,
            activation=self.activation.name,
            seed=self.seed,
            weights=[w.copy() for w in self.weights],
        )

    def flat_parameters(self) -> np.ndarray:
        return np.concatenate([w.ravel() for w in self.weights])

    def set_flat_parameters(self, theta: np.ndarray) -> None:
        offset = 0
        for w in self.weights:
            w[...] = theta[offset : offset + w.size].reshape(w.shape)
            offset += w.size

    # ------------------------------------------------------------------
    # Forward / backward
    # ------------------------------------------------------------------

    def _check_input(self, x: npt.ArrayLike) -> np.ndarray:
        arr = np.asarray(x, dtype=np.float64)
        if arr.shape[-1:] != (self.input_dim,):
            raise ShapeError(
                f"input of shape {arr.shape} does not match input width {self.input_dim}"
            )
        return arr

    def forward_cache(self, x: npt.ArrayLike) -> ForwardCache:
        h = self._check_input(x)
        inputs: list[np.ndarray] = []
        preacts: list[np.ndarray] = []
        for k, w in enumerate(self.weights):
            inputs.append(h)
            z = h @ w.T / np.sqrt(w.shape[1])
            preacts.append(z)
            if k < self.depth - 1:
                h = self.activation.fn(z)
        return ForwardCache(inputs=inputs, preactivations=preacts)

    def forward(self, x: npt.ArrayLike) -> np.ndarray:
        """Final-layer logits for one input ``(n_0,)`` or a batch ``(B, n_0)``."""
        return self.forward_cache(x).logits

    def backprop(
        self, cache: ForwardCache, seed: np.ndarray, want_input: bool = False
    ) -> tuple[list[np.ndarray], np.ndarray | None]:
        """Reverse-mode pass from a logit cotangent *seed* shaped like the logits."""
        delta = np.asarray(seed, dtype=np.float64)
        grads: list[np.ndarray] = [np.empty(0)] * self.depth
        input_grad = None
        for k in range(self.depth - 1, -1, -1):
            w = self.weights[k]
            scale = 1.0 / np.sqrt(w.shape[1])
            h = cache.inputs[k]
            if delta.ndim == 1:
                grads[k] = np.outer(delta, h) * scale
            else:
                grads[k] = delta.reshape(-1, w.shape[0]).T @ h.reshape(-1, w.shape[1]) * scale
            if k > 0 or want_input:
                upstream = delta @ w * scale
                if k > 0:
                    delta = upstream * self.activation.derivative(cache.preactivations[k - 1])
                else:
                    input_grad = upstream
        return grads, input_grad

    def backward(
        self,
        x: npt.ArrayLike,
        y: npt.ArrayLike,
        head: HeadLike,
        want_input: bool = False,
    ) -> Gradients:
        """Exact gradients of the mean loss over the batch w.r.t. every ``W^(k)``.

        The cotangent fed into the last layer is the closed-form
        ``sigma(z) - e_y`` from the head's loss, divided by the batch size.
        """
        cache = self.forward_cache(x)
        result = head.loss(cache.logits, y)
        if cache.logits.ndim > 1:
            result = reduce_mean(result)
        grads, input_grad = self.backprop(cache, result.gradient, want_input=want_input)
        return Gradients(weights=grads, loss=float(result.value), input=input_grad)

    def jacobian(self, x: npt.ArrayLike) -> np.ndarray:
        """Per-output parameter Jacobian ``dz/dtheta`` of shape ``(d, num_parameters)``.

        Column order matches :meth:`flat_parameters`.
        """
        arr = self._check_input(x)
        if arr.ndim != 1:
            raise ShapeError("jacobian expects a single input vector")
        cache = self.forward_cache(arr)
        d = self.output_dim
        blocks: list[np.ndarray] = [np.empty(0)] * self.depth
        delta = np.eye(d)
        for k in range(self.depth - 1, -1, -1):
            w = self.weights[k]
            scale = 1.0 / np.sqrt(w.shape[1])
            h = cache.inputs[k]
            blocks[k] = (delta[:, :, None] * h[None, None, :] * scale).reshape(d, -1)
            if k > 0:
                delta = (delta @ w * scale) * self.activation.derivative(
                    cache.preactivations[k - 1]
                )
        return np.concatenate(blocks, axis=1)

    def layer_factors(self, x: npt.ArrayLike) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """Backpropagated output deltas ``(d, n_(k+1))`` and scaled layer inputs per layer.

        ``dz_i/dW^(k) = outer(deltas[k][i], inputs[k])``; kernels are built from
        these factors without materializing the full Jacobian.
        """
        arr = self._check_input(x)
        if arr.ndim != 1:
            raise ShapeError("layer_factors expects a single input vector")
        cache = self.forward_cache(arr)
        deltas: list[np.ndarray] = [np.empty(0)] * self.depth
        inputs: list[np.ndarray] = [np.empty(0)] * self.depth
        delta = np.eye(self.output_dim)
        for k in range(self.depth - 1, -1, -1):
            w = self.weights[k]
            scale = 1.0 / np.sqrt(w.shape[1])
            deltas[k] = delta
            inputs[k] = cache.inputs[k] * scale
            if k > 0:
                delta = (delta @ w * scale) * self.activation.derivative(
                    cache.preactivations[k - 1]
                )
        return deltas, inputs
