# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Losses matched to each transform.

Every loss here has the logit gradient ``sigma(z) - e_y`` where ``sigma`` is
the paired transform, and is returned in closed form rather than by numerical
differentiation.  All functions accept a single vector ``(d,)`` with an int
label, or a batch ``(..., d)`` with labels of the batch shape.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
import numpy.typing as npt

from arelu_sdk.losses.tsallis import simplex_tsallis_entropy, tsallis_entropy
from arelu_sdk.losses.types import LossResult, check_labels, one_hot, scalar_or_array
from arelu_sdk.transforms.arelu import arelu
from arelu_sdk.transforms.entmax import entmax_bisect
from arelu_sdk.transforms.softmax import log_sum_exp, softmax
from arelu_sdk.transforms.sparsemax import sparsemax
from arelu_sdk.transforms.types import (
    DEFAULT_ALPHA,
    ThresholdResult,
    TransformConfig,
    as_logits,
    check_alpha,
)

__all__ = ["cross_entropy", "entmax_loss", "sparsemax_loss", "arelu_loss"]

EntmaxSolver = Callable[[np.ndarray], ThresholdResult]


def _pick(values: np.ndarray, labels: np.ndarray) -> np.ndarray:
    return np.take_along_axis(values, labels[..., None], axis=-1)[..., 0]


def cross_entropy(z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult:
    """``log sum_j exp(z_j) - z_y`` with gradient ``softmax(z) - e_y``."""
    x = as_logits(z)
    labels = check_labels(y, x.shape)
    value = np.maximum(log_sum_exp(x) - _pick(x, labels), 0.0)
    gradient = softmax(x).values - one_hot(labels, x.shape[-1], x.dtype)
    return LossResult(value=scalar_or_array(value), gradient=gradient)


def entmax_loss(
    z: npt.ArrayLike,
    y: npt.ArrayLike,
    alpha: float = DEFAULT_ALPHA,
    *,
    solver: EntmaxSolver | None = None,
    tau_shift: float = 0.0,
) -> LossResult:
    """``(p* - e_y)^T z + H_alpha[p*]`` with ``p* = entmax(z, alpha)``.

    *solver* replaces the default bisection solver (the sorted 1.5 solver and
    sparsemax plug in here).  *tau_shift* subtracts ``tau/(alpha-1)`` from the
    logits inside the linear term as the alpha-ReLU loss does; because ``p*``
    sums to one the value does not change.
    """
    alpha = check_alpha(alpha)
    x = as_logits(z)
    labels = check_labels(y, x.shape)
    result = solver(x) if solver is not None else entmax_bisect(x, alpha)
    p = result.weights.values
    target = one_hot(labels, x.shape[-1], x.dtype)
    shifted = x - tau_shift / (alpha - 1.0)

    value = np.sum((p - target) * shifted, axis=-1) + tsallis_entropy(p, alpha)
    return LossResult(value=scalar_or_array(np.maximum(value, 0.0)), gradient=p - target)


def sparsemax_loss(z: npt.ArrayLike, y: npt.ArrayLike) -> LossResult:
    """Entmax loss at alpha = 2 using the exact simplex projection."""
    return entmax_loss(z, y, 2.0, solver=sparsemax)


def arelu_loss(
    z: npt.ArrayLike,
    y: npt.ArrayLike,
    cfg: TransformConfig | None = None,
    *,
    alpha: float = DEFAULT_ALPHA,
    tau: float = 0.0,
) -> LossResult:
    """alpha-ReLU loss with gradient ``arelu(z) - e_y``.

    ``(p - e_y)^T (z - tau/(alpha-1) 1) + (1 - sum_j p_j**alpha) / (alpha(alpha-1))``
    with ``p = arelu(z)``.  The entropy term is taken in its simplex form, the
    one whose gradient ``-p**(alpha-1)/(alpha-1)`` cancels the Jacobian term of
    the linear part; with it the loss is convex, nonnegative, and zero exactly
    when ``arelu(z) = e_y``.
    """
    if cfg is not None:
        alpha, tau = cfg.alpha, cfg.tau
    alpha = check_alpha(alpha)
    x = as_logits(z)
    labels = check_labels(y, x.shape)
    p = arelu(x, alpha=alpha, tau=tau).values
    target = one_hot(labels, x.shape[-1], x.dtype)
    shifted = x - tau / (alpha - 1.0)

    value = np.sum((p - target) * shifted, axis=-1) + simplex_tsallis_entropy(p, alpha)
    return LossResult(value=scalar_or_array(np.maximum(value, 0.0)), gradient=p - target)
