# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Tsallis alpha-entropy and its gradient.

``H_alpha[p] = 1/(alpha(alpha-1)) * sum_j (p_j - p_j**alpha)``

On the simplex this equals ``(1 - sum_j p_j**alpha) / (alpha(alpha-1))``; the
two forms differ by ``(sum_j p_j - 1) / (alpha(alpha-1))`` off the simplex.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from arelu_sdk.common.errors import ConfigError, InputDomainError
from arelu_sdk.losses.types import scalar_or_array
from arelu_sdk.transforms.types import positive_power

__all__ = [
    "tsallis_entropy",
    "tsallis_entropy_grad",
    "simplex_tsallis_entropy",
    "simplex_tsallis_entropy_grad",
]


def _check(p: npt.ArrayLike, alpha: float) -> tuple[np.ndarray, float]:
    alpha = float(alpha)
    if alpha == 1.0:
        raise ConfigError("Tsallis entropy needs alpha != 1 (Shannon limit not supported)")
    if not np.isfinite(alpha) or alpha <= 0.0:
        raise ConfigError(f"alpha must be a finite positive number, got {alpha!r}")
    arr = np.asarray(p, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InputDomainError("weights contain NaN or Inf")
    if np.any(arr < 0):
        raise InputDomainError("Tsallis entropy is defined for nonnegative weights only")
    return arr, alpha


def tsallis_entropy(p: npt.ArrayLike, alpha: float):
    """``sum_j (p_j - p_j**alpha) / (alpha(alpha-1))`` over the last axis."""
    arr, alpha = _check(p, alpha)
    total = np.sum(arr - positive_power(arr, alpha), axis=-1)
    return scalar_or_array(total / (alpha * (alpha - 1.0)))


def tsallis_entropy_grad(p: npt.ArrayLike, alpha: float) -> np.ndarray:
    """``(1 - alpha p**(alpha-1)) / (alpha(alpha-1))`` component-wise."""
    arr, alpha = _check(p, alpha)
    return (1.0 - alpha * positive_power(arr, alpha - 1.0)) / (alpha * (alpha - 1.0))


def simplex_tsallis_entropy(p: npt.ArrayLike, alpha: float):
    """``(1 - sum_j p_j**alpha) / (alpha(alpha-1))``.

    Equals :func:`tsallis_entropy` on the simplex.
    """
    arr, alpha = _check(p, alpha)
    total = 1.0 - np.sum(positive_power(arr, alpha), axis=-1)
    return scalar_or_array(total / (alpha * (alpha - 1.0)))


def simplex_tsallis_entropy_grad(p: npt.ArrayLike, alpha: float) -> np.ndarray:
    """``-p**(alpha-1) / (alpha-1)``, the gradient used in the chain-rule identity."""
    arr, alpha = _check(p, alpha)
    return -positive_power(arr, alpha - 1.0) / (alpha - 1.0)
