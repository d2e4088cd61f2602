# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from arelu_sdk.transforms.types import WeightVector, as_logits

__all__ = ["softmax", "log_sum_exp"]


def softmax(z: npt.ArrayLike) -> WeightVector:
    """Dense exponential normalization over the last axis (max-subtracted)."""
    x = as_logits(z)
    shifted = x - x.max(axis=-1, keepdims=True)
    np.exp(shifted, out=shifted)
    shifted /= shifted.sum(axis=-1, keepdims=True)
    return WeightVector(values=shifted, normalized=True)


def log_sum_exp(z: npt.ArrayLike) -> npt.NDArray[np.floating]:
    """Stable ``log sum_j exp(z_j)`` over the last axis."""
    x = as_logits(z)
    m = x.max(axis=-1, keepdims=True)
    out = np.log(np.exp(x - m).sum(axis=-1, keepdims=True)) + m
    return out[..., 0]
