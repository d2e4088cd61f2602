# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Sparsemax: Euclidean projection of the logits onto the probability simplex."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from arelu_sdk.transforms.types import ThresholdResult, WeightVector, as_logits

__all__ = ["sparsemax"]


def sparsemax(z: npt.ArrayLike) -> ThresholdResult:
    """Project each row of *z* onto the simplex.

    The threshold is found from the descending sort: the support size ``k`` is
    the number of sorted entries with ``z_(j) > (cumsum_j - 1) / j`` and the
    threshold is ``(cumsum_k - 1) / k``.  This is alpha-entmax at alpha = 2.
    """
    x = as_logits(z)
    top = x.max(axis=-1, keepdims=True)
    shifted = x - top
    d = shifted.shape[-1]

    ordered = -np.sort(-shifted, axis=-1, kind="stable")
    cumsum = np.cumsum(ordered, axis=-1) - 1.0
    rho = np.arange(1, d + 1, dtype=shifted.dtype)
    support_size = np.count_nonzero(ordered - cumsum / rho > 0, axis=-1)[..., None]
    tau = np.take_along_axis(cumsum, support_size - 1, axis=-1) / support_size

    weights = np.maximum(shifted - tau, 0.0)
    threshold = (tau + top)[..., 0]
    return ThresholdResult(
        weights=WeightVector(values=weights, normalized=True),
        threshold=float(threshold) if threshold.ndim == 0 else threshold,
    )
