# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import dataclasses
from typing import Any

import numpy as np
import numpy.typing as npt

from arelu_sdk.common.errors import LabelIndexError, ShapeError

__all__ = ["LossResult", "check_labels", "one_hot", "reduce_mean"]


@dataclasses.dataclass(frozen=True)
class LossResult:
    """Loss value(s) and the gradient with respect to the logits.

    For a single logit vector ``value`` is a float; for a batch ``(..., d)`` it
    is an array of per-row values with the batch shape.
    """

    value: Any
    gradient: npt.NDArray[np.floating]


def check_labels(y: npt.ArrayLike, logits_shape: tuple[int, ...]) -> npt.NDArray[np.intp]:
    """Validate gold labels against logits of shape ``(..., d)``.

    Raises:
        ShapeError: label shape differs from the batch shape.
        LabelIndexError: a label falls outside ``[0, d)``.
    """
    labels = np.asarray(y)
    if labels.dtype.kind not in "iu":
        if labels.dtype.kind == "f" and np.all(labels == np.round(labels)):
            labels = labels.astype(np.intp)
        else:
            raise LabelIndexError(f"labels must be integers, got dtype {labels.dtype}")
    if labels.shape != tuple(logits_shape[:-1]):
        raise ShapeError(
            f"labels of shape {labels.shape} do not match logits of shape {logits_shape}"
        )
    d = logits_shape[-1]
    if labels.size and (labels.min() < 0 or labels.max() >= d):
        raise LabelIndexError(f"labels must lie in [0, {d}), got {labels.ravel().tolist()}")
    return labels.astype(np.intp)


def one_hot(labels: npt.NDArray[np.intp], d: int, dtype: Any = np.float64) -> np.ndarray:
    """``e_y`` rows for every label."""
    out = np.zeros(labels.shape + (d,), dtype=dtype)
    np.put_along_axis(out, labels[..., None], 1.0, axis=-1)
    return out


def scalar_or_array(value: np.ndarray) -> Any:
    return float(value) if np.ndim(value) == 0 else value


def reduce_mean(result: LossResult) -> LossResult:
    """Average a batched loss; the gradient is rescaled to match the mean."""
    values = np.asarray(result.value, dtype=np.float64)
    n = max(values.size, 1)
    return LossResult(value=float(values.mean()), gradient=result.gradient / n)
