# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Losses matched to the transforms, each with closed-form gradient ``sigma(z) - e_y``."""

from arelu_sdk.losses.fenchel_young import (
    arelu_loss,
    cross_entropy,
    entmax_loss,
    sparsemax_loss,
)
from arelu_sdk.losses.tsallis import (
    simplex_tsallis_entropy,
    simplex_tsallis_entropy_grad,
    tsallis_entropy,
    tsallis_entropy_grad,
)
from arelu_sdk.losses.types import LossResult, check_labels, one_hot, reduce_mean

__all__ = [
    "LossResult",
    "arelu_loss",
    "check_labels",
    "cross_entropy",
    "entmax_loss",
    "one_hot",
    "reduce_mean",
    "simplex_tsallis_entropy",
    "simplex_tsallis_entropy_grad",
    "sparsemax_loss",
    "tsallis_entropy",
    "tsallis_entropy_grad",
]
