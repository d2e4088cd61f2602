# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Pure, stateless logit-to-weight transforms."""

from arelu_sdk.transforms.arelu import arelu, arelu_jacobian_diag
from arelu_sdk.transforms.entmax import entmax15_sorted, entmax_bisect
from arelu_sdk.transforms.softmax import log_sum_exp, softmax
from arelu_sdk.transforms.sparsemax import sparsemax
from arelu_sdk.transforms.types import (
    DEFAULT_ALPHA,
    ThresholdResult,
    TransformConfig,
    TransformKind,
    WeightVector,
    as_logits,
    normalize_kind,
)

__all__ = [
    "DEFAULT_ALPHA",
    "ThresholdResult",
    "TransformConfig",
    "TransformKind",
    "WeightVector",
    "arelu",
    "arelu_jacobian_diag",
    "as_logits",
    "entmax15_sorted",
    "entmax_bisect",
    "log_sum_exp",
    "normalize_kind",
    "softmax",
    "sparsemax",
]
