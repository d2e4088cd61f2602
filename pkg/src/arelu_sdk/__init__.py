# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Sparse output transformations with matched losses.

alpha-ReLU, softmax, sparsemax and alpha-entmax share one interface through
:class:`OutputFactory`; the ``nnet`` and ``experiments`` sub-packages hold
the desk-scale models and reproductions built on top of them.
"""

from arelu_sdk.calibration import (
    CalibrationReport,
    calibrate_from_network,
    calibrate_tau,
    calibration_report,
)
from arelu_sdk.common.errors import (
    AReluError,
    ConfigError,
    InputDomainError,
    LabelIndexError,
    ShapeError,
)
from arelu_sdk.factory import OutputFactory
from arelu_sdk.heads import (
    AReluHead,
    EntmaxBisectHead,
    EntmaxSortedHead,
    OutputHead,
    SoftmaxHead,
    SparsemaxHead,
)
from arelu_sdk.losses import (
    LossResult,
    arelu_loss,
    cross_entropy,
    entmax_loss,
    reduce_mean,
    sparsemax_loss,
    tsallis_entropy,
)
from arelu_sdk.transforms import (
    DEFAULT_ALPHA,
    ThresholdResult,
    TransformConfig,
    TransformKind,
    WeightVector,
    arelu,
    entmax15_sorted,
    entmax_bisect,
    softmax,
    sparsemax,
)

__version__ = "0.1.0"

__all__ = [
    "AReluError",
    "AReluHead",
    "CalibrationReport",
    "ConfigError",
    "DEFAULT_ALPHA",
    "EntmaxBisectHead",
    "EntmaxSortedHead",
    "InputDomainError",
    "LabelIndexError",
    "LossResult",
    "OutputFactory",
    "OutputHead",
    "ShapeError",
    "SoftmaxHead",
    "SparsemaxHead",
    "ThresholdResult",
    "TransformConfig",
    "TransformKind",
    "WeightVector",
    "__version__",
    "arelu",
    "arelu_loss",
    "calibrate_from_network",
    "calibrate_tau",
    "calibration_report",
    "cross_entropy",
    "entmax15_sorted",
    "entmax_bisect",
    "entmax_loss",
    "reduce_mean",
    "softmax",
    "sparsemax",
    "sparsemax_loss",
    "tsallis_entropy",
]
