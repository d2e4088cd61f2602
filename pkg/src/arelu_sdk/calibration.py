# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Threshold selection for alpha-ReLU.

Run one batch of logits from an untrained network through the exact entmax
threshold solver and average the per-row thresholds.  alpha-ReLU trained with
that constant starts out close to a probability distribution.
"""

from __future__ import annotations

import dataclasses
import math
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from arelu_sdk.common.errors import InputDomainError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.transforms.arelu import arelu
from arelu_sdk.transforms.entmax import entmax_bisect
from arelu_sdk.transforms.types import DEFAULT_ALPHA, as_logits, check_alpha

if TYPE_CHECKING:
    from arelu_sdk.nnet.network import TinyNetwork

__all__ = [
    "CalibrationReport",
    "calibrate_tau",
    "calibrate_from_network",
    "calibration_report",
]

logger = get_logger(__name__)


@dataclasses.dataclass(frozen=True)
class CalibrationReport:
    tau: float
    alpha: float
    rows: int
    mean_mass: float
    """Mean row sum of alpha-ReLU weights at the calibrated threshold."""

    min_mass: float
    max_mass: float


def _rows(batch: npt.ArrayLike | list) -> np.ndarray:
    if isinstance(batch, (list, tuple)) and len(batch) == 0:
        raise InputDomainError("calibration batch is empty")
    x = as_logits(batch)
    if x.ndim == 1:
        return x[None, :]
    # every token position of a sequence batch counts as one row
    return x.reshape(-1, x.shape[-1])


def calibrate_tau(batch: npt.ArrayLike, alpha: float = DEFAULT_ALPHA) -> float:
    """Mean entmax threshold over the rows of *batch*.

    Accepts a single vector, a ``(rows, d)`` batch or a ``(..., d)`` sequence
    batch.  The mean is exactly rounded, so it does not depend on row order.

    Raises:
        InputDomainError: empty batch or non-finite logits.
        ConfigError: ``alpha <= 1``.
    """
    alpha = check_alpha(alpha)
    rows = _rows(batch)
    thresholds = np.atleast_1d(entmax_bisect(rows, alpha).threshold)
    tau = math.fsum(thresholds.tolist()) / len(thresholds)
    logger.debug("calibrated tau", tau=tau, alpha=alpha, rows=len(thresholds))
    return tau


def calibration_report(batch: npt.ArrayLike, alpha: float = DEFAULT_ALPHA) -> CalibrationReport:
    """Calibrate, then report how close alpha-ReLU rows are to summing to one."""
    rows = _rows(batch)
    tau = calibrate_tau(rows, alpha)
    mass = arelu(rows, alpha=alpha, tau=tau).values.sum(axis=-1)
    return CalibrationReport(
        tau=tau,
        alpha=float(alpha),
        rows=int(rows.shape[0]),
        mean_mass=float(mass.mean()),
        min_mass=float(mass.min()),
        max_mass=float(mass.max()),
    )


def calibrate_from_network(
    net: TinyNetwork, x_batch: npt.ArrayLike, alpha: float = DEFAULT_ALPHA
) -> CalibrationReport:
    """Forward one batch through an (untrained) network and calibrate on its logits."""
    logits = net.forward(x_batch)
    report = calibration_report(logits, alpha)
    logger.info(
        "calibrated tau from network",
        tau=report.tau,
        alpha=report.alpha,
        rows=report.rows,
        mean_mass=report.mean_mass,
    )
    return report
