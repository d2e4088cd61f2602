# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Exact alpha-entmax.

``entmax_i(z) = [(alpha-1) z_i - tau(z)]_+ ** (1/(alpha-1))`` where ``tau(z)``
is the unique threshold making the weights sum to one.  Two solvers:

* :func:`entmax_bisect`: any ``alpha > 1``; bisection on the threshold.
* :func:`entmax15_sorted`: ``alpha = 1.5`` only; closed form from a
  descending sort and running moments.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.transforms.types import (
    DEFAULT_ALPHA,
    ThresholdResult,
    WeightVector,
    as_logits,
    check_alpha,
    positive_power,
)

__all__ = ["entmax_bisect", "entmax15_sorted", "BISECT_TOL", "BISECT_MAX_ITER"]

logger = get_logger(__name__)

BISECT_TOL = 1e-12
"""Stop once ``|sum(weights) - 1|`` is below this for every row."""

BISECT_MAX_ITER = 100


def _pack(weights: np.ndarray, threshold: np.ndarray) -> ThresholdResult:
    threshold = threshold[..., 0]
    return ThresholdResult(
        weights=WeightVector(values=weights, normalized=True),
        threshold=float(threshold) if threshold.ndim == 0 else threshold,
    )


def entmax_bisect(z: npt.ArrayLike, alpha: float = DEFAULT_ALPHA) -> ThresholdResult:
    """alpha-entmax over the last axis, threshold found by bisection.

    The threshold lies in ``[max_j((alpha-1) z_j) - 1, max_j((alpha-1) z_j)]``:
    at the lower end the largest term alone already contributes 1, at the upper
    end every term is zero.  The residual is monotone in the threshold, so
    halving the bracket converges.

    Raises:
        ConfigError: ``alpha <= 1``.
        InputDomainError: non-finite logits.
    """
    alpha = check_alpha(alpha)
    x = as_logits(z) * (alpha - 1.0)
    exponent = 1.0 / (alpha - 1.0)

    hi = x.max(axis=-1, keepdims=True)
    lo = hi - 1.0
    tau = lo
    weights = positive_power(x - tau, exponent)

    for iteration in range(BISECT_MAX_ITER):
        tau = 0.5 * (lo + hi)
        weights = positive_power(x - tau, exponent)
        residual = weights.sum(axis=-1, keepdims=True) - 1.0
        if np.all(np.abs(residual) <= BISECT_TOL):
            break
        too_low = residual >= 0.0
        lo = np.where(too_low, tau, lo)
        hi = np.where(too_low, hi, tau)
    else:
        logger.debug(
            "entmax bisection hit iteration cap",
            max_iter=BISECT_MAX_ITER,
            worst_residual=float(np.max(np.abs(residual))),
        )

    weights /= weights.sum(axis=-1, keepdims=True)
    return _pack(weights, tau)


def entmax15_sorted(z: npt.ArrayLike) -> ThresholdResult:
    """Exact 1.5-entmax from a stable descending sort.

    For a candidate support of the ``k`` largest scaled logits the threshold
    solves ``sum_{j<=k} (x_(j) - tau)^2 = 1``, i.e.
    ``tau_k = mean_k - sqrt((1 - k * var_k) / k)``; the support size is the
    number of sorted entries with ``tau_k <= x_(k)``.
    """
    x = as_logits(z) * 0.5
    top = x.max(axis=-1, keepdims=True)
    x = x - top
    d = x.shape[-1]

    ordered = -np.sort(-x, axis=-1, kind="stable")
    rho = np.arange(1, d + 1, dtype=x.dtype)
    mean = np.cumsum(ordered, axis=-1) / rho
    mean_sq = np.cumsum(ordered * ordered, axis=-1) / rho
    ss = rho * (mean_sq - mean * mean)
    delta = np.maximum((1.0 - ss) / rho, 0.0)
    tau = mean - np.sqrt(delta)

    support_size = np.count_nonzero(tau <= ordered, axis=-1)[..., None]
    tau_star = np.take_along_axis(tau, support_size - 1, axis=-1)

    weights = positive_power(x - tau_star, 2.0)
    weights /= weights.sum(axis=-1, keepdims=True)
    return _pack(weights, tau_star + top)
