# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""alpha-ReLU: entmax's formula with a constant threshold.

``arelu_i(z) = [(alpha-1) z_i - tau]_+ ** (1/(alpha-1))``

No sort and no data-dependent threshold: one element-wise pass.  The output is
nonnegative but not normalized; an all-zero output is legal.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from arelu_sdk.transforms.types import (
    DEFAULT_ALPHA,
    TransformConfig,
    WeightVector,
    as_logits,
    check_alpha,
    positive_power,
)

__all__ = ["arelu", "arelu_jacobian_diag"]


def _resolve(
    cfg: TransformConfig | None, alpha: float, tau: float
) -> tuple[float, float]:
    if cfg is not None:
        alpha, tau = cfg.alpha, cfg.tau
    return check_alpha(alpha), float(tau)


def arelu(
    z: npt.ArrayLike,
    cfg: TransformConfig | None = None,
    *,
    alpha: float = DEFAULT_ALPHA,
    tau: float = 0.0,
) -> WeightVector:
    """Apply alpha-ReLU over the last axis.

    ``cfg`` takes precedence over the keyword arguments when given.

    Raises:
        ConfigError: ``alpha <= 1``.
    """
    alpha, tau = _resolve(cfg, alpha, tau)
    x = as_logits(z) * (alpha - 1.0)
    x -= tau
    return WeightVector(values=positive_power(x, 1.0 / (alpha - 1.0)), normalized=False)


def arelu_jacobian_diag(
    z: npt.ArrayLike,
    cfg: TransformConfig | None = None,
    *,
    alpha: float = DEFAULT_ALPHA,
    tau: float = 0.0,
) -> npt.NDArray[np.floating]:
    """Diagonal of the alpha-ReLU Jacobian: ``arelu_i(z) ** (2 - alpha)`` on the support.

    Off-diagonal entries are zero since each output depends on one logit only.
    At the kink ``(alpha-1) z_i = tau`` and below it the slope is taken as 0.
    """
    alpha, tau = _resolve(cfg, alpha, tau)
    weights = arelu(z, alpha=alpha, tau=tau).values
    return positive_power(weights, 2.0 - alpha)
