# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Empirical neural tangent kernel and the one-step logit-dynamics check.

For a network in the NTK parameterization trained with any of the matched
losses, the logits of a query ``x`` move under gradient flow as

    dz(x)/dt = -1/N * sum_j K(x, x_j) (sigma(z_j) - e_{y_j})

with ``K(x, x') = J_z(x) J_z(x')^T``.  :func:`dynamics_check` takes one
full-batch SGD step and compares the observed ``(z_after - z_before) / eta``
with that prediction.
"""

from __future__ import annotations

import csv
import dataclasses
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from arelu_sdk.common.errors import ShapeError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.heads import OutputHead
from arelu_sdk.losses.types import reduce_mean
from arelu_sdk.nnet.datasets import ClassificationData, GaussianTaskConfig, gaussian_clusters
from arelu_sdk.nnet.network import ForwardCache, TinyNetwork
from arelu_sdk.nnet.optim import SGD, OptimizerConfig

__all__ = [
    "KernelMatrix",
    "DynamicsReport",
    "WidthsReport",
    "empirical_ntk",
    "dynamics_check",
    "dynamics_over_widths",
    "ntk_dataset",
    "write_ntk_csv",
    "NTK_CSV_HEADER",
]

logger = get_logger(__name__)

NTK_CSV_HEADER = ("transform", "width", "query", "cosine", "relative_error", "kinked")

MAX_SAFE_ETA = 1e-3
MIN_SAFE_WIDTH = 1024

_TINY = 1e-12


@dataclasses.dataclass(frozen=True)
class KernelMatrix:
    entries: np.ndarray
    """``(d, d)`` block ``K(x, x')``."""

    jacobians: tuple[np.ndarray, np.ndarray] | None = None
    """``(J_z(x), J_z(x'))`` when requested; each ``(d, num_parameters)``."""

    @property
    def shape(self) -> tuple[int, ...]:
        return self.entries.shape

    def min_eigenvalue(self) -> float:
        sym = 0.5 * (self.entries + self.entries.T)
        return float(np.linalg.eigvalsh(sym).min())

    def is_symmetric_psd(self, tol: float = 1e-9) -> bool:
        """Symmetric up to a relative ``tol`` and no eigenvalue below ``-tol``."""
        k = self.entries
        if k.shape[0] != k.shape[1]:
            return False
        scale = max(float(np.abs(k).max()), 1.0)
        return bool(np.allclose(k, k.T, atol=tol * scale)) and self.min_eigenvalue() >= -tol * scale


def empirical_ntk(
    net: TinyNetwork,
    x: npt.ArrayLike,
    x2: npt.ArrayLike | None = None,
    keep_jacobians: bool = False,
) -> KernelMatrix:
    """``K(x, x2) = J_z(x) J_z(x2)^T`` at the current parameters.

    Without ``keep_jacobians`` the kernel is assembled per layer from
    backpropagated deltas and layer inputs; the full Jacobian is never built.

    Raises:
        ShapeError: inputs are not single vectors of the network's input width.
    """
    x = np.asarray(x, dtype=np.float64)
    x2 = x if x2 is None else np.asarray(x2, dtype=np.float64)
    if x.ndim != 1 or x2.ndim != 1:
        raise ShapeError("empirical_ntk expects single input vectors")
    if keep_jacobians:
        j1 = net.jacobian(x)
        j2 = j1 if x2 is x else net.jacobian(x2)
        return KernelMatrix(entries=j1 @ j2.T, jacobians=(j1, j2))

    d1, h1 = net.layer_factors(x)
    d2, h2 = (d1, h1) if x2 is x else net.layer_factors(x2)
    entries = np.zeros((net.output_dim, net.output_dim))
    for dk1, hk1, dk2, hk2 in zip(d1, h1, d2, h2):
        entries += (dk1 @ dk2.T) * float(hk1 @ hk2)
    return KernelMatrix(entries=entries)


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class DynamicsReport:
    transform: str
    width: int
    eta: float
    steps: int
    predicted: np.ndarray
    """Predicted logit velocity per query at the last step, ``(P, d)``."""

    observed: np.ndarray
    """Observed ``delta z / eta`` per query at the last step, ``(P, d)``."""

    cosine: np.ndarray
    """Per query, the worst cosine similarity across steps."""

    relative_error: np.ndarray
    """Per query, the largest ``|observed - predicted| / |predicted|`` across steps."""

    max_logit_change: float
    """Largest ``|z_after - z_before|`` over queries and steps."""

    kinked: np.ndarray | None = None
    """Per query, whether a hidden pre-activation crossed an activation kink.

    Kinked queries are left out of the summary statistics unless every query
    is kinked.
    """

    def _smooth(self, values: np.ndarray) -> np.ndarray:
        if self.kinked is None or self.kinked.all():
            return values
        return values[~self.kinked]

    @property
    def num_kinked(self) -> int:
        return 0 if self.kinked is None else int(self.kinked.sum())

    @property
    def mean_cosine(self) -> float:
        return float(self._smooth(self.cosine).mean())

    @property
    def min_cosine(self) -> float:
        return float(self._smooth(self.cosine).min())

    @property
    def mean_relative_error(self) -> float:
        return float(self._smooth(self.relative_error).mean())

    @property
    def median_relative_error(self) -> float:
        return float(np.median(self._smooth(self.relative_error)))


def _predicted_velocity(
    net: TinyNetwork, queries: np.ndarray, data: ClassificationData, head: OutputHead
) -> np.ndarray:
    """``-1/N sum_j K(p, x_j) r_j`` for every query, from per-layer factors."""
    residual = reduce_mean(head.loss(net.forward(data.x), data.y)).gradient  # r_j / N
    train_factors = [net.layer_factors(x) for x in data.x]
    query_factors = [net.layer_factors(p) for p in queries]
    out = np.zeros((len(queries), net.output_dim))
    for k in range(net.depth):
        d_train = np.stack([f[0][k] for f in train_factors])  # (N, d, n_k+1)
        h_train = np.stack([f[1][k] for f in train_factors])  # (N, n_k)
        d_query = np.stack([f[0][k] for f in query_factors])
        h_query = np.stack([f[1][k] for f in query_factors])
        g = np.einsum("jdn,jd->jn", d_train, residual)
        out -= np.einsum("pdn,pn->pd", d_query, (h_query @ h_train.T) @ g)
    return out


def _cosine(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    na = np.linalg.norm(a, axis=-1)
    nb = np.linalg.norm(b, axis=-1)
    both_zero = (na <= _TINY) & (nb <= _TINY)
    cos = np.sum(a * b, axis=-1) / np.maximum(na * nb, _TINY)
    return np.where(both_zero, 1.0, cos)


def _relative_error(observed: np.ndarray, predicted: np.ndarray) -> np.ndarray:
    err = np.linalg.norm(observed - predicted, axis=-1)
    return err / np.maximum(np.linalg.norm(predicted, axis=-1), _TINY)


def _crossed_kink(net: TinyNetwork, before: ForwardCache, after: ForwardCache) -> np.ndarray:
    """Per query, whether any hidden pre-activation moved across an activation kink."""
    crossed = np.zeros(before.logits.shape[0], dtype=bool)
    for z0, z1 in zip(before.preactivations[:-1], after.preactivations[:-1]):
        for kink in net.activation.kinks:
            crossed |= np.any(np.sign(z0 - kink) != np.sign(z1 - kink), axis=-1)
    return crossed


def dynamics_check(
    net: TinyNetwork,
    data: ClassificationData,
    head: OutputHead,
    eta: float = 1e-3,
    steps: int = 1,
    queries: npt.ArrayLike | None = None,
) -> DynamicsReport:
    """Compare predicted and observed logit velocity over ``steps`` SGD steps.

    *net* is not modified; a copy is trained.  Queries default to the training
    inputs.  Large steps or narrow networks are allowed but logged as a
    warning, since agreement is only expected for small ``eta`` and wide nets.
    """
    width = min(net.widths[1:-1], default=net.widths[0])
    if eta > MAX_SAFE_ETA or width < MIN_SAFE_WIDTH:
        logger.warning(
            "dynamics check outside the small-step wide-net regime",
            eta=eta,
            width=width,
        )
    query_x = data.x if queries is None else np.atleast_2d(np.asarray(queries, dtype=np.float64))
    work = net.copy()
    optimizer = SGD(OptimizerConfig(kind="sgd", learning_rate=eta, steps=steps))

    cosine = np.ones(len(query_x))
    rel = np.zeros(len(query_x))
    kinked = np.zeros(len(query_x), dtype=bool)
    max_change = 0.0
    predicted = observed = np.zeros((len(query_x), net.output_dim))
    for _ in range(steps):
        predicted = _predicted_velocity(work, query_x, data, head)
        before = work.forward_cache(query_x)
        grads = work.backward(data.x, data.y, head)
        optimizer.step(work.weights, grads.weights)
        after = work.forward_cache(query_x)
        kinked |= _crossed_kink(work, before, after)
        delta = after.logits - before.logits
        observed = delta / eta
        max_change = max(max_change, float(np.abs(delta).max()))
        cosine = np.minimum(cosine, _cosine(observed, predicted))
        rel = np.maximum(rel, _relative_error(observed, predicted))

    report = DynamicsReport(
        transform=head.KIND,
        width=width,
        eta=eta,
        steps=steps,
        predicted=predicted,
        observed=observed,
        cosine=cosine,
        relative_error=rel,
        max_logit_change=max_change,
        kinked=kinked,
    )
    logger.info(
        "dynamics check",
        transform=head.KIND,
        width=width,
        eta=eta,
        min_cosine=report.min_cosine,
        mean_relative_error=report.mean_relative_error,
        kinked=report.num_kinked,
    )
    return report


def ntk_dataset(
    n: int = 32, dim: int = 16, n_classes: int = 10, seed: int = 0
) -> ClassificationData:
    """First ``n`` points of a Gaussian-cluster task with enough points per class."""
    per_class = -(-n // n_classes)
    data = gaussian_clusters(
        GaussianTaskConfig(n_classes=n_classes, per_class=per_class, dim=dim, seed=seed)
    )
    return ClassificationData(x=data.x[:n], y=data.y[:n])


@dataclasses.dataclass(frozen=True)
class WidthsReport:
    reports: list[DynamicsReport]
    """One report per width, in the order the widths were given."""

    @property
    def monotone(self) -> bool:
        """Median relative error never increases as the width grows."""
        ordered = sorted(self.reports, key=lambda r: r.width)
        errs = [r.median_relative_error for r in ordered]
        return all(b <= a for a, b in zip(errs, errs[1:]))


def dynamics_over_widths(
    head: OutputHead,
    widths: Sequence[int] = (1024, 2048, 4096),
    data: ClassificationData | None = None,
    eta: float = 1e-3,
    seed: int = 0,
    activation: str = "relu",
) -> WidthsReport:
    """Run :func:`dynamics_check` on two-layer nets ``(n_0, width, d)`` of every width."""
    data = data if data is not None else ntk_dataset(seed=seed)
    d = int(data.y.max()) + 1
    reports = []
    for width in widths:
        net = TinyNetwork((data.x.shape[1], width, d), activation=activation, seed=seed)
        reports.append(dynamics_check(net, data, head, eta=eta))
    result = WidthsReport(reports=reports)
    logger.info(
        "dynamics over widths",
        transform=head.KIND,
        widths=list(widths),
        monotone=result.monotone,
    )
    return result


def write_ntk_csv(reports: Iterable[DynamicsReport], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(NTK_CSV_HEADER)
        for report in reports:
            kinked = (
                np.zeros(len(report.cosine), dtype=bool) if report.kinked is None else report.kinked
            )
            rows = zip(report.cosine, report.relative_error, kinked)
            for query, (cos, err, kink) in enumerate(rows):
                writer.writerow(
                    [
                        report.transform,
                        report.width,
                        query,
                        repr(float(cos)),
                        repr(float(err)),
                        int(kink),
                    ]
                )
    return path
