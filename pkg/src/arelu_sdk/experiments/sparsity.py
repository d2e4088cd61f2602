# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Share of exactly-zero output weights, per example and as a histogram."""

from __future__ import annotations

import csv
import dataclasses
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from arelu_sdk.calibration import calibrate_tau
from arelu_sdk.common.errors import InputDomainError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.factory import OutputFactory
from arelu_sdk.heads import OutputHead
from arelu_sdk.nnet.datasets import GaussianTaskConfig, gaussian_clusters
from arelu_sdk.nnet.network import TinyNetwork
from arelu_sdk.nnet.training import TrainConfig, train
from arelu_sdk.transforms.types import TransformKind, as_logits, normalize_kind

__all__ = [
    "SparsityStats",
    "sparsity_histogram",
    "sparsity_from_network",
    "run_sparsity",
    "write_sparsity_csv",
    "write_histogram_csv",
    "SPARSITY_CSV_HEADER",
    "HISTOGRAM_CSV_HEADER",
]

logger = get_logger(__name__)

SPARSITY_CSV_HEADER = ("transform", "example", "zero_fraction")
HISTOGRAM_CSV_HEADER = ("transform", "bucket_lo", "bucket_hi", "count")


@dataclasses.dataclass(frozen=True)
class SparsityStats:
    transform: str
    zero_fractions: np.ndarray
    """Per example, in ``[0, 1]``."""

    bucket_edges: np.ndarray
    counts: np.ndarray

    @property
    def mean(self) -> float:
        return float(self.zero_fractions.mean())

    @property
    def median(self) -> float:
        return float(np.median(self.zero_fractions))


def sparsity_histogram(head: OutputHead, logits: npt.ArrayLike, bins: int = 10) -> SparsityStats:
    """Zero fraction of ``head.transform`` on every row of *logits*.

    Only exact zeros count.  Softmax is strictly positive, so it reports 0
    even where ``exp`` underflows.

    Raises:
        InputDomainError: no evaluation rows.
    """
    z = as_logits(logits)
    rows = z.reshape(-1, z.shape[-1])
    if rows.shape[0] == 0:
        raise InputDomainError("sparsity needs at least one evaluation row")
    if head.KIND == TransformKind.SOFTMAX:
        fractions = np.zeros(rows.shape[0])
    else:
        fractions = np.atleast_1d(head.transform(rows).zero_fraction())
    counts, edges = np.histogram(fractions, bins=bins, range=(0.0, 1.0))
    return SparsityStats(
        transform=head.KIND, zero_fractions=fractions, bucket_edges=edges, counts=counts
    )


def sparsity_from_network(
    net: TinyNetwork, head: OutputHead, x: npt.ArrayLike, bins: int = 10
) -> SparsityStats:
    return sparsity_histogram(head, net.forward(x), bins=bins)


def run_sparsity(
    kinds: Sequence[str] = (
        TransformKind.SOFTMAX,
        TransformKind.SPARSEMAX,
        TransformKind.ENTMAX_SORTED_15,
        TransformKind.ARELU,
    ),
    task: GaussianTaskConfig | None = None,
    train_config: TrainConfig | None = None,
    hidden: int = 64,
    alpha: float = 1.5,
    seed: int = 0,
    bins: int = 10,
) -> list[SparsityStats]:
    """Train one network per kind on the same task and seed, then measure sparsity.

    alpha-ReLU uses the threshold calibrated on the untrained network.
    """
    task = task or GaussianTaskConfig(seed=seed)
    data = gaussian_clusters(task)
    factory = OutputFactory()
    widths = (task.dim, hidden, task.n_classes)
    results = []
    for kind in kinds:
        net = TinyNetwork(widths, seed=seed)
        tau = 0.0
        if normalize_kind(kind) == TransformKind.ARELU:
            tau = calibrate_tau(net.forward(data.x), alpha)
        head = factory.create_head(kind, alpha=alpha, tau=tau)
        train(net, data, head, train_config)
        stats = sparsity_from_network(net, head, data.x, bins=bins)
        logger.info(
            "sparsity measured", transform=stats.transform, mean=stats.mean, median=stats.median
        )
        results.append(stats)
    return results


def write_sparsity_csv(stats: Iterable[SparsityStats], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPARSITY_CSV_HEADER)
        for s in stats:
            for i, frac in enumerate(s.zero_fractions):
                writer.writerow([s.transform, i, repr(float(frac))])
    return path


def write_histogram_csv(stats: Iterable[SparsityStats], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(HISTOGRAM_CSV_HEADER)
        for s in stats:
            for lo, hi, count in zip(s.bucket_edges[:-1], s.bucket_edges[1:], s.counts):
                writer.writerow([s.transform, repr(float(lo)), repr(float(hi)), int(count)])
    return path
