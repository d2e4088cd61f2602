# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Train one alpha-ReLU network per threshold with identical seeds and data."""

from __future__ import annotations

import csv
import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from arelu_sdk.common.errors import ConfigError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.heads import AReluHead
from arelu_sdk.nnet.datasets import ClassificationData, GaussianTaskConfig, gaussian_clusters
from arelu_sdk.nnet.network import TinyNetwork
from arelu_sdk.nnet.training import TrainConfig, TrainingRecord, train

__all__ = [
    "DEFAULT_TAUS",
    "TauCurve",
    "tau_sweep",
    "accuracy_band",
    "write_tau_curves_csv",
    "write_tau_final_csv",
    "TAU_CURVES_CSV_HEADER",
    "TAU_FINAL_CSV_HEADER",
]

logger = get_logger(__name__)

DEFAULT_TAUS = (0.0, 0.1, 0.3, 1.0, 2.0, 5.0, 10.0)

TAU_CURVES_CSV_HEADER = ("tau", "step", "loss", "accuracy", "sparsity_mean")
TAU_FINAL_CSV_HEADER = ("tau", "final_loss", "final_accuracy")


@dataclasses.dataclass(frozen=True)
class TauCurve:
    tau: float
    records: list[TrainingRecord]

    @property
    def final_loss(self) -> float:
        return self.records[-1].loss if self.records else math.nan

    @property
    def final_accuracy(self) -> float:
        return self.records[-1].accuracy if self.records else math.nan


def _run_one(
    tau: float,
    data: ClassificationData,
    widths: tuple[int, ...],
    alpha: float,
    seed: int,
    config: TrainConfig,
) -> TauCurve:
    net = TinyNetwork(widths, seed=seed)
    records = train(net, data, AReluHead(alpha=alpha, tau=tau), config)
    return TauCurve(tau=tau, records=records)


def tau_sweep(
    taus: Sequence[float] = DEFAULT_TAUS,
    task: GaussianTaskConfig | None = None,
    train_config: TrainConfig | None = None,
    hidden: int = 64,
    alpha: float = 1.5,
    seed: int = 0,
    max_workers: int = 1,
) -> list[TauCurve]:
    """Curves for every threshold, ordered by ``tau``.

    Each job builds its own network from *seed*, so jobs are independent and
    may run on a thread pool without changing any result.

    Raises:
        ConfigError: a non-finite threshold or an empty grid.
    """
    if not taus:
        raise ConfigError("tau sweep needs at least one threshold")
    bad = [t for t in taus if not math.isfinite(t)]
    if bad:
        raise ConfigError(f"thresholds must be finite, got {bad}")
    task = task or GaussianTaskConfig(seed=seed)
    config = train_config or TrainConfig()
    data = gaussian_clusters(task)
    widths = (task.dim, hidden, task.n_classes)
    ordered = sorted(float(t) for t in taus)

    logger.info("tau sweep started", taus=ordered, seed=seed, max_workers=max_workers)
    if max_workers <= 1:
        curves = [_run_one(t, data, widths, alpha, seed, config) for t in ordered]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            curves = list(
                pool.map(lambda t: _run_one(t, data, widths, alpha, seed, config), ordered)
            )
    for curve in curves:
        logger.info(
            "tau finished",
            tau=curve.tau,
            final_loss=curve.final_loss,
            final_accuracy=curve.final_accuracy,
        )
    return curves


def accuracy_band(curves: Iterable[TauCurve], lo: float = 0.0, hi: float = 2.0) -> float:
    """Spread ``max - min`` of final accuracies over curves with ``lo <= tau <= hi``."""
    accs = [c.final_accuracy for c in curves if lo <= c.tau <= hi]
    return max(accs) - min(accs) if accs else 0.0


def write_tau_curves_csv(curves: Iterable[TauCurve], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TAU_CURVES_CSV_HEADER)
        for curve in curves:
            for r in curve.records:
                writer.writerow(
                    [repr(curve.tau), r.step, repr(r.loss), repr(r.accuracy), repr(r.sparsity_mean)]
                )
    return path


def write_tau_final_csv(curves: Iterable[TauCurve], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TAU_FINAL_CSV_HEADER)
        for curve in curves:
            writer.writerow([repr(curve.tau), repr(curve.final_loss), repr(curve.final_accuracy)])
    return path
