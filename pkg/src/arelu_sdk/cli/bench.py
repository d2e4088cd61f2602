# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Wall-clock benchmark of the output transforms on shared random logits.

Every transform consumes the same pre-generated ``(batch, dim)`` buffer per
dimension.  Warmup runs are excluded from the statistics, and each output is
folded into a checksum so the work cannot be skipped.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Literal

import numpy as np

from arelu_sdk.common.errors import ConfigError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.factory import OutputFactory
from arelu_sdk.heads import OutputHead
from arelu_sdk.transforms.types import CANONICAL_KINDS, normalize_kind

__all__ = ["BenchConfig", "BenchmarkRecord", "run_bench", "write_bench_csv", "BENCH_CSV_HEADER"]

logger = get_logger(__name__)

BENCH_CSV_HEADER = (
    "transform", "alpha", "tau", "dim", "batch", "iters", "mean_ns", "p50_ns", "p95_ns",
)

_DTYPES = {"f32": np.float32, "f64": np.float64}


@dataclasses.dataclass(frozen=True)
class BenchConfig:
    transforms: tuple[str, ...] = (
        "softmax", "sparsemax", "entmax_sorted_15", "entmax_bisect", "arelu",
    )
    dims: tuple[int, ...] = (1000, 8000, 32000)
    batch: int = 512
    iters: int = 20
    warmup: int = 3
    precision: Literal["f32", "f64"] = "f64"
    threads: int = 1
    """Worker threads splitting the batch; 1 keeps timing single-threaded."""

    alpha: float = 1.5
    tau: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "transforms", tuple(normalize_kind(t) for t in self.transforms)
        )
        if not self.transforms:
            raise ConfigError(f"no transforms selected. Available kinds: {sorted(CANONICAL_KINDS)}")
        if not self.dims or min(self.dims) < 2:
            raise ConfigError(f"every dim must be >= 2, got {self.dims}")
        if self.batch < 1 or self.iters < 1 or self.warmup < 0 or self.threads < 1:
            raise ConfigError("need batch >= 1, iters >= 1, warmup >= 0 and threads >= 1")
        if self.precision not in _DTYPES:
            raise ConfigError(f"precision must be one of {sorted(_DTYPES)}, got {self.precision!r}")


@dataclasses.dataclass(frozen=True)
class BenchmarkRecord:
    transform: str
    alpha: float
    tau: float
    dim: int
    batch: int
    iters: int
    mean_ns: float
    p50_ns: float
    p95_ns: float

    def row(self) -> list[object]:
        return [getattr(self, f.name) for f in dataclasses.fields(self)]


def _runner(head: OutputHead, pool: ThreadPoolExecutor | None, threads: int):
    if pool is None:
        return lambda z: float(np.sum(head.transform(z).values, dtype=np.float64))

    def run(z: np.ndarray) -> float:
        parts = np.array_split(z, threads, axis=0)
        return math.fsum(
            pool.map(lambda p: float(np.sum(head.transform(p).values, dtype=np.float64)), parts)
        )

    return run


def run_bench(config: BenchConfig) -> tuple[list[BenchmarkRecord], dict[str, float]]:
    """Time every (dim, transform) pair; returns records and output checksums."""
    factory = OutputFactory()
    heads = [
        factory.create_head(kind, alpha=config.alpha, tau=config.tau)
        for kind in config.transforms
    ]
    rng = np.random.default_rng(config.seed)
    dtype = _DTYPES[config.precision]
    records: list[BenchmarkRecord] = []
    checksums: dict[str, float] = {}

    pool = ThreadPoolExecutor(max_workers=config.threads) if config.threads > 1 else None
    try:
        for dim in config.dims:
            logits = rng.standard_normal((config.batch, dim)).astype(dtype)
            for head in heads:
                run = _runner(head, pool, config.threads)
                for _ in range(config.warmup):
                    run(logits)
                timings = np.empty(config.iters, dtype=np.float64)
                checksum = 0.0
                for i in range(config.iters):
                    start = time.perf_counter_ns()
                    checksum += run(logits)
                    timings[i] = time.perf_counter_ns() - start
                checksums[f"{head.KIND}/{dim}"] = checksum
                record = BenchmarkRecord(
                    transform=head.KIND,
                    alpha=head.alpha,
                    tau=head.tau,
                    dim=dim,
                    batch=config.batch,
                    iters=config.iters,
                    mean_ns=float(timings.mean()),
                    p50_ns=float(np.percentile(timings, 50)),
                    p95_ns=float(np.percentile(timings, 95)),
                )
                logger.info(
                    "benchmarked",
                    transform=head.KIND,
                    dim=dim,
                    precision=config.precision,
                    mean_ms=record.mean_ns / 1e6,
                )
                records.append(record)
    finally:
        if pool is not None:
            pool.shutdown()
    return records, checksums


def write_bench_csv(records: Iterable[BenchmarkRecord], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_CSV_HEADER)
        for record in records:
            writer.writerow(record.row())
    return path
