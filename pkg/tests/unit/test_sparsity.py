# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

import csv

import numpy as np
import pytest

from arelu_sdk.common.errors import InputDomainError
from arelu_sdk.experiments.sparsity import (
    HISTOGRAM_CSV_HEADER,
    SPARSITY_CSV_HEADER,
    run_sparsity,
    sparsity_from_network,
    sparsity_histogram,
    write_histogram_csv,
    write_sparsity_csv,
)
from arelu_sdk.factory import OutputFactory
from arelu_sdk.nnet import GaussianTaskConfig, OptimizerConfig, TinyNetwork, TrainConfig


def test_worked_example():
    stats = sparsity_histogram(OutputFactory().create_head("arelu"), [[2.0, 1.0, -1.0]])
    np.testing.assert_allclose(stats.zero_fractions, [1 / 3])
    assert stats.counts.sum() == 1
    assert stats.bucket_edges[0] == 0.0 and stats.bucket_edges[-1] == 1.0


def test_softmax_reports_no_zeros_even_on_underflow():
    stats = sparsity_histogram(OutputFactory().create_head("softmax"), [[0.0, -2000.0, 5.0]])
    assert stats.mean == 0.0


def test_sparse_heads_zero_far_logits():
    z = np.array([[5.0, 4.9, -10.0, -20.0]] * 3)
    for kind in ("sparsemax", "entmax15", "arelu"):
        stats = sparsity_histogram(OutputFactory().create_head(kind), z)
        assert stats.median == pytest.approx(0.5), kind


def test_counts_cover_every_row():
    z = np.random.default_rng(0).standard_normal((40, 8)) * 3
    stats = sparsity_histogram(OutputFactory().create_head("sparsemax"), z, bins=5)
    assert len(stats.counts) == 5
    assert stats.counts.sum() == 40
    assert np.all((stats.zero_fractions >= 0.0) & (stats.zero_fractions <= 1.0))


def test_empty_input():
    with pytest.raises(InputDomainError):
        sparsity_histogram(OutputFactory().create_head("arelu"), np.zeros((0, 4)))


def test_from_network_uses_forward():
    net = TinyNetwork((4, 8, 5), seed=1)
    x = np.random.default_rng(1).standard_normal((6, 4))
    head = OutputFactory().create_head("entmax15")
    np.testing.assert_array_equal(
        sparsity_from_network(net, head, x).zero_fractions,
        sparsity_histogram(head, net.forward(x)).zero_fractions,
    )


def test_run_sparsity_orders_kinds_and_writes_csv(tmp_path):
    task = GaussianTaskConfig(n_classes=4, per_class=5, dim=6, seed=2)
    train_config = TrainConfig(optimizer=OptimizerConfig(steps=10))
    stats = run_sparsity(
        ["softmax", "sparsemax", "1.5-relu"], task=task, train_config=train_config, hidden=16
    )
    assert [s.transform for s in stats] == ["softmax", "sparsemax", "arelu"]
    assert stats[0].mean == 0.0
    assert all(len(s.zero_fractions) == 20 for s in stats)

    rows = list(csv.reader(write_sparsity_csv(stats, tmp_path / "sparsity.csv").open()))
    assert tuple(rows[0]) == SPARSITY_CSV_HEADER
    assert len(rows) == 1 + 3 * 20

    hist = list(csv.reader(write_histogram_csv(stats, tmp_path / "hist.csv").open()))
    assert tuple(hist[0]) == HISTOGRAM_CSV_HEADER
    assert len(hist) == 1 + 3 * 10
