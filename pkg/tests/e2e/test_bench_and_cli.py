# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Benchmark direction and full CLI runs."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from arelu_sdk.cli.bench import BenchConfig, run_bench
from arelu_sdk.cli.main import cli
from arelu_sdk.experiments import run_sparsity
from arelu_sdk.nnet import load_network
from tests.e2e.conftest import TRAIN_CONFIG

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("precision", ["f32", "f64"])
def test_arelu_faster_than_sorted_entmax(precision):
    config = BenchConfig(
        transforms=("softmax", "entmax_sorted_15", "arelu"),
        dims=(32000,),
        batch=512,
        iters=10,
        warmup=2,
        precision=precision,
    )
    records, _ = run_bench(config)
    mean = {r.transform: r.mean_ns for r in records}
    print(f"\n{precision}: " + ", ".join(f"{k}={v / 1e6:.1f}ms" for k, v in mean.items()))
    assert mean["arelu"] < mean["entmax_sorted_15"]
    assert mean["arelu"] / mean["softmax"] <= 1.5


def test_trained_models_are_sparse_except_softmax():
    stats = {s.transform: s for s in run_sparsity(train_config=TRAIN_CONFIG, seed=0)}
    for name, s in stats.items():
        print(f"\n{name}: mean zero fraction {s.mean:.3f}, median {s.median:.3f}")
    assert stats["softmax"].mean == 0.0
    for kind in ("sparsemax", "entmax_sorted_15", "arelu"):
        assert stats[kind].mean > 0.0, kind


def test_cli_runs_are_reproducible(tmp_path):
    runner = CliRunner()
    args = ["train", "--seed", "7", "--loss", "arelu", "--tau", "calibrate", "--steps", "100"]
    runs = [tmp_path / name / "train-seed7" for name in ("first", "second")]
    manifests = []
    for run in runs:
        result = runner.invoke(cli, ["--out", str(run.parent), *args])
        assert result.exit_code == 0, result.output
        manifests.append(json.loads((run / "manifest.json").read_text()))

    assert manifests[0]["config"] == manifests[1]["config"]
    assert manifests[0]["resolved_tau"] == manifests[1]["resolved_tau"]
    assert manifests[0]["outputs"]["metrics.json"] == manifests[1]["outputs"]["metrics.json"]
    nets = [load_network(run / "model.npz") for run in runs]
    for a, b in zip(nets[0].weights, nets[1].weights):
        np.testing.assert_array_equal(a, b)
