# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""``arelu`` command-line entry point.

Each command resolves its configuration (defaults, ``--config`` file, flags),
writes its outputs into ``<out>/<command>-seed<seed>/`` and finishes with a
``manifest.json`` that records the full configuration, seed and version.
"""

from __future__ import annotations

import dataclasses
import functools
import json
from pathlib import Path
from typing import Any, Callable, Mapping

import click
import numpy as np

from arelu_sdk.calibration import calibrate_tau, calibration_report
from arelu_sdk.cli.bench import BenchConfig, run_bench, write_bench_csv
from arelu_sdk.cli.config import (
    Key,
    RunDirectory,
    parse_config_file,
    parse_float_list,
    parse_int_list,
    parse_str_list,
    resolve_config,
)
from arelu_sdk.common.errors import AReluError, ConfigError
from arelu_sdk.common.logging_config import configure_logging
from arelu_sdk.experiments.empty_sequence import (
    EmptySequenceConfig,
    run_empty_sequence,
    write_empty_sequence_csv,
)
from arelu_sdk.experiments.ntk import dynamics_over_widths, ntk_dataset, write_ntk_csv
from arelu_sdk.experiments.sparsity import run_sparsity, write_histogram_csv, write_sparsity_csv
from arelu_sdk.experiments.tau_sweep import tau_sweep, write_tau_curves_csv, write_tau_final_csv
from arelu_sdk.factory import OutputFactory
from arelu_sdk.nnet.checkpoint import save_network
from arelu_sdk.nnet.datasets import CopyTaskConfig, GaussianTaskConfig, gaussian_clusters
from arelu_sdk.nnet.network import TinyNetwork
from arelu_sdk.nnet.optim import OptimizerConfig
from arelu_sdk.nnet.sequence import SequenceModelConfig
from arelu_sdk.nnet.training import TrainConfig, evaluate, train, write_jsonl
from arelu_sdk.transforms.types import TransformKind, normalize_kind


def _tau_value(raw: str) -> float | str:
    return "calibrate" if raw.strip().lower() == "calibrate" else float(raw)


def _optional_int(raw: str) -> int | None:
    return None if raw.strip().lower() in ("", "none", "full") else int(raw)


_TASK_KEYS = {
    "classes": Key(int, 10),
    "per_class": Key(int, 40),
    "dim": Key(int, 16),
    "hidden": Key(int, 64),
}

_OPTIM_KEYS = {
    "optimizer": Key(str, "adam"),
    "lr": Key(float, 1e-2),
    "steps": Key(int, 300),
    "batch_size": Key(_optional_int, None),
    "log_every": Key(int, 1),
}

SCHEMAS: dict[str, dict[str, Key]] = {
    "train": {
        "seed": Key(int),
        "loss": Key(normalize_kind, TransformKind.ARELU),
        "alpha": Key(float, 1.5),
        "tau": Key(_tau_value, 0.0),
        **_TASK_KEYS,
        **_OPTIM_KEYS,
    },
    "tau-sweep": {
        "seed": Key(int),
        "taus": Key(parse_float_list, (0.0, 0.1, 0.3, 1.0, 2.0, 5.0, 10.0)),
        "alpha": Key(float, 1.5),
        "workers": Key(int, 1),
        **_TASK_KEYS,
        **_OPTIM_KEYS,
    },
    "ntk-check": {
        "seed": Key(int),
        "transforms": Key(parse_str_list, ("softmax", "entmax_bisect", "arelu")),
        "widths": Key(parse_int_list, (1024, 2048, 4096)),
        "eta": Key(float, 1e-3),
        "n_train": Key(int, 32),
        "alpha": Key(float, 1.5),
        "tau": Key(float, 0.0),
    },
    "sparsity": {
        "seed": Key(int),
        "transforms": Key(
            parse_str_list, ("softmax", "sparsemax", "entmax_sorted_15", "arelu")
        ),
        "alpha": Key(float, 1.5),
        "bins": Key(int, 10),
        **_TASK_KEYS,
        **_OPTIM_KEYS,
    },
    "empty-seq": {
        "seed": Key(int),
        "seeds": Key(parse_int_list, None),
        "transforms": Key(parse_str_list, ("softmax", "entmax_sorted_15", "arelu")),
        "alpha": Key(float, 1.5),
        "beam": Key(int, 5),
        "vocab": Key(int, 50),
        "n_train": Key(int, 600),
        "n_dev": Key(int, 200),
        "noise": Key(float, 0.05),
        "empty_rate": Key(float, 0.1),
        "embed_dim": Key(int, 16),
        "hidden": Key(int, 128),
        "lr": Key(float, 1e-2),
        "steps": Key(int, 300),
    },
    "calibrate": {
        "seed": Key(int),
        "alpha": Key(float, 1.5),
        "widths": Key(parse_int_list, (16, 64, 10)),
        "rows": Key(int, 256),
    },
    "bench": {
        "seed": Key(int, 0),
        "transforms": Key(parse_str_list, BenchConfig.transforms),
        "dims": Key(parse_int_list, BenchConfig.dims),
        "batch": Key(int, 512),
        "iters": Key(int, 20),
        "warmup": Key(int, 3),
        "precision": Key(str, "f64"),
        "threads": Key(int, 1),
        "alpha": Key(float, 1.5),
        "tau": Key(float, 0.0),
    },
}


# ---------------------------------------------------------------------------
# Plumbing
# ---------------------------------------------------------------------------


def _resolve(command: str, config_file: str | None, flags: Mapping[str, Any]) -> dict[str, Any]:
    file_values = parse_config_file(config_file) if config_file else {}
    return resolve_config(SCHEMAS[command], file_values, flags)


def _handle_errors(fn: Callable[..., None]) -> Callable[..., None]:
    """Turn library errors into click errors with a non-zero exit code."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            fn(*args, **kwargs)
        except ConfigError as exc:
            raise click.UsageError(str(exc)) from exc
        except AReluError as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _write_json(path: Path, payload: Mapping[str, Any]) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _run_dir(ctx: click.Context, command: str, seed: int) -> RunDirectory:
    return RunDirectory(root=Path(ctx.obj["out"]), command=command, seed=seed)


def config_option(fn: Callable[..., Any]) -> Callable[..., Any]:
    fn = click.option("--seed", type=int, default=None, help="Random seed (required).")(fn)
    return click.option(
        "--config",
        "config_file",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="key=value file; flags override its values.",
    )(fn)


def _task(cfg: Mapping[str, Any]) -> GaussianTaskConfig:
    return GaussianTaskConfig(
        n_classes=cfg["classes"], per_class=cfg["per_class"], dim=cfg["dim"], seed=cfg["seed"]
    )


def _train_config(cfg: Mapping[str, Any]) -> TrainConfig:
    return TrainConfig(
        optimizer=OptimizerConfig(
            kind=cfg["optimizer"], learning_rate=cfg["lr"], steps=cfg["steps"]
        ),
        batch_size=cfg["batch_size"],
        log_every=cfg["log_every"],
        seed=cfg["seed"],
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@click.group()
@click.option(
    "--out",
    envvar="ARELU_OUTPUT_DIR",
    default="runs",
    show_default=True,
    type=click.Path(file_okay=False),
    help="Root output directory (env: ARELU_OUTPUT_DIR).",
)
@click.option("--log-level", default=None, help="Overrides LOG_LEVEL.")
@click.version_option(package_name="arelu-sdk")
@click.pass_context
def cli(ctx: click.Context, out: str, log_level: str | None) -> None:
    """Sparse output transformations: benchmarks, training runs and experiments."""
    configure_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj["out"] = out


@cli.command("train")
@config_option
@click.option("--loss", default=None, help="Transform/loss kind, e.g. softmax, entmax15, arelu.")
@click.option("--alpha", type=float, default=None)
@click.option("--tau", default=None, help="Threshold for alpha-ReLU, or 'calibrate'.")
@click.option("--steps", type=int, default=None)
@click.option("--lr", type=float, default=None)
@click.option("--optimizer", type=click.Choice(["adam", "sgd"]), default=None)
@click.option("--hidden", type=int, default=None)
@click.option("--log-every", type=int, default=None)
@click.pass_context
@_handle_errors
def train_cmd(ctx: click.Context, config_file: str | None, **flags: Any) -> None:
    """Train a network on the Gaussian-cluster task and write its training curve."""
    cfg = _resolve("train", config_file, flags)
    data = gaussian_clusters(_task(cfg))
    net = TinyNetwork((cfg["dim"], cfg["hidden"], cfg["classes"]), seed=cfg["seed"])
    tau = cfg["tau"]
    if tau == "calibrate":
        tau = calibrate_tau(net.forward(data.x), cfg["alpha"])
    head = OutputFactory().create_head(cfg["loss"], alpha=cfg["alpha"], tau=tau)

    records = train(net, data, head, _train_config(cfg))
    metrics = evaluate(net, data, head)

    run = _run_dir(ctx, "train", cfg["seed"])
    run.record(write_jsonl(records, run.file("train.jsonl")))
    metrics_path = run.file("metrics.json")
    _write_json(metrics_path, {**dataclasses.asdict(metrics), "tau": float(tau)})
    run.record(metrics_path)
    save_network(net, run.file("model.npz"))
    run.write_manifest(cfg, resolved_tau=float(tau))
    click.echo(str(run.path))


@cli.command("tau-sweep")
@config_option
@click.option("--taus", default=None, help="Comma-separated thresholds.")
@click.option("--alpha", type=float, default=None)
@click.option("--steps", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.pass_context
@_handle_errors
def tau_sweep_cmd(ctx: click.Context, config_file: str | None, **flags: Any) -> None:
    """Train one alpha-ReLU network per threshold and write aligned curves."""
    cfg = _resolve("tau-sweep", config_file, flags)
    curves = tau_sweep(
        cfg["taus"],
        task=_task(cfg),
        train_config=_train_config(cfg),
        hidden=cfg["hidden"],
        alpha=cfg["alpha"],
        seed=cfg["seed"],
        max_workers=cfg["workers"],
    )
    run = _run_dir(ctx, "tau-sweep", cfg["seed"])
    run.record(write_tau_curves_csv(curves, run.file("tau_curves.csv")))
    run.record(write_tau_final_csv(curves, run.file("tau_final.csv")))
    run.write_manifest(cfg)
    click.echo(str(run.path))


@cli.command("ntk-check")
@config_option
@click.option("--transforms", default=None, help="Comma-separated kinds.")
@click.option("--widths", default=None, help="Comma-separated hidden widths.")
@click.option("--eta", type=float, default=None)
@click.pass_context
@_handle_errors
def ntk_check_cmd(ctx: click.Context, config_file: str | None, **flags: Any) -> None:
    """Compare observed one-step logit changes with the kernel prediction."""
    cfg = _resolve("ntk-check", config_file, flags)
    data = ntk_dataset(n=cfg["n_train"], seed=cfg["seed"])
    factory = OutputFactory()
    reports = []
    summary = {}
    for kind in cfg["transforms"]:
        head = factory.create_head(kind, alpha=cfg["alpha"], tau=cfg["tau"])
        result = dynamics_over_widths(
            head, widths=cfg["widths"], data=data, eta=cfg["eta"], seed=cfg["seed"]
        )
        reports.extend(result.reports)
        summary[head.KIND] = {
            "monotone": result.monotone,
            "min_cosine": {str(r.width): r.min_cosine for r in result.reports},
        }
    run = _run_dir(ctx, "ntk-check", cfg["seed"])
    run.record(write_ntk_csv(reports, run.file("ntk.csv")))
    run.write_manifest(cfg, summary=summary)
    click.echo(str(run.path))


@cli.command("sparsity")
@config_option
@click.option("--transforms", default=None, help="Comma-separated kinds.")
@click.option("--steps", type=int, default=None)
@click.option("--bins", type=int, default=None)
@click.pass_context
@_handle_errors
def sparsity_cmd(ctx: click.Context, config_file: str | None, **flags: Any) -> None:
    """Train one network per transform and write zero-fraction statistics."""
    cfg = _resolve("sparsity", config_file, flags)
    stats = run_sparsity(
        cfg["transforms"],
        task=_task(cfg),
        train_config=_train_config(cfg),
        hidden=cfg["hidden"],
        alpha=cfg["alpha"],
        seed=cfg["seed"],
        bins=cfg["bins"],
    )
    run = _run_dir(ctx, "sparsity", cfg["seed"])
    run.record(write_sparsity_csv(stats, run.file("sparsity.csv")))
    run.record(write_histogram_csv(stats, run.file("sparsity_hist.csv")))
    run.write_manifest(cfg, mean_zero_fraction={s.transform: s.mean for s in stats})
    click.echo(str(run.path))


@cli.command("empty-seq")
@config_option
@click.option("--seeds", default=None, help="Comma-separated seeds; defaults to --seed.")
@click.option("--transforms", default=None, help="Comma-separated kinds.")
@click.option("--beam", type=int, default=None)
@click.option("--steps", type=int, default=None)
@click.pass_context
@_handle_errors
def empty_seq_cmd(ctx: click.Context, config_file: str | None, **flags: Any) -> None:
    """Measure how often the empty output outscores the beam hypothesis."""
    cfg = _resolve("empty-seq", config_file, flags)
    seeds = cfg["seeds"] or (cfg["seed"],)
    config = EmptySequenceConfig(
        task=CopyTaskConfig(
            vocab=cfg["vocab"],
            n_train=cfg["n_train"],
            n_dev=cfg["n_dev"],
            noise=cfg["noise"],
            empty_rate=cfg["empty_rate"],
        ),
        model=SequenceModelConfig(
            vocab=cfg["vocab"], embed_dim=cfg["embed_dim"], hidden=cfg["hidden"]
        ),
        train=TrainConfig(
            optimizer=OptimizerConfig(learning_rate=cfg["lr"], steps=cfg["steps"]),
            log_every=max(cfg["steps"], 1),
        ),
        beam=cfg["beam"],
        alpha=cfg["alpha"],
    )
    results = run_empty_sequence(cfg["transforms"], seeds=seeds, config=config)
    run = _run_dir(ctx, "empty-seq", cfg["seed"])
    run.record(write_empty_sequence_csv(results, run.file("empty_seq.csv")))
    run.write_manifest(cfg)
    click.echo(str(run.path))


@cli.command("calibrate")
@config_option
@click.option("--alpha", type=float, default=None)
@click.option("--widths", default=None, help="Comma-separated network widths.")
@click.option("--rows", type=int, default=None)
@click.pass_context
@_handle_errors
def calibrate_cmd(ctx: click.Context, config_file: str | None, **flags: Any) -> None:
    """Calibrate alpha-ReLU's threshold on an untrained network."""
    cfg = _resolve("calibrate", config_file, flags)
    widths = cfg["widths"]
    net = TinyNetwork(widths, seed=cfg["seed"])
    x = np.random.default_rng(cfg["seed"]).standard_normal((cfg["rows"], widths[0]))
    report = calibration_report(net.forward(x), cfg["alpha"])
    run = _run_dir(ctx, "calibrate", cfg["seed"])
    path = run.file("calibration.json")
    _write_json(path, dataclasses.asdict(report))
    run.record(path)
    run.write_manifest(cfg)
    click.echo(f"tau={report.tau!r}")


@cli.command("bench")
@config_option
@click.option("--transforms", default=None, help="Comma-separated kinds.")
@click.option("--dims", default=None, help="Comma-separated output dimensions.")
@click.option("--batch", type=int, default=None)
@click.option("--iters", type=int, default=None)
@click.option("--warmup", type=int, default=None)
@click.option("--precision", type=click.Choice(["f32", "f64"]), default=None)
@click.option("--threads", type=int, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--tau", type=float, default=None)
@click.pass_context
@_handle_errors
def bench_cmd(ctx: click.Context, config_file: str | None, **flags: Any) -> None:
    """Time the transforms on shared random logits and write bench.csv."""
    cfg = _resolve("bench", config_file, flags)
    records, checksums = run_bench(BenchConfig(**cfg))
    run = _run_dir(ctx, "bench", cfg["seed"])
    run.record(write_bench_csv(records, run.file("bench.csv")))
    run.write_manifest(cfg, checksums=checksums)
    click.echo(str(run.path))


if __name__ == "__main__":
    cli()
