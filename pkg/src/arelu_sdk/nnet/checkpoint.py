# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Versioned ``.npz`` checkpoints.

Layout (format version 1)::

    format_version   int64 scalar
    kind             "tiny_network" | "sequence_model"
    widths           int64 (L+1,)
    activation       str scalar
    seed             int64 scalar
    W0 .. W{L-1}     float64 weight matrices
    source_embedding, prev_embedding   (sequence models only)
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from arelu_sdk.common.errors import ConfigError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.nnet.network import TinyNetwork
from arelu_sdk.nnet.sequence import SequenceModel, SequenceModelConfig

__all__ = [
    "FORMAT_VERSION",
    "save_network",
    "load_network",
    "save_sequence_model",
    "load_sequence_model",
]

logger = get_logger(__name__)

FORMAT_VERSION = 1


def _network_arrays(net: TinyNetwork) -> dict[str, np.ndarray]:
    arrays = {
        "format_version": np.array(FORMAT_VERSION, dtype=np.int64),
        "widths": np.asarray(net.widths, dtype=np.int64),
        "activation": np.array(net.activation.name),
        "seed": np.array(net.seed, dtype=np.int64),
    }
    arrays.update({f"W{k}": w for k, w in enumerate(net.weights)})
    return arrays


def _write(path: str | Path, arrays: dict[str, np.ndarray]) -> Path:
    path = Path(path)
    if path.suffix != ".npz":
        path = path.with_suffix(".npz")
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(path, **arrays)
    logger.debug("checkpoint written", path=str(path), kind=str(arrays["kind"]))
    return path


def _read(path: str | Path, kind: str) -> dict[str, np.ndarray]:
    with np.load(Path(path), allow_pickle=False) as archive:
        arrays = {name: archive[name] for name in archive.files}
    version = int(arrays.get("format_version", -1))
    if version != FORMAT_VERSION:
        raise ConfigError(
            f"unsupported checkpoint format_version {version}, expected {FORMAT_VERSION}"
        )
    found = str(arrays.get("kind", ""))
    if found != kind:
        raise ConfigError(f"checkpoint holds a {found!r}, expected {kind!r}")
    return arrays


def _network_from(arrays: dict[str, np.ndarray]) -> TinyNetwork:
    widths = tuple(int(n) for n in arrays["widths"])
    weights = [arrays[f"W{k}"] for k in range(len(widths) - 1)]
    return TinyNetwork(
        widths,
        activation=str(arrays["activation"]),
        seed=int(arrays["seed"]),
        weights=weights,
    )


def save_network(net: TinyNetwork, path: str | Path) -> Path:
    arrays = _network_arrays(net)
    arrays["kind"] = np.array("tiny_network")
    return _write(path, arrays)


def load_network(path: str | Path) -> TinyNetwork:
    return _network_from(_read(path, "tiny_network"))


def save_sequence_model(model: SequenceModel, path: str | Path) -> Path:
    arrays = _network_arrays(model.net)
    arrays.update(
        kind=np.array("sequence_model"),
        source_embedding=model.source_embedding,
        prev_embedding=model.prev_embedding,
        seed=np.array(model.config.seed, dtype=np.int64),
    )
    return _write(path, arrays)


def load_sequence_model(path: str | Path) -> SequenceModel:
    arrays = _read(path, "sequence_model")
    net = _network_from(arrays)
    config = SequenceModelConfig(
        vocab=net.output_dim,
        embed_dim=int(arrays["source_embedding"].shape[1]),
        hidden=net.widths[1],
        activation=net.activation.name,
        seed=int(arrays["seed"]),
    )
    model = SequenceModel(config)
    model.source_embedding = arrays["source_embedding"].astype(np.float64)
    model.prev_embedding = arrays["prev_embedding"].astype(np.float64)
    model.net = net
    return model
