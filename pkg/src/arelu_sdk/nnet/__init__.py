# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Minimal trainable models: an NTK-parameterized feedforward network and a
tiny autoregressive sequence model, with reverse-mode gradients and SGD/Adam."""

from arelu_sdk.nnet.checkpoint import (
    load_network,
    load_sequence_model,
    save_network,
    save_sequence_model,
)
from arelu_sdk.nnet.datasets import (
    EOS,
    ClassificationData,
    CopyExample,
    CopyTaskConfig,
    GaussianTaskConfig,
    gaussian_clusters,
    token_copy,
)
from arelu_sdk.nnet.network import ACTIVATIONS, Gradients, TinyNetwork
from arelu_sdk.nnet.optim import SGD, Adam, OptimizerConfig, build_optimizer, optimizer_step
from arelu_sdk.nnet.sequence import (
    Hypothesis,
    SequenceModel,
    SequenceModelConfig,
    SequenceScore,
    decode,
    score_sequence,
    train_sequence_model,
)
from arelu_sdk.nnet.training import (
    EvalMetrics,
    TrainConfig,
    TrainingRecord,
    evaluate,
    read_jsonl,
    train,
    write_jsonl,
)

__all__ = [
    "ACTIVATIONS",
    "Adam",
    "ClassificationData",
    "CopyExample",
    "CopyTaskConfig",
    "EOS",
    "EvalMetrics",
    "GaussianTaskConfig",
    "Gradients",
    "Hypothesis",
    "OptimizerConfig",
    "SGD",
    "SequenceModel",
    "SequenceModelConfig",
    "SequenceScore",
    "TinyNetwork",
    "TrainConfig",
    "TrainingRecord",
    "build_optimizer",
    "decode",
    "evaluate",
    "gaussian_clusters",
    "load_network",
    "load_sequence_model",
    "optimizer_step",
    "read_jsonl",
    "save_network",
    "save_sequence_model",
    "score_sequence",
    "token_copy",
    "train",
    "train_sequence_model",
    "write_jsonl",
]
