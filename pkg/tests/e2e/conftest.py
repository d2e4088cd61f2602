# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

from arelu_sdk.calibration import calibrate_tau
from arelu_sdk.factory import OutputFactory
from arelu_sdk.heads import OutputHead
from arelu_sdk.nnet import (
    ClassificationData,
    GaussianTaskConfig,
    OptimizerConfig,
    TinyNetwork,
    TrainConfig,
    gaussian_clusters,
)

SEEDS = (0, 1, 2)

# Desk-scale budget for the 10-class Gaussian task
TRAIN_CONFIG = TrainConfig(optimizer=OptimizerConfig(learning_rate=1e-2, steps=300), log_every=25)
HIDDEN = 64


def gaussian_task(seed: int) -> ClassificationData:
    return gaussian_clusters(GaussianTaskConfig(seed=seed))


def build_net(data: ClassificationData, seed: int) -> TinyNetwork:
    return TinyNetwork((data.x.shape[1], HIDDEN, data.num_classes), seed=seed)


def build_head(kind: str, net: TinyNetwork, data: ClassificationData) -> OutputHead:
    """alpha-ReLU gets the threshold calibrated on the untrained network."""
    tau = calibrate_tau(net.forward(data.x)) if kind == "arelu" else 0.0
    return OutputFactory().create_head(kind, tau=tau)

