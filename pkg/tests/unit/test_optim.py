# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pytest

from arelu_sdk.common.errors import ConfigError, ShapeError
from arelu_sdk.nnet import TinyNetwork
from arelu_sdk.nnet.optim import SGD, Adam, OptimizerConfig, build_optimizer, optimizer_step


def test_sgd_unit_step():
    net = TinyNetwork((2, 2), weights=[np.array([[1.0, 2.0], [3.0, 4.0]])])
    grad = np.array([[0.5, 0.5], [-1.0, 0.0]])
    optimizer_step(net, [grad], OptimizerConfig(kind="sgd", learning_rate=1.0))
    np.testing.assert_array_equal(net.weights[0], [[0.5, 1.5], [4.0, 4.0]])


@pytest.mark.parametrize("kind", ["sgd", "adam"])
def test_zero_gradient_leaves_parameters(kind):
    w = np.arange(6.0).reshape(2, 3)
    params = [w.copy()]
    build_optimizer(OptimizerConfig(kind=kind)).step(params, [np.zeros((2, 3))])
    np.testing.assert_array_equal(params[0], w)


def test_adam_two_steps_by_hand():
    cfg = OptimizerConfig(kind="adam", learning_rate=0.1, beta1=0.9, beta2=0.998, eps=1e-8)
    opt = Adam(cfg)
    p = [np.array([1.0])]
    g1, g2 = np.array([0.5]), np.array([-1.0])
    opt.step(p, [g1])
    opt.step(p, [g2])

    m = v = 0.0
    theta = 1.0
    for t, g in enumerate((0.5, -1.0), start=1):
        m = 0.9 * m + 0.1 * g
        v = 0.998 * v + 0.002 * g * g
        theta -= 0.1 * (m / (1 - 0.9**t)) / (np.sqrt(v / (1 - 0.998**t)) + 1e-8)
    assert p[0][0] == pytest.approx(theta, abs=1e-12)
    assert opt.t == 2


def test_first_adam_step_moves_by_learning_rate():
    p = [np.array([0.0, 0.0])]
    Adam(OptimizerConfig(learning_rate=0.01)).step(p, [np.array([3.0, -0.2])])
    np.testing.assert_allclose(p[0], [-0.01, 0.01], atol=1e-8)


@pytest.mark.parametrize("lr", [0.0, -1e-3, float("nan")])
def test_learning_rate_must_be_positive(lr):
    with pytest.raises(ConfigError):
        OptimizerConfig(learning_rate=lr)


def test_unknown_optimizer():
    with pytest.raises(ConfigError, match="Available"):
        OptimizerConfig(kind="rmsprop")  # type: ignore[arg-type]


def test_shape_mismatch():
    opt = SGD(OptimizerConfig(kind="sgd"))
    with pytest.raises(ShapeError):
        opt.step([np.zeros((2, 2))], [np.zeros((2, 3))])
    with pytest.raises(ShapeError):
        opt.step([np.zeros(2)], [])
