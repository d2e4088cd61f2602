# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for the NTK-parameterized feedforward network."""

import numpy as np
import pytest

from arelu_sdk.common.errors import ConfigError, ShapeError
from arelu_sdk.factory import OutputFactory
from arelu_sdk.losses import reduce_mean
from arelu_sdk.nnet import TinyNetwork
from arelu_sdk.nnet.checkpoint import load_network, save_network
from arelu_sdk.transforms import softmax

KINDS = ["softmax", "sparsemax", "entmax_sorted_15", "entmax_bisect", "arelu"]


def _reference_forward(net: TinyNetwork, x: np.ndarray) -> np.ndarray:
    h = x
    for k, w in enumerate(net.weights):
        z = w @ h / np.sqrt(w.shape[1])
        h = np.tanh(z) if k < net.depth - 1 else z
    return h


def _mean_loss(net: TinyNetwork, x, y, head) -> float:
    return reduce_mean(head.loss(net.forward(x), y)).value


# ---------------------------------------------------------------------------
# Forward
# ---------------------------------------------------------------------------


class TestForward:
    def test_zero_input_gives_zero_logits(self):
        net = TinyNetwork((5, 16, 16, 4), seed=3)
        np.testing.assert_array_equal(net.forward(np.zeros(5)), np.zeros(4))

    def test_scaled_identity_is_identity(self):
        n = 6
        net = TinyNetwork((n, n), weights=[np.sqrt(n) * np.eye(n)])
        x = np.random.default_rng(0).standard_normal(n)
        np.testing.assert_allclose(net.forward(x), x, atol=1e-12)

    def test_matches_straight_line_recursion(self):
        net = TinyNetwork((4, 7, 5, 3), activation="tanh", seed=1)
        x = np.random.default_rng(1).standard_normal(4)
        np.testing.assert_allclose(net.forward(x), _reference_forward(net, x), atol=1e-12)

    def test_batch_matches_rows(self):
        net = TinyNetwork((4, 8, 3), seed=2)
        x = np.random.default_rng(2).standard_normal((5, 4))
        batch = net.forward(x)
        for i in range(5):
            np.testing.assert_allclose(batch[i], net.forward(x[i]), atol=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            TinyNetwork((4, 3)).forward(np.zeros(5))

    def test_unknown_activation(self):
        with pytest.raises(ConfigError, match="Available"):
            TinyNetwork((4, 3), activation="swish")

    def test_initial_statistics_stable_across_widths(self):
        x = np.random.default_rng(3).standard_normal((200, 10))
        variances = [
            TinyNetwork((10, width, 5), seed=4).forward(x).var() for width in (256, 512, 1024)
        ]
        assert max(variances) / min(variances) < 2.0
        for width in (256, 1024):
            assert abs(TinyNetwork((10, width, 5), seed=4).forward(x).mean()) < 1.0


# ---------------------------------------------------------------------------
# Backward
# ---------------------------------------------------------------------------


class TestBackward:
    @pytest.mark.parametrize("kind", KINDS)
    def test_matches_finite_differences(self, kind):
        head = OutputFactory().create_head(kind, tau=0.1)
        net = TinyNetwork((3, 6, 6, 4), activation="tanh", seed=5)
        assert net.num_parameters <= 500
        rng = np.random.default_rng(5)
        x = rng.standard_normal((7, 3)) * 2
        y = rng.integers(4, size=7)
        grads = net.backward(x, y, head).weights

        eps = 1e-5
        for w, g in zip(net.weights, grads):
            fd = np.empty_like(w)
            for idx in np.ndindex(w.shape):
                orig = w[idx]
                w[idx] = orig + eps
                up = _mean_loss(net, x, y, head)
                w[idx] = orig - eps
                down = _mean_loss(net, x, y, head)
                w[idx] = orig
                fd[idx] = (up - down) / (2 * eps)
            np.testing.assert_allclose(g, fd, rtol=1e-4, atol=1e-6)

    def test_linear_cross_entropy_outer_product(self):
        net = TinyNetwork((4, 3), activation="identity", seed=6)
        x = np.random.default_rng(6).standard_normal(4)
        head = OutputFactory().create_head("softmax")
        grad = net.backward(x, 1, head).weights[0]
        expected = np.outer(softmax(net.forward(x)).values - np.eye(3)[1], x) / np.sqrt(4)
        np.testing.assert_allclose(grad, expected, atol=1e-12)

    def test_zero_gradient_at_loss_minimum(self):
        n = 4
        net = TinyNetwork((n, n), weights=[np.sqrt(n) * np.eye(n)])
        head = OutputFactory().create_head("arelu", alpha=1.5, tau=0.0)
        x = 2.0 * np.eye(n)
        grads = net.backward(x, np.arange(n), head)
        assert grads.loss == 0.0
        assert all(np.all(g == 0.0) for g in grads.weights)

    def test_input_gradient(self):
        net = TinyNetwork((3, 5, 2), activation="tanh", seed=7)
        head = OutputFactory().create_head("softmax")
        x = np.array([0.3, -0.2, 0.9])
        g = net.backward(x, 0, head, want_input=True).input
        eps = 1e-6

        def loss_at(v):
            return head.loss(net.forward(v), 0).value

        fd = np.array([loss_at(x + eps * e) - loss_at(x - eps * e) for e in np.eye(3)]) / (2 * eps)
        np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-8)


# ---------------------------------------------------------------------------
# Jacobian and parameters
# ---------------------------------------------------------------------------


class TestJacobian:
    def test_matches_finite_differences(self):
        net = TinyNetwork((3, 5, 2), activation="tanh", seed=8)
        x = np.array([0.5, -1.0, 0.25])
        jac = net.jacobian(x)
        theta = net.flat_parameters()
        eps = 1e-6
        fd = np.empty_like(jac)
        for j in range(theta.size):
            step = np.zeros_like(theta)
            step[j] = eps
            net.set_flat_parameters(theta + step)
            up = net.forward(x)
            net.set_flat_parameters(theta - step)
            down = net.forward(x)
            fd[:, j] = (up - down) / (2 * eps)
        net.set_flat_parameters(theta)
        np.testing.assert_allclose(jac, fd, rtol=1e-5, atol=1e-8)

    def test_layer_factors_rebuild_jacobian(self):
        net = TinyNetwork((3, 4, 4, 2), seed=9)
        x = np.array([1.0, 0.5, -0.5])
        deltas, inputs = net.layer_factors(x)
        blocks = [(d[:, :, None] * h[None, None, :]).reshape(2, -1) for d, h in zip(deltas, inputs)]
        np.testing.assert_allclose(np.concatenate(blocks, axis=1), net.jacobian(x), atol=1e-12)

    def test_jacobian_needs_single_input(self):
        with pytest.raises(ShapeError):
            TinyNetwork((3, 2)).jacobian(np.zeros((2, 3)))


def test_checkpoint_round_trip(tmp_path):
    net = TinyNetwork((4, 6, 3), activation="tanh", seed=10)
    path = save_network(net, tmp_path / "net")
    assert path.suffix == ".npz"
    loaded = load_network(path)
    assert loaded.widths == net.widths
    assert loaded.activation.name == "tanh"
    assert loaded.seed == 10
    x = np.random.default_rng(10).standard_normal(4)
    np.testing.assert_array_equal(loaded.forward(x), net.forward(x))
