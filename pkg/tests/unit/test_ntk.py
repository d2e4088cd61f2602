# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for the empirical tangent kernel and the dynamics check."""

import csv

import numpy as np
import pytest

from arelu_sdk.common.errors import ShapeError
from arelu_sdk.experiments.ntk import (
    NTK_CSV_HEADER,
    DynamicsReport,
    KernelMatrix,
    WidthsReport,
    dynamics_check,
    empirical_ntk,
    ntk_dataset,
    write_ntk_csv,
)
from arelu_sdk.factory import OutputFactory
from arelu_sdk.losses import reduce_mean
from arelu_sdk.nnet import ClassificationData, TinyNetwork


def _report(width: int, error: float, errors=None, kinked=None) -> DynamicsReport:
    relative_error = np.array([error, error] if errors is None else errors)
    return DynamicsReport(
        transform="arelu",
        width=width,
        eta=1e-3,
        steps=1,
        predicted=np.zeros((len(relative_error), 3)),
        observed=np.zeros((len(relative_error), 3)),
        cosine=np.linspace(1.0, 0.99, len(relative_error)),
        relative_error=relative_error,
        max_logit_change=0.0,
        kinked=None if kinked is None else np.array(kinked),
    )


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------


class TestKernel:
    @pytest.mark.parametrize("activation", ["relu", "tanh"])
    def test_symmetric_psd(self, activation):
        net = TinyNetwork((5, 32, 32, 4), activation=activation, seed=0)
        for x in np.random.default_rng(0).standard_normal((5, 5)):
            kernel = empirical_ntk(net, x)
            assert kernel.shape == (4, 4)
            assert kernel.is_symmetric_psd(), kernel.min_eigenvalue()

    def test_factors_match_explicit_jacobians(self):
        net = TinyNetwork((4, 16, 8, 3), activation="tanh", seed=1)
        rng = np.random.default_rng(1)
        x, x2 = rng.standard_normal(4), rng.standard_normal(4)
        factored = empirical_ntk(net, x, x2)
        explicit = empirical_ntk(net, x, x2, keep_jacobians=True)
        assert factored.jacobians is None
        assert explicit.jacobians is not None
        np.testing.assert_allclose(factored.entries, explicit.entries, atol=1e-10)

    def test_swapping_inputs_transposes(self):
        net = TinyNetwork((3, 12, 3), seed=2)
        rng = np.random.default_rng(2)
        x, x2 = rng.standard_normal(3), rng.standard_normal(3)
        np.testing.assert_allclose(
            empirical_ntk(net, x, x2).entries, empirical_ntk(net, x2, x).entries.T, atol=1e-12
        )

    def test_scalar_output_is_squared_gradient_norm(self):
        net = TinyNetwork((3, 10, 1), activation="tanh", seed=3)
        x = np.array([0.2, -0.4, 1.0])
        kernel = empirical_ntk(net, x)
        assert kernel.shape == (1, 1)
        assert kernel.entries[0, 0] == pytest.approx(float(np.sum(net.jacobian(x) ** 2)))

    def test_linear_model_kernel(self):
        # z = W x / sqrt(n): K(x, x') = (x . x' / n) I
        n = 5
        net = TinyNetwork((n, 3), activation="identity", seed=4)
        rng = np.random.default_rng(4)
        x, x2 = rng.standard_normal(n), rng.standard_normal(n)
        np.testing.assert_allclose(
            empirical_ntk(net, x, x2).entries, (x @ x2 / n) * np.eye(3), atol=1e-12
        )

    def test_batch_input_rejected(self):
        with pytest.raises(ShapeError):
            empirical_ntk(TinyNetwork((3, 2)), np.zeros((2, 3)))

    def test_not_square_is_not_psd(self):
        assert not KernelMatrix(entries=np.zeros((2, 3))).is_symmetric_psd()

    def test_negative_eigenvalue_detected(self):
        assert not KernelMatrix(entries=np.diag([1.0, -0.5])).is_symmetric_psd()


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------


class TestDynamics:
    def test_no_motion_at_loss_minimum(self):
        n = 4
        net = TinyNetwork((n, n), weights=[np.sqrt(n) * np.eye(n)])
        data = ClassificationData(x=2.0 * np.eye(n), y=np.arange(n))
        head = OutputFactory().create_head("arelu", alpha=1.5, tau=0.0)
        report = dynamics_check(net, data, head, eta=1e-3)
        assert report.max_logit_change == 0.0
        np.testing.assert_array_equal(report.predicted, 0.0)
        np.testing.assert_array_equal(report.cosine, 1.0)

    def test_prediction_is_explicit_kernel_sum(self):
        net = TinyNetwork((4, 16, 3), activation="tanh", seed=5)
        data = ntk_dataset(n=6, dim=4, n_classes=3, seed=5)
        head = OutputFactory().create_head("sparsemax")
        report = dynamics_check(net, data, head, eta=1e-5)

        residual = reduce_mean(head.loss(net.forward(data.x), data.y)).gradient
        expected = np.zeros((6, 3))
        for i, p in enumerate(data.x):
            for j, xj in enumerate(data.x):
                expected[i] -= empirical_ntk(net, p, xj).entries @ residual[j]
        np.testing.assert_allclose(report.predicted, expected, atol=1e-10)

    @pytest.mark.parametrize("kind", ["softmax", "entmax15", "arelu"])
    def test_small_step_agrees_with_kernel(self, kind):
        net = TinyNetwork((16, 256, 10), seed=6)
        data = ntk_dataset(n=16, seed=6)
        head = OutputFactory().create_head(kind, tau=0.1)
        report = dynamics_check(net, data, head, eta=1e-4)
        assert report.min_cosine > 0.99, report.cosine
        assert report.width == 256

    def test_network_is_not_modified(self):
        net = TinyNetwork((16, 32, 10), seed=7)
        before = [w.copy() for w in net.weights]
        dynamics_check(net, ntk_dataset(n=8, seed=7), OutputFactory().create_head("softmax"))
        for w, b in zip(net.weights, before):
            np.testing.assert_array_equal(w, b)

    def test_custom_queries(self):
        net = TinyNetwork((16, 32, 10), seed=8)
        queries = np.random.default_rng(8).standard_normal((3, 16))
        report = dynamics_check(
            net, ntk_dataset(n=8, seed=8), OutputFactory().create_head("softmax"), queries=queries
        )
        assert report.predicted.shape == (3, 10)
        assert report.cosine.shape == (3,)

    def test_monotone_orders_by_width(self):
        assert WidthsReport([_report(2048, 0.1), _report(1024, 0.2), _report(4096, 0.05)]).monotone
        assert not WidthsReport([_report(1024, 0.1), _report(2048, 0.2)]).monotone

    def test_monotone_ignores_a_single_outlier_query(self):
        # one query at width 2048 dominates the mean but not the median
        reports = [
            _report(1024, 0.0, errors=[3.1e-6, 3.0e-6, 2.9e-6]),
            _report(2048, 0.0, errors=[1.4e-6, 1.3e-6, 1.25e-3]),
            _report(4096, 0.0, errors=[5.6e-7, 5.5e-7, 1.7e-4]),
        ]
        assert reports[1].mean_relative_error > reports[0].mean_relative_error
        assert WidthsReport(reports).monotone

    def test_kinked_queries_leave_the_summary(self):
        report = _report(1024, 0.0, errors=[1e-6, 2e-6, 0.5], kinked=[False, False, True])
        assert report.num_kinked == 1
        assert report.mean_relative_error == pytest.approx(1.5e-6)
        assert report.median_relative_error == pytest.approx(1.5e-6)
        assert report.min_cosine == pytest.approx(0.995)

    def test_all_kinked_keeps_every_query(self):
        report = _report(1024, 0.0, errors=[1e-6, 3e-6], kinked=[True, True])
        assert report.mean_relative_error == pytest.approx(2e-6)

    def test_relu_sign_flip_marks_query_kinked(self):
        # a single hidden unit just above zero, pushed below it by one large step
        net = TinyNetwork((1, 1, 2), weights=[np.array([[1e-3]]), np.array([[-1.0], [1.0]])])
        data = ClassificationData(x=np.array([[1.0]]), y=np.array([0]))
        report = dynamics_check(net, data, OutputFactory().create_head("softmax"), eta=1.0)
        assert report.kinked.tolist() == [True]
        assert report.num_kinked == 1

    def test_smooth_activation_never_kinks(self):
        net = TinyNetwork((16, 32, 10), activation="tanh", seed=9)
        report = dynamics_check(
            net, ntk_dataset(n=8, seed=9), OutputFactory().create_head("arelu"), eta=1.0
        )
        assert not report.kinked.any()


def test_ntk_dataset_size():
    data = ntk_dataset(n=32, dim=16, n_classes=10)
    assert data.x.shape == (32, 16)
    assert len(data) == 32


def test_write_csv(tmp_path):
    path = write_ntk_csv([_report(1024, 0.1)], tmp_path / "ntk.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == NTK_CSV_HEADER
    assert len(rows) == 3
    assert rows[1][:3] == ["arelu", "1024", "0"]
    assert rows[1][-1] == "0"
