# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Desk-scale experiments: sparsity, empty-sequence preference, threshold sweep, NTK dynamics."""

from arelu_sdk.experiments.empty_sequence import (
    EmptySequenceConfig,
    EmptySequenceResult,
    empty_sequence_rate,
    run_empty_sequence,
    write_empty_sequence_csv,
)
from arelu_sdk.experiments.ntk import (
    DynamicsReport,
    KernelMatrix,
    WidthsReport,
    dynamics_check,
    dynamics_over_widths,
    empirical_ntk,
    ntk_dataset,
    write_ntk_csv,
)
from arelu_sdk.experiments.sparsity import (
    SparsityStats,
    run_sparsity,
    sparsity_from_network,
    sparsity_histogram,
    write_histogram_csv,
    write_sparsity_csv,
)
from arelu_sdk.experiments.tau_sweep import (
    DEFAULT_TAUS,
    TauCurve,
    accuracy_band,
    tau_sweep,
    write_tau_curves_csv,
    write_tau_final_csv,
)

__all__ = [
    "DEFAULT_TAUS",
    "DynamicsReport",
    "EmptySequenceConfig",
    "EmptySequenceResult",
    "KernelMatrix",
    "SparsityStats",
    "TauCurve",
    "WidthsReport",
    "accuracy_band",
    "dynamics_check",
    "dynamics_over_widths",
    "empirical_ntk",
    "empty_sequence_rate",
    "ntk_dataset",
    "run_empty_sequence",
    "run_sparsity",
    "sparsity_from_network",
    "sparsity_histogram",
    "tau_sweep",
    "write_empty_sequence_csv",
    "write_histogram_csv",
    "write_ntk_csv",
    "write_sparsity_csv",
    "write_tau_curves_csv",
    "write_tau_final_csv",
]
