# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Shared transform types: kind identifiers, configuration, result containers.

This module is the single source of truth for transform identifiers used by
heads, the factory and the CLI.  Use :func:`normalize_kind` wherever a raw
string from a flag or a config file has to be resolved to its canonical form.
"""

from __future__ import annotations

import dataclasses
from typing import Any

import numpy as np
import numpy.typing as npt

from arelu_sdk.common.errors import ConfigError, InputDomainError

__all__ = [
    "DEFAULT_ALPHA",
    "TransformKind",
    "TransformConfig",
    "WeightVector",
    "ThresholdResult",
    "normalize_kind",
    "as_logits",
    "positive_power",
]

DEFAULT_ALPHA = 1.5
"""Middle ground between softmax (alpha -> 1) and sparsemax (alpha = 2)."""

FloatArray = npt.NDArray[np.floating[Any]]


# ---------------------------------------------------------------------------
# Transform kinds
# ---------------------------------------------------------------------------


class TransformKind:
    """Valid transform identifiers.

    ================================  ======================
    Alias                             Resolves to
    ================================  ======================
    ``"entmax15"``, ``"1.5-entmax"``  ``"entmax_sorted_15"``
    ``"entmax"``                      ``"entmax_bisect"``
    ``"relu"``, ``"1.5-relu"``        ``"arelu"``
    ================================  ======================
    """

    SOFTMAX: str = "softmax"
    SPARSEMAX: str = "sparsemax"
    ENTMAX_SORTED_15: str = "entmax_sorted_15"
    """Exact 1.5-entmax via descending sort."""

    ENTMAX_BISECT: str = "entmax_bisect"
    """General alpha-entmax via threshold bisection."""

    ARELU: str = "arelu"
    """alpha-ReLU: constant threshold, unnormalized output."""

    @classmethod
    def all_kinds(cls) -> set[str]:
        """Canonical kinds plus aliases."""
        return set(KIND_ALIASES) | CANONICAL_KINDS

    @classmethod
    def sparse_kinds(cls) -> frozenset[str]:
        return CANONICAL_KINDS - {cls.SOFTMAX}


CANONICAL_KINDS: frozenset[str] = frozenset(
    {"softmax", "sparsemax", "entmax_sorted_15", "entmax_bisect", "arelu"}
)

KIND_ALIASES: dict[str, str] = {
    "entmax15": "entmax_sorted_15",
    "1.5-entmax": "entmax_sorted_15",
    "entmax": "entmax_bisect",
    "relu": "arelu",
    "1.5-relu": "arelu",
    "alpha-relu": "arelu",
}


def normalize_kind(raw: str) -> str:
    """Normalise a transform identifier to its canonical form.

    Raises:
        ConfigError: if *raw* is neither a canonical kind nor an alias.
    """
    key = raw.strip().lower()
    key = KIND_ALIASES.get(key, key)
    if key not in CANONICAL_KINDS:
        raise ConfigError(
            f"Unknown transform kind: {raw!r}. "
            f"Available kinds: {sorted(CANONICAL_KINDS)}"
        )
    return key


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class TransformConfig:
    """Transform selection plus its entropic index and threshold."""

    kind: str = TransformKind.ARELU
    """One of :class:`TransformKind` (aliases accepted)."""

    alpha: float = DEFAULT_ALPHA
    """Entropic index; must exceed 1 for sparse kinds, ignored for softmax."""

    tau: float = 0.0
    """Constant threshold used by alpha-ReLU only."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", normalize_kind(self.kind))
        if not np.isfinite(self.tau):
            raise ConfigError(f"tau must be finite, got {self.tau!r}")
        if self.kind == TransformKind.SOFTMAX:
            return
        if self.kind == TransformKind.SPARSEMAX:
            object.__setattr__(self, "alpha", 2.0)
        check_alpha(self.alpha)
        if self.kind == TransformKind.ENTMAX_SORTED_15 and self.alpha != 1.5:
            raise ConfigError(
                f"entmax_sorted_15 requires alpha = 1.5 exactly, got {self.alpha!r}"
            )


def check_alpha(alpha: float) -> float:
    """Return *alpha* as float, raising ``ConfigError`` unless it exceeds 1."""
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 1.0:
        raise ConfigError(f"alpha must be a finite number > 1, got {alpha!r}")
    return alpha


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights over the last axis of the input logits."""

    values: FloatArray
    normalized: bool
    """True for entmax-family outputs, whose rows sum to 1."""

    def __array__(self, dtype: Any = None, copy: bool | None = None) -> FloatArray:
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def __len__(self) -> int:
        return int(self.values.shape[-1])

    @property
    def dim(self) -> int:
        return int(self.values.shape[-1])

    @property
    def support(self) -> npt.NDArray[np.bool_]:
        """Mask of strictly positive entries."""
        return self.values > 0

    def zero_fraction(self) -> FloatArray | float:
        """Share of exactly-zero entries per row."""
        frac = np.mean(self.values == 0.0, axis=-1)
        return float(frac) if np.ndim(frac) == 0 else frac


@dataclasses.dataclass(frozen=True)
class ThresholdResult:
    """Normalized weights with the threshold that produced them."""

    weights: WeightVector
    threshold: FloatArray | float
    """Solves ``sum_j [(alpha-1) z_j - threshold]_+^(1/(alpha-1)) = 1`` per row."""


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def as_logits(z: npt.ArrayLike, dtype: Any = None) -> FloatArray:
    """Validate logits at the API boundary and return them as a float array.

    Floating inputs keep their precision (the benchmark's 32-bit mode relies on
    it); anything else becomes float64.

    Raises:
        InputDomainError: empty input, zero-size last axis, or non-finite entries.
    """
    arr = np.asarray(z, dtype=dtype)
    if not np.issubdtype(arr.dtype, np.floating):
        arr = arr.astype(np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape[-1] < 1 or arr.size == 0:
        raise InputDomainError(f"logits need dim >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputDomainError("logits contain NaN or Inf")
    return arr


def positive_power(x: FloatArray, exponent: float) -> FloatArray:
    """``[x]_+ ** exponent`` without touching non-positive bases.

    The clamp happens first; the power is then ``exp(exponent * ln x)`` on the
    strictly positive entries only.  Exponents 1 and 2 (alpha = 2 and 1.5)
    take a direct path.
    """
    if exponent == 1.0:
        return np.maximum(x, 0.0)
    if exponent == 2.0:
        out = np.maximum(x, 0.0)
        np.multiply(out, out, out=out)
        return out
    positive = x > 0
    out = np.zeros_like(x)
    np.log(x, out=out, where=positive)
    np.multiply(out, exponent, out=out)
    np.exp(out, out=out, where=positive)
    out[~positive] = 0.0
    return out
