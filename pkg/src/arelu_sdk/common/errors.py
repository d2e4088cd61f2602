# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Exception hierarchy shared by every arelu-sdk module.

Each concrete error also derives from the builtin it specializes, so callers
that only know ``ValueError``/``IndexError`` keep working.
"""

from __future__ import annotations

__all__ = [
    "AReluError",
    "InputDomainError",
    "ConfigError",
    "ShapeError",
    "LabelIndexError",
]


class AReluError(Exception):
    """Base class for all errors raised by arelu-sdk."""


class InputDomainError(AReluError, ValueError):
    """Input values outside the accepted domain (NaN/Inf logits, empty inputs)."""


class ConfigError(AReluError, ValueError):
    """Invalid configuration: entropic index, threshold, kind, learning rate, ..."""


class ShapeError(AReluError, ValueError):
    """Array dimensions do not line up."""


class LabelIndexError(AReluError, IndexError):
    """Target label outside ``[0, d)``."""
