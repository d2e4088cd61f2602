# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

from arelu_sdk.common.errors import (
    AReluError,
    ConfigError,
    InputDomainError,
    LabelIndexError,
    ShapeError,
)
from arelu_sdk.common.logging_config import configure_logging, get_logger

__all__ = [
    "AReluError",
    "ConfigError",
    "InputDomainError",
    "LabelIndexError",
    "ShapeError",
    "configure_logging",
    "get_logger",
]
