# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

from typing import Dict, Type

from arelu_sdk.common.errors import ConfigError
from arelu_sdk.common.logging_config import get_logger
from arelu_sdk.heads import (
    AReluHead,
    EntmaxBisectHead,
    EntmaxSortedHead,
    OutputHead,
    SoftmaxHead,
    SparsemaxHead,
)
from arelu_sdk.transforms.types import DEFAULT_ALPHA, TransformConfig, normalize_kind

logger = get_logger(__name__)


class OutputFactory:
    """Registry of output heads keyed by transform kind.

    **Quick Start**::

        factory = OutputFactory()
        factory.registered_heads()
        # ['softmax', 'sparsemax', 'entmax_sorted_15', 'entmax_bisect', 'arelu']

        head = factory.create_head("1.5-relu", tau=0.33)
        result = head.loss(logits, labels)

    Custom heads are plugged in with :meth:`register_head`; the registry key
    comes from the head class's ``KIND`` constant.
    """

    def __init__(self) -> None:
        self._head_registry: Dict[str, Type[OutputHead]] = {}
        self._register_wellknown_heads()

    # ------------------------------------------------------------------
    # Introspection
    # ------------------------------------------------------------------

    def registered_heads(self) -> list[str]:
        """Get the list of registered transform kinds."""
        return list(self._head_registry.keys())

    # ------------------------------------------------------------------
    # Creation
    # ------------------------------------------------------------------

    def create_head(
        self,
        kind: str,
        alpha: float = DEFAULT_ALPHA,
        tau: float = 0.0,
    ) -> OutputHead:
        """Create the head registered for *kind* (aliases accepted).

        Raises:
            ConfigError: If the kind is not registered or alpha/tau are invalid.
        """
        key = kind.strip().lower()
        head_class = self._head_registry.get(key)
        if head_class is None:
            try:
                head_class = self._head_registry.get(normalize_kind(key))
            except ConfigError:
                head_class = None
        if head_class is None:
            raise ConfigError(
                f"No output head registered for kind: {kind!r}. "
                f"Available kinds: {self.registered_heads()}"
            )
        head = head_class(alpha=alpha, tau=tau)
        logger.debug("created output head", kind=head.KIND, alpha=head.alpha, tau=head.tau)
        return head

    def create_from_config(self, config: TransformConfig) -> OutputHead:
        return self.create_head(config.kind, alpha=config.alpha, tau=config.tau)

    # ------------------------------------------------------------------
    # Registration
    # ------------------------------------------------------------------

    def _register_wellknown_heads(self) -> None:
        for head_class in (
            SoftmaxHead,
            SparsemaxHead,
            EntmaxSortedHead,
            EntmaxBisectHead,
            AReluHead,
        ):
            self._head_registry[head_class.KIND] = head_class

    def register_head(self, head_class: Type[OutputHead]) -> None:
        """Register a custom head.

        Args:
            head_class: An ``OutputHead`` subclass with a ``KIND`` class attribute.
        """
        self._head_registry[head_class.KIND] = head_class
