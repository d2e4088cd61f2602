# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Run configuration for CLI commands: ``key=value`` files, flag overrides, manifests.

Precedence is command defaults < config file < command-line flags.  Every
command requires ``seed``; its absence is reported together with any other
missing key.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path
from typing import Any, Callable, Mapping

from arelu_sdk.common.errors import ConfigError
from arelu_sdk.common.logging_config import get_logger

__all__ = [
    "REQUIRED",
    "Key",
    "parse_config_file",
    "resolve_config",
    "parse_float_list",
    "parse_int_list",
    "parse_str_list",
    "RunDirectory",
]

logger = get_logger(__name__)


class _Required:
    def __repr__(self) -> str:
        return "REQUIRED"


REQUIRED: Any = _Required()


@dataclasses.dataclass(frozen=True)
class Key:
    """One configuration key: parser for string values plus its default."""

    parse: Callable[[str], Any]
    default: Any = REQUIRED


def parse_float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(v) for v in raw.split(",") if v.strip())


def parse_int_list(raw: str) -> tuple[int, ...]:
    return tuple(int(v) for v in raw.split(",") if v.strip())


def parse_str_list(raw: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in raw.split(",") if v.strip())


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read ``key=value`` lines; blank lines and ``#`` comments are skipped.

    Keys are normalized so ``per-class`` and ``per_class`` are the same key.

    Raises:
        ConfigError: a line without ``=`` or with an empty key.
    """
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        values[key] = value.strip()
    return values


def resolve_config(
    schema: Mapping[str, Key],
    file_values: Mapping[str, str],
    flags: Mapping[str, Any],
) -> dict[str, Any]:
    """Merge defaults, file values and flags (``None`` flags are unset).

    Raises:
        ConfigError: unknown keys in the file, unparsable values, or missing required keys.
    """
    unknown = sorted(set(file_values) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}. Known keys: {sorted(schema)}")

    resolved: dict[str, Any] = {}
    missing: list[str] = []
    for name, key in schema.items():
        flag = flags.get(name)
        if flag is not None:
            raw: Any = flag
        elif name in file_values:
            raw = file_values[name]
        else:
            raw = key.default
        if raw is REQUIRED:
            missing.append(name)
            continue
        if isinstance(raw, str):
            try:
                raw = key.parse(raw)
            except ValueError as exc:
                raise ConfigError(f"invalid value for {name!r}: {raw!r} ({exc})") from exc
        resolved[name] = raw
    if missing:
        raise ConfigError(f"missing required config keys: {missing}")
    return resolved


def _jsonable(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


@dataclasses.dataclass
class RunDirectory:
    """``<root>/<command>-seed<seed>/`` plus its ``manifest.json``."""

    root: Path
    command: str
    seed: int
    outputs: dict[str, str] = dataclasses.field(default_factory=dict)

    @property
    def path(self) -> Path:
        return self.root / f"{self.command}-seed{self.seed}"

    def file(self, name: str) -> Path:
        self.path.mkdir(parents=True, exist_ok=True)
        return self.path / name

    def record(self, path: Path) -> None:
        """Register an output file; its SHA-256 goes into the manifest."""
        self.outputs[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()

    def write_manifest(self, config: Mapping[str, Any], **extra: Any) -> Path:
        from arelu_sdk import __version__

        manifest = {
            "command": self.command,
            "config": _jsonable(dict(config)),
            "seed": self.seed,
            "version": __version__,
            "outputs": dict(sorted(self.outputs.items())),
            **{k: _jsonable(v) for k, v in extra.items()},
        }
        path = self.file("manifest.json")
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info("run written", command=self.command, directory=str(self.path))
        return path
