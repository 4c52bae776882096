"""Strict JSON config files for models, hardware and precisions.

Each file is a JSON object with a top-level ``kind`` of ``model``,
``hardware`` or ``precision``. Unknown keys are rejected with a suggestion,
missing optional keys take the defaults of the dataclasses in
:mod:`edgecost.core`. The shipped presets use exactly the same schema.
"""

from __future__ import annotations

import difflib
import json
from dataclasses import MISSING, fields
from pathlib import Path
from typing import Any, Union

from .core import HardwareConfig, ModelConfig, PrecisionSpec
from .errors import ConfigError

Config = Union[ModelConfig, HardwareConfig, PrecisionSpec]

KINDS: dict[str, type] = {"model": ModelConfig, "hardware": HardwareConfig, "precision": PrecisionSpec}
KIND_OF = {cls: kind for kind, cls in KINDS.items()}
# Keys allowed in a file besides the dataclass fields.
EXTRA_KEYS = ("kind", "schema_version")
CONFIG_SCHEMA_VERSION = 1


def _schema(cls) -> tuple[list[str], list[str]]:
    required, optional = [], []
    for f in fields(cls):
        has_default = f.default is not MISSING or f.default_factory is not MISSING
        (optional if has_default else required).append(f.name)
    return required, optional


def _line_of(text: str | None, key: str) -> str:
    if not text:
        return ""
    needle = json.dumps(key)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return f"line {lineno}: "
    return ""


def from_dict(data: dict[str, Any], text: str | None = None) -> Config:
    """Validate a decoded config mapping and build the matching dataclass."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"{_line_of(text, 'kind')}kind must be one of {sorted(KINDS)}, got {kind!r}", field="kind")
    cls = KINDS[kind]
    required, optional = _schema(cls)
    allowed = required + optional + list(EXTRA_KEYS)
    for key in data:
        if key not in allowed:
            hint = difflib.get_close_matches(key, allowed, n=1)
            suggestion = f"; did you mean {hint[0]!r}?" if hint else ""
            raise ConfigError(f"{_line_of(text, key)}unknown key {key!r} in {kind} config{suggestion}", field=key)
    missing = [k for k in required if k not in data]
    if missing:
        raise ConfigError(f"missing required key(s) {missing} in {kind} config", field=missing[0])
    version = data.get("schema_version", CONFIG_SCHEMA_VERSION)
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}", field="schema_version")
    kwargs = {k: v for k, v in data.items() if k not in EXTRA_KEYS}
    if kind == "hardware":
        if "assumed" in kwargs:
            if not isinstance(kwargs["assumed"], list):
                raise ConfigError("must be a list of field names", field="assumed")
            kwargs["assumed"] = tuple(kwargs["assumed"])
        for key in ("peak_flops_by_precision", "metadata"):
            if key in kwargs and not isinstance(kwargs[key], dict):
                raise ConfigError("must be a JSON object", field=key)
    for key in ("name", "notes", "provenance"):
        if key in kwargs and not isinstance(kwargs[key], str):
            raise ConfigError("must be a string", field=key)
    try:
        return cls(**kwargs)
    except ConfigError as exc:
        if exc.field and text:
            raise ConfigError(f"{_line_of(text, exc.field)}{exc.message}", field=exc.field) from None
        raise


def parse_text(text: str, source: str = "<inline>") -> Config:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_dict(data, text)


def parse_config(source: str | Path) -> Config:
    """Parse a config from a file path or from inline JSON text."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return parse_text(source)
    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_text(path.read_text(encoding="utf-8"), source=str(path))


def to_dict(cfg: Config) -> dict[str, Any]:
    """Serialize a config to the file schema; ``from_dict`` inverts it."""
    out: dict[str, Any] = {"kind": KIND_OF[type(cfg)]}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if f.name == "assumed":
            value = list(value)
        elif f.name in ("peak_flops_by_precision", "metadata"):
            value = dict(sorted(value.items()))
        out[f.name] = value
    return out


def dumps(cfg: Config) -> str:
    return json.dumps(to_dict(cfg), indent=2) + "\n"
