"""Shipped device, model and precision presets.

Presets live as JSON files under ``presets/data`` in the same schema that
user config files use, so any of them can be copied and edited. Every entry
has a provenance flag: ``paper`` when its values come from the published
experimental setup, ``assumed`` when they are public or estimated figures
that should be checked before being trusted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..config import from_dict
from ..core import HardwareConfig, ModelConfig, PrecisionSpec
from ..errors import UnknownPresetError

_GROUPS = {"devices": HardwareConfig, "models": ModelConfig, "precisions": PrecisionSpec}
_KIND_LABEL = {"devices": "device", "models": "model", "precisions": "precision"}


@dataclass(frozen=True)
class PresetCatalog:
    devices: dict[str, HardwareConfig]
    models: dict[str, ModelConfig]
    precisions: dict[str, PrecisionSpec]

    def group(self, name: str) -> dict:
        return getattr(self, name)


def _load_group(group: str) -> dict:
    root = resources.files(__package__).joinpath("data", group)
    entries = {}
    for item in sorted(root.iterdir(), key=lambda p: p.name):
        if not item.name.endswith(".json"):
            continue
        text = item.read_text(encoding="utf-8")
        cfg = from_dict(json.loads(text), text)
        if not isinstance(cfg, _GROUPS[group]):
            raise TypeError(f"{item.name} is not a {_KIND_LABEL[group]} preset")
        entries[cfg.name] = cfg
    return entries


@lru_cache(maxsize=None)
def catalog() -> PresetCatalog:
    return PresetCatalog(**{group: _load_group(group) for group in _GROUPS})


def _lookup(group: str, name: str):
    entries = catalog().group(group)
    try:
        return entries[name]
    except KeyError:
        raise UnknownPresetError(_KIND_LABEL[group], name, sorted(entries)) from None


def load_device_preset(name: str) -> HardwareConfig:
    return _lookup("devices", name)


def load_model_preset(name: str) -> ModelConfig:
    return _lookup("models", name)


def load_precision_preset(name: str) -> PrecisionSpec:
    return _lookup("precisions", name)


def list_presets() -> dict[str, list[dict[str, str]]]:
    """Alphabetical listing of every preset with its provenance flag."""
    out = {}
    for group in _GROUPS:
        entries = catalog().group(group)
        out[group] = [{"name": name, "provenance": entries[name].provenance} for name in sorted(entries)]
    return out


def format_listing() -> str:
    lines = []
    for group, entries in list_presets().items():
        lines.append(f"{group}:")
        lines.extend(f"  {e['name']:<24} [{e['provenance']}]" for e in entries)
    return "\n".join(lines) + "\n"
