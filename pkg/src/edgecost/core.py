"""Model, hardware and precision types and the closed-form counting formulas.

All counts are exact: parameter and FLOP counts are Python integers, byte
quantities are :class:`fractions.Fraction` so that sub-byte formats such as
INT4 (half a byte per element) never get truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .errors import ConfigError

NAMED_PRECISION_BITS = {"FP32": 32, "FP16": 16, "INT8": 8, "INT4": 4}
PROVENANCE_FLAGS = ("paper", "assumed")


def _check_int(value: Any, name: str, minimum: int = 1) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"must be an integer, got {value!r}", field=name)
    if value < minimum:
        raise ConfigError(f"must be >= {minimum}, got {value}", field=name)


def _check_real(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"must be a number, got {value!r}", field=name)
    if not math.isfinite(value):
        raise ConfigError(f"must be finite, got {value!r}", field=name)
    return value


@dataclass(frozen=True)
class ModelConfig:
    name: str
    layers: int
    hidden_dim: int
    intermediate_dim: int
    attention_heads: int
    vocab_size: int
    seq_len: int = 2048
    # Public parameter count of the named checkpoint, for sanity checks only.
    nominal_params: int | None = None
    provenance: str = "assumed"
    notes: str = ""

    def __post_init__(self):
        for name in ("layers", "hidden_dim", "intermediate_dim", "attention_heads", "vocab_size", "seq_len"):
            _check_int(getattr(self, name), name)
        if self.hidden_dim % self.attention_heads:
            raise ConfigError(
                f"hidden_dim {self.hidden_dim} is not divisible by attention_heads {self.attention_heads}",
                field="attention_heads",
            )
        if self.nominal_params is not None:
            _check_int(self.nominal_params, "nominal_params")
        if self.provenance not in PROVENANCE_FLAGS:
            raise ConfigError(f"must be one of {PROVENANCE_FLAGS}", field="provenance")

    @property
    def head_dim(self) -> int:
        return self.hidden_dim // self.attention_heads


@dataclass(frozen=True)
class PrecisionSpec:
    name: str
    bits_per_element: int
    provenance: str = "paper"

    def __post_init__(self):
        _check_int(self.bits_per_element, "bits_per_element")
        expected = NAMED_PRECISION_BITS.get(self.name)
        if expected is not None and self.bits_per_element != expected:
            raise ConfigError(
                f"{self.name} must have {expected} bits, got {self.bits_per_element}", field="bits_per_element"
            )
        if self.provenance not in PROVENANCE_FLAGS:
            raise ConfigError(f"must be one of {PROVENANCE_FLAGS}", field="provenance")

    @property
    def bytes_per_element(self) -> Fraction:
        return Fraction(self.bits_per_element, 8)


BANDWIDTH_FIELDS = ("peak_flops", "mem_bw", "storage_bw", "h2d_bw", "net_bw")
UTILIZATION_FIELDS = ("u_compute", "u_memory", "u_storage", "u_h2d", "u_net")
ENERGY_FIELDS = ("e_flop", "e_byte")


@dataclass(frozen=True)
class HardwareConfig:
    """Throughput, bandwidth, utilization and energy description of a device.

    Units: ``peak_flops`` in FLOP/s, every ``*_bw`` in bytes/s, ``e_flop`` in
    J/FLOP and ``e_byte`` in J/byte. ``peak_flops_by_precision`` optionally
    replaces ``peak_flops`` for specific precision names. ``assumed`` lists the
    fields whose values are estimates rather than published figures.
    """

    name: str
    peak_flops: float
    mem_bw: float
    storage_bw: float
    h2d_bw: float
    net_bw: float
    u_compute: float
    u_memory: float
    u_storage: float
    u_h2d: float
    u_net: float
    e_flop: float
    e_byte: float
    peak_flops_by_precision: Mapping[str, float] = field(default_factory=dict)
    metadata: Mapping[str, str] = field(default_factory=dict)
    assumed: tuple[str, ...] = ()
    provenance: str = "assumed"
    notes: str = ""

    def __post_init__(self):
        for name in BANDWIDTH_FIELDS:
            if _check_real(getattr(self, name), name) <= 0:
                raise ConfigError("must be > 0", field=name)
        for name in UTILIZATION_FIELDS:
            value = _check_real(getattr(self, name), name)
            if not 0 < value <= 1:
                raise ConfigError(f"utilization must be in (0,1], got {value}", field=name)
        for name in ENERGY_FIELDS:
            if _check_real(getattr(self, name), name) < 0:
                raise ConfigError("must be >= 0", field=name)
        for prec, value in self.peak_flops_by_precision.items():
            key = f"peak_flops_by_precision.{prec}"
            if _check_real(value, key) <= 0:
                raise ConfigError("must be > 0", field=key)
        known = set(BANDWIDTH_FIELDS + UTILIZATION_FIELDS + ENERGY_FIELDS + ("peak_flops_by_precision",))
        for name in self.assumed:
            if name not in known:
                raise ConfigError(f"unknown field {name!r} listed as assumed", field="assumed")
        if self.provenance not in PROVENANCE_FLAGS:
            raise ConfigError(f"must be one of {PROVENANCE_FLAGS}", field="provenance")

    def effective_peak(self, precision: PrecisionSpec) -> float:
        return self.peak_flops_by_precision.get(precision.name, self.peak_flops)


@dataclass(frozen=True)
class MemoryFootprint:
    weights: Fraction
    activations: Fraction
    kv_cache: Fraction

    @property
    def total(self) -> Fraction:
        return self.weights + self.activations + self.kv_cache


def param_count(m: ModelConfig) -> int:
    """Weights of the four attention projections, two MLP matrices and both embeddings."""
    L, H, I, V = m.layers, m.hidden_dim, m.intermediate_dim, m.vocab_size
    return L * (4 * H * H) + L * (2 * H * I) + 2 * V * H


def flops_per_token(m: ModelConfig) -> int:
    L, H, I, S = m.layers, m.hidden_dim, m.intermediate_dim, m.seq_len
    # 4HI and 4IH are the up and down projections; kept as two terms on purpose.
    return L * (6 * H * H + 4 * H * S + 4 * H * I + 4 * I * H + 9 * H)


def memory_breakdown(m: ModelConfig, p: PrecisionSpec) -> MemoryFootprint:
    B = p.bytes_per_element
    S, H, L = m.seq_len, m.hidden_dim, m.layers
    return MemoryFootprint(
        weights=param_count(m) * B,
        activations=S * H * B,
        kv_cache=2 * L * S * H * B,
    )


def memory_footprint(m: ModelConfig, p: PrecisionSpec) -> Fraction:
    """Total bytes of weights, full-sequence activations and the KV cache."""
    return memory_breakdown(m, p).total


def arithmetic_intensity(m: ModelConfig, p: PrecisionSpec) -> float:
    return float(Fraction(flops_per_token(m)) / memory_footprint(m, p))
