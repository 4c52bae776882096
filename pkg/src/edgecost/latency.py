"""Per-stage latency estimates and their aggregation.

Every stage is ``bytes_or_flops / (peak * utilization)``. Numerators are
exact, denominators are the float products of the hardware description, and
the quotient is formed with :class:`~fractions.Fraction` before a single
rounding to ``float``. Scaling a numerator by a power of two therefore scales
the returned seconds by exactly the same factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .core import (
    HardwareConfig,
    ModelConfig,
    PrecisionSpec,
    flops_per_token,
    memory_footprint,
    param_count,
)
from .errors import ConfigError

AggregationMode = Literal["serial", "overlapped"]
AGGREGATION_MODES = ("serial", "overlapped")
STAGES = ("t_comp", "t_mem", "t_io", "t_h2d", "t_net")
# Weight loading happens once per session; the other stages recur per token.
PER_SESSION_STAGES = ("t_io", "t_h2d")


def _seconds(amount, throughput: float, utilization: float, what: str) -> float:
    rate = Fraction(throughput) * Fraction(utilization)
    if rate <= 0:
        raise ConfigError(f"effective {what} throughput must be > 0", field=what)
    return float(Fraction(amount) / rate)


def compute_latency(m: ModelConfig, hw: HardwareConfig, p: PrecisionSpec) -> float:
    return _seconds(flops_per_token(m), hw.effective_peak(p), hw.u_compute, "compute")


def memory_latency(m: ModelConfig, hw: HardwareConfig, p: PrecisionSpec) -> float:
    return _seconds(memory_footprint(m, p), hw.mem_bw, hw.u_memory, "memory")


def io_latency(m: ModelConfig, hw: HardwareConfig, p: PrecisionSpec) -> float:
    """Time to read the weights (not the full footprint) from storage."""
    return _seconds(param_count(m) * p.bytes_per_element, hw.storage_bw, hw.u_storage, "storage")


def h2d_latency(m: ModelConfig, hw: HardwareConfig, p: PrecisionSpec) -> float:
    return _seconds(param_count(m) * p.bytes_per_element, hw.h2d_bw, hw.u_h2d, "h2d")


def net_latency(m: ModelConfig, hw: HardwareConfig, p: PrecisionSpec) -> float:
    """Time to ship one KV shard of ``seq_len * hidden_dim`` elements."""
    return _seconds(m.seq_len * m.hidden_dim * p.bytes_per_element, hw.net_bw, hw.u_net, "network")


@dataclass(frozen=True)
class LatencyBreakdown:
    t_comp: float
    t_mem: float
    t_io: float
    t_h2d: float
    t_net: float
    t_total: float
    aggregation_mode: str = "serial"

    def stages(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in STAGES}

    def dominant_stage(self) -> str:
        stages = self.stages()
        return max(stages, key=stages.__getitem__)


def aggregate(t_comp, t_mem, t_io, t_h2d, t_net, mode: AggregationMode = "serial") -> float:
    if mode == "serial":
        return t_comp + t_mem + t_io + t_h2d + t_net
    if mode == "overlapped":
        return max(t_comp, t_mem) + max(t_io, t_h2d) + t_net
    raise ConfigError(f"unknown aggregation mode {mode!r}; expected one of {AGGREGATION_MODES}", field="mode")


def end_to_end(
    t_comp: float,
    t_mem: float,
    t_io: float,
    t_h2d: float,
    t_net: float,
    mode: AggregationMode = "serial",
) -> LatencyBreakdown:
    stages = (t_comp, t_mem, t_io, t_h2d, t_net)
    for name, value in zip(STAGES, stages):
        if value < 0:
            raise ConfigError(f"stage latency must be >= 0, got {value}", field=name)
    return LatencyBreakdown(*stages, t_total=aggregate(*stages, mode=mode), aggregation_mode=mode)


def latency_breakdown(
    m: ModelConfig, hw: HardwareConfig, p: PrecisionSpec, mode: AggregationMode = "serial"
) -> LatencyBreakdown:
    return end_to_end(
        compute_latency(m, hw, p),
        memory_latency(m, hw, p),
        io_latency(m, hw, p),
        h2d_latency(m, hw, p),
        net_latency(m, hw, p),
        mode=mode,
    )


def amortized_latency(b: LatencyBreakdown, tokens: int) -> float:
    """Per-token latency when the one-time weight load is spread over ``tokens``.

    This is a derived view; the headline ``t_total`` counts the weight load
    in full.
    """
    if tokens < 1:
        raise ConfigError("must be >= 1", field="tokens")
    per_token = {k: v for k, v in b.stages().items() if k not in PER_SESSION_STAGES}
    one_time = {k: v / tokens for k, v in b.stages().items() if k in PER_SESSION_STAGES}
    return aggregate(**per_token, **one_time, mode=b.aggregation_mode)


OPERATORS = ("attn_proj", "kv_matmul", "mlp", "layernorm_softmax")


@dataclass(frozen=True)
class OperatorCost:
    flops: int
    seconds: float


@dataclass(frozen=True)
class OperatorBreakdown:
    attn_proj: OperatorCost
    kv_matmul: OperatorCost
    mlp: OperatorCost
    layernorm_softmax: OperatorCost

    def items(self):
        return [(name, getattr(self, name)) for name in OPERATORS]

    @property
    def total_flops(self) -> int:
        return sum(cost.flops for _, cost in self.items())

    @property
    def total_seconds(self) -> float:
        return sum(cost.seconds for _, cost in self.items())


def operator_flops(m: ModelConfig) -> dict[str, int]:
    L, H, I, S = m.layers, m.hidden_dim, m.intermediate_dim, m.seq_len
    return {
        "attn_proj": L * 6 * H * H,
        "kv_matmul": L * 4 * H * S,
        "mlp": L * (4 * H * I + 4 * I * H),
        "layernorm_softmax": L * 9 * H,
    }


def operator_breakdown(m: ModelConfig, hw: HardwareConfig, p: PrecisionSpec) -> OperatorBreakdown:
    peak = hw.effective_peak(p)
    costs = {
        name: OperatorCost(flops, _seconds(flops, peak, hw.u_compute, "compute"))
        for name, flops in operator_flops(m).items()
    }
    return OperatorBreakdown(**costs)
