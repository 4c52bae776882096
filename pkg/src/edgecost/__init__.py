"""Analytical performance model for small transformer LLMs on edge devices.

The profiler turns a model shape, a hardware description and a numeric
precision into parameter and FLOP counts, memory footprint, per-stage
latency, arithmetic intensity and energy per token. :mod:`edgecost.quant`
simulates the integer quantization schemes behind the precision axis.
"""

from .core import (
    HardwareConfig,
    MemoryFootprint,
    ModelConfig,
    PrecisionSpec,
    arithmetic_intensity,
    flops_per_token,
    memory_breakdown,
    memory_footprint,
    param_count,
)
from .energy import EnergyEstimate, energy_per_token
from .errors import ConfigError, EdgeCostError, InternalInvariantError, UnknownPresetError
from .latency import (
    LatencyBreakdown,
    OperatorBreakdown,
    compute_latency,
    end_to_end,
    h2d_latency,
    io_latency,
    latency_breakdown,
    memory_latency,
    net_latency,
    operator_breakdown,
)
from .presets import list_presets, load_device_preset, load_model_preset, load_precision_preset
from .report import ProfileReport, SweepResult, emit_plot_data, render, run_profile, run_sweep

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "EdgeCostError",
    "EnergyEstimate",
    "HardwareConfig",
    "InternalInvariantError",
    "LatencyBreakdown",
    "MemoryFootprint",
    "ModelConfig",
    "OperatorBreakdown",
    "PrecisionSpec",
    "ProfileReport",
    "SweepResult",
    "UnknownPresetError",
    "arithmetic_intensity",
    "compute_latency",
    "emit_plot_data",
    "end_to_end",
    "energy_per_token",
    "flops_per_token",
    "h2d_latency",
    "io_latency",
    "latency_breakdown",
    "list_presets",
    "load_device_preset",
    "load_model_preset",
    "load_precision_preset",
    "memory_breakdown",
    "memory_footprint",
    "memory_latency",
    "net_latency",
    "operator_breakdown",
    "param_count",
    "render",
    "run_profile",
    "run_sweep",
]
