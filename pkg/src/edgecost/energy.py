from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import HardwareConfig, ModelConfig, PrecisionSpec, flops_per_token, memory_footprint


@dataclass(frozen=True)
class EnergyEstimate:
    """Joules per token, split into arithmetic and data-movement parts."""

    e_compute: float
    e_data: float
    e_total: float


def energy_from_counts(flops, nbytes, e_flop: float, e_byte: float) -> EnergyEstimate:
    compute = float(Fraction(flops) * Fraction(e_flop))
    data = float(Fraction(nbytes) * Fraction(e_byte))
    return EnergyEstimate(e_compute=compute, e_data=data, e_total=compute + data)


def energy_per_token(m: ModelConfig, hw: HardwareConfig, p: PrecisionSpec) -> EnergyEstimate:
    # The data term charges the whole footprint, not only the weights.
    return energy_from_counts(flops_per_token(m), memory_footprint(m, p), hw.e_flop, hw.e_byte)
