"""Profile reports, precision/device sweeps and their text renderings.

JSON is the canonical form. Keys are sorted, echoed inputs keep their full
float value, computed floats are rounded to 9 significant digits, and exact
byte counts are written as integers (or as exact dyadic decimals for
sub-byte precisions). Rendering the same report always gives the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import config as cfgmod
from .core import (
    HardwareConfig,
    MemoryFootprint,
    ModelConfig,
    PrecisionSpec,
    arithmetic_intensity,
    flops_per_token,
    memory_breakdown,
    param_count,
)
from .energy import EnergyEstimate, energy_per_token
from .errors import ConfigError, InternalInvariantError
from .latency import (
    AGGREGATION_MODES,
    OPERATORS,
    PER_SESSION_STAGES,
    STAGES,
    LatencyBreakdown,
    OperatorBreakdown,
    OperatorCost,
    latency_breakdown,
    operator_breakdown,
)

SCHEMA_VERSION = 1
SIG_DIGITS = 9
FORMATS = ("json", "csv", "markdown")


def canonical_float(x: float) -> float:
    return float(format(x, f".{SIG_DIGITS}g"))


def _exact_number(x: Fraction) -> int | float:
    # Byte counts have denominators dividing 8, so the float is exact.
    if x.denominator == 1:
        return int(x)
    value = float(x)
    if Fraction(value) != x:
        raise InternalInvariantError(f"byte count {x} is not exactly representable")
    return value


@dataclass(frozen=True)
class ProfileReport:
    model: ModelConfig
    hardware: HardwareConfig
    precision: PrecisionSpec
    mode: str
    param_count: int
    flops_per_token: int
    memory: MemoryFootprint
    arithmetic_intensity: float
    latency: LatencyBreakdown
    operators: OperatorBreakdown
    energy: EnergyEstimate
    schema_version: int = SCHEMA_VERSION

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.hardware.name, self.model.name, self.precision.name)

    def to_dict(self) -> dict[str, Any]:
        c = canonical_float
        return {
            "schema_version": self.schema_version,
            "inputs": {
                "model": cfgmod.to_dict(self.model),
                "hardware": cfgmod.to_dict(self.hardware),
                "precision": cfgmod.to_dict(self.precision),
                "aggregation_mode": self.mode,
            },
            "assumptions": {
                "device": self.hardware.name,
                "assumed_values": {name: getattr(self.hardware, name) for name in self.hardware.assumed},
                "energy_coefficients": {"e_flop": self.hardware.e_flop, "e_byte": self.hardware.e_byte},
                "note": "assumed values are estimates, not measurements; calibrate before relying on absolute numbers",
            },
            "param_count": self.param_count,
            "flops_per_token": self.flops_per_token,
            "memory_footprint": {
                "weights_bytes": _exact_number(self.memory.weights),
                "activation_bytes": _exact_number(self.memory.activations),
                "kv_cache_bytes": _exact_number(self.memory.kv_cache),
                "total_bytes": _exact_number(self.memory.total),
            },
            "arithmetic_intensity": c(self.arithmetic_intensity),
            "latency": {
                **{name: c(getattr(self.latency, name)) for name in STAGES},
                "t_total": c(self.latency.t_total),
                "aggregation_mode": self.latency.aggregation_mode,
                "per_session_stages": list(PER_SESSION_STAGES),
            },
            "operators": {
                name: {"flops": cost.flops, "seconds": c(cost.seconds)} for name, cost in self.operators.items()
            },
            "energy": {
                "e_compute": c(self.energy.e_compute),
                "e_data": c(self.energy.e_data),
                "e_total": c(self.energy.e_total),
            },
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ProfileReport:
        """Rebuild a report from its canonical dict (floats stay rounded)."""
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(f"unsupported report schema_version {data.get('schema_version')!r}")
        inputs = data["inputs"]
        mem = data["memory_footprint"]
        lat = data["latency"]
        return cls(
            model=cfgmod.from_dict(inputs["model"]),
            hardware=cfgmod.from_dict(inputs["hardware"]),
            precision=cfgmod.from_dict(inputs["precision"]),
            mode=inputs["aggregation_mode"],
            param_count=data["param_count"],
            flops_per_token=data["flops_per_token"],
            memory=MemoryFootprint(
                Fraction(mem["weights_bytes"]), Fraction(mem["activation_bytes"]), Fraction(mem["kv_cache_bytes"])
            ),
            arithmetic_intensity=data["arithmetic_intensity"],
            latency=LatencyBreakdown(
                *(float(lat[name]) for name in STAGES), t_total=float(lat["t_total"]), aggregation_mode=lat["aggregation_mode"]
            ),
            operators=OperatorBreakdown(
                **{name: OperatorCost(op["flops"], float(op["seconds"])) for name, op in data["operators"].items()}
            ),
            energy=EnergyEstimate(**{k: float(v) for k, v in data["energy"].items()}),
            schema_version=data["schema_version"],
        )


def run_profile(model: ModelConfig, hw: HardwareConfig, precision: PrecisionSpec, mode: str = "serial") -> ProfileReport:
    if mode not in AGGREGATION_MODES:
        raise ConfigError(f"unknown aggregation mode {mode!r}; expected one of {AGGREGATION_MODES}", field="mode")
    flops = flops_per_token(model)
    ops = operator_breakdown(model, hw, precision)
    if ops.total_flops != flops:
        raise InternalInvariantError(f"operator FLOPs {ops.total_flops} != flops_per_token {flops}")
    return ProfileReport(
        model=model,
        hardware=hw,
        precision=precision,
        mode=mode,
        param_count=param_count(model),
        flops_per_token=flops,
        memory=memory_breakdown(model, precision),
        arithmetic_intensity=arithmetic_intensity(model, precision),
        latency=latency_breakdown(model, hw, precision, mode),
        operators=ops,
        energy=energy_per_token(model, hw, precision),
    )


@dataclass(frozen=True)
class SweepResult:
    reports: list[ProfileReport] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.reports)

    def __iter__(self):
        return iter(self.reports)

    def to_dict(self) -> dict[str, Any]:
        return {"schema_version": SCHEMA_VERSION, "reports": [r.to_dict() for r in self.reports]}


def sweep_order(report: ProfileReport) -> tuple:
    return (report.hardware.name, report.model.name, -report.precision.bits_per_element, report.precision.name)


def run_sweep(
    devices: Sequence[HardwareConfig],
    models: Sequence[ModelConfig],
    precisions: Sequence[PrecisionSpec],
    mode: str = "serial",
    workers: int = 1,
) -> SweepResult:
    """Profile every (device, model, precision) combination.

    Cells are independent, so ``workers > 1`` evaluates them on a thread
    pool. The output order is fixed by :func:`sweep_order` regardless.
    """
    if mode not in AGGREGATION_MODES:
        raise ConfigError(f"unknown aggregation mode {mode!r}; expected one of {AGGREGATION_MODES}", field="mode")
    cells = [(m, hw, p) for hw in devices for m in models for p in precisions]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda cell: run_profile(*cell, mode=mode), cells))
    else:
        reports = [run_profile(*cell, mode=mode) for cell in cells]
    return SweepResult(sorted(reports, key=sweep_order))


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


CSV_HEADER = (
    "device", "model", "precision", "bits_per_element", "aggregation_mode",
    "param_count", "flops_per_token",
    "weights_bytes", "activation_bytes", "kv_cache_bytes", "memory_bytes",
    "arithmetic_intensity",
    "t_comp", "t_mem", "t_io", "t_h2d", "t_net", "t_total",
    "e_compute", "e_data", "e_total",
)  # fmt: skip


def _csv_row(r: ProfileReport) -> list:
    d = r.to_dict()
    mem, lat, en = d["memory_footprint"], d["latency"], d["energy"]
    return [
        r.hardware.name, r.model.name, r.precision.name, r.precision.bits_per_element, r.mode,
        d["param_count"], d["flops_per_token"],
        mem["weights_bytes"], mem["activation_bytes"], mem["kv_cache_bytes"], mem["total_bytes"],
        d["arithmetic_intensity"],
        *(lat[name] for name in STAGES), lat["t_total"],
        en["e_compute"], en["e_data"], en["e_total"],
    ]  # fmt: skip


def _human_bytes(n: Fraction) -> str:
    value = float(n)
    if value >= 1e9:
        return f"{value / 1e9:.2f}GB"
    if value >= 1e6:
        return f"{value / 1e6:.0f}MB"
    if value >= 1e3:
        return f"{value / 1e3:.0f}kB"
    return f"{value:g}B"


def _markdown(reports: list[ProfileReport]) -> str:
    out = []
    by_device: dict[str, list[ProfileReport]] = {}
    for r in reports:
        by_device.setdefault(r.hardware.name, []).append(r)
    for device, rows in by_device.items():
        mode = rows[0].mode
        out.append(f"### {device} ({mode} aggregation)\n")
        out.append("| Model | Precision | Model Size | Memory at Runtime | End-to-end (s) | Speed vs baseline | Energy/token (J) |")
        out.append("|---|---|---|---|---|---|---|")
        baselines: dict[str, float] = {}
        for r in rows:
            # Rows are ordered widest precision first, so the first row per model is the baseline.
            baseline = baselines.setdefault(r.model.name, r.latency.t_total)
            speed = baseline / r.latency.t_total if r.latency.t_total > 0 else float("inf")
            out.append(
                f"| {r.model.name} | {r.precision.name} | {_human_bytes(r.memory.weights)} | "
                f"{_human_bytes(r.memory.total)} | {r.latency.t_total:.4g} | {speed:.2f}x | {r.energy.e_total:.4g} |"
            )
        out.append("")
    assumed = sorted({name for r in reports for name in r.hardware.assumed})
    if assumed:
        out.append(f"Assumed hardware values (not measurements): {', '.join(assumed)}.")
    return "\n".join(out).rstrip("\n") + "\n"


def render(obj: ProfileReport | SweepResult, fmt: str = "json") -> str:
    reports = [obj] if isinstance(obj, ProfileReport) else list(obj.reports)
    if fmt == "json":
        return _dump(obj.to_dict())
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(_csv_row(r) for r in reports)
        return buf.getvalue()
    if fmt == "markdown":
        return _markdown(reports)
    raise ConfigError(f"unknown format {fmt!r}; expected one of {FORMATS}", field="format")


def parse_report(text: str) -> ProfileReport | SweepResult:
    """Inverse of ``render(..., "json")``."""
    data = json.loads(text)
    if "reports" in data:
        return SweepResult([ProfileReport.from_dict(d) for d in data["reports"]])
    return ProfileReport.from_dict(data)


# Panel id -> (report attribute path, unit), in figure order.
PLOT_PANELS = {
    "a_memory_latency": (("latency", "t_mem"), "s"),
    "b_storage_io_latency": (("latency", "t_io"), "s"),
    "c_h2d_latency": (("latency", "t_h2d"), "s"),
    "d_network_latency": (("latency", "t_net"), "s"),
    "e_end_to_end_latency": (("latency", "t_total"), "s"),
    "f_energy_per_token": (("energy", "e_total"), "J"),
}


def plot_series(sweep: SweepResult | Iterable[ProfileReport]) -> dict[str, Any]:
    """Group sweep values into one series per panel and model.

    Each point is keyed by (device, precision); separate models get separate
    series so that every series has one point per device and precision.
    """
    reports = list(sweep)
    if not reports:
        raise ConfigError("cannot build plot data from an empty sweep")
    panels = {}
    for panel, ((group, attr), unit) in PLOT_PANELS.items():
        series: dict[str, list[dict[str, Any]]] = {}
        for r in reports:
            series.setdefault(r.model.name, []).append(
                {"device": r.hardware.name, "precision": r.precision.name, "value": getattr(getattr(r, group), attr)}
            )
        panels[panel] = {"field": f"{group}.{attr}", "unit": unit, "series": series}
    return {"schema_version": SCHEMA_VERSION, "aggregation_mode": reports[0].mode, "panels": panels}


def emit_plot_data(sweep: SweepResult | Iterable[ProfileReport]) -> str:
    data = plot_series(sweep)
    for panel in data["panels"].values():
        for points in panel["series"].values():
            for point in points:
                point["value"] = canonical_float(point["value"])
    return _dump(data)
