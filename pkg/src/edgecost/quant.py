"""Integer quantization simulator.

Covers symmetric and asymmetric schemes at per-tensor or per-channel
granularity, min-max calibration, reconstruction and fake quantization.
Channels are the rows of a 2-D :class:`TensorView`.

Rounding is half-away-from-zero and results are clamped to the integer range
after rounding. Symmetric quantization uses the restricted range
``[-(2**(bits-1) - 1), 2**(bits-1) - 1]`` so that it stays zero-symmetric;
asymmetric quantization uses the full two's-complement range.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import ConfigError

Scheme = Literal["symmetric", "asymmetric"]
Granularity = Literal["per_tensor", "per_channel"]
SCHEMES = ("symmetric", "asymmetric")
GRANULARITIES = ("per_tensor", "per_channel")


@dataclass(frozen=True, eq=False)
class TensorView:
    """A read-only ``(channels, elements_per_channel)`` array of finite floats."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ConfigError(f"tensor must be non-empty 2-D, got shape {arr.shape}", field="shape")
        if not np.all(np.isfinite(arr)):
            raise ConfigError("tensor values must be finite", field="values")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_flat(cls, values, channels: int, elements_per_channel: int) -> TensorView:
        flat = np.asarray(values, dtype=np.float64).ravel()
        if flat.size != channels * elements_per_channel:
            raise ConfigError(
                f"expected {channels}x{elements_per_channel} values, got {flat.size}", field="values"
            )
        return cls(flat.reshape(channels, elements_per_channel))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other):
        if not isinstance(other, TensorView):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.values, other.values))


def int_range(scheme: Scheme, bits: int) -> tuple[int, int]:
    qmax = 2 ** (bits - 1) - 1
    if scheme == "symmetric":
        return -qmax, qmax
    return -(2 ** (bits - 1)), qmax


@dataclass(frozen=True)
class QuantParams:
    scheme: Scheme
    granularity: Granularity
    bits: int
    scales: tuple[float, ...]
    zero_points: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"must be one of {SCHEMES}", field="scheme")
        if self.granularity not in GRANULARITIES:
            raise ConfigError(f"must be one of {GRANULARITIES}", field="granularity")
        if isinstance(self.bits, bool) or not isinstance(self.bits, int) or self.bits < 2:
            raise ConfigError(f"must be an integer >= 2, got {self.bits!r}", field="bits")
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))
        if not self.scales:
            raise ConfigError("at least one scale is required", field="scales")
        if any(not np.isfinite(s) or s <= 0 for s in self.scales):
            raise ConfigError("every scale must be finite and > 0", field="scales")
        if self.granularity == "per_tensor" and len(self.scales) != 1:
            raise ConfigError("per_tensor params carry exactly one scale", field="scales")
        if self.scheme == "symmetric":
            if self.zero_points is not None:
                raise ConfigError("symmetric params carry no zero-points", field="zero_points")
        else:
            if self.zero_points is None:
                raise ConfigError("asymmetric params need zero-points", field="zero_points")
            object.__setattr__(self, "zero_points", tuple(float(z) for z in self.zero_points))
            if len(self.zero_points) != len(self.scales):
                raise ConfigError("one zero-point per scale is required", field="zero_points")
            if any(not np.isfinite(z) for z in self.zero_points):
                raise ConfigError("zero-points must be finite", field="zero_points")

    @property
    def qmin(self) -> int:
        return int_range(self.scheme, self.bits)[0]

    @property
    def qmax(self) -> int:
        return int_range(self.scheme, self.bits)[1]

    @property
    def scale(self) -> float:
        if self.granularity != "per_tensor":
            raise ConfigError("per_channel params have one scale per channel", field="granularity")
        return self.scales[0]

    @property
    def zero_point(self) -> float:
        if self.zero_points is None:
            return 0.0
        return self.zero_points[0]

    def _columns(self) -> tuple[np.ndarray, np.ndarray]:
        s = np.asarray(self.scales, dtype=np.float64)[:, None]
        z = np.zeros_like(s) if self.zero_points is None else np.asarray(self.zero_points)[:, None]
        return s, z


def round_half_away(x):
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def calibrate(t: TensorView, scheme: Scheme = "symmetric", granularity: Granularity = "per_tensor",
              bits: int = 8) -> QuantParams:
    """Min-max calibration; a degenerate (zero-width) range gets scale 1."""
    if not isinstance(t, TensorView):
        t = TensorView(t)
    qmin, qmax = int_range(scheme, bits) if scheme in SCHEMES else (0, 0)
    if granularity == "per_channel":
        rows = t.values
    elif granularity == "per_tensor":
        rows = t.values.reshape(1, -1)
    else:
        raise ConfigError(f"must be one of {GRANULARITIES}", field="granularity")

    if scheme == "symmetric":
        peak = np.max(np.abs(rows), axis=1)
        scales = np.where(peak > 0, peak / qmax, 1.0)
        return QuantParams(scheme, granularity, bits, tuple(scales.tolist()))
    if scheme == "asymmetric":
        lo, hi = np.min(rows, axis=1), np.max(rows, axis=1)
        width = hi - lo
        scales = np.where(width > 0, width / (qmax - qmin), 1.0)
        zeros = np.where(width > 0, lo - scales * qmin, lo)
        return QuantParams(scheme, granularity, bits, tuple(scales.tolist()), tuple(zeros.tolist()))
    raise ConfigError(f"must be one of {SCHEMES}", field="scheme")


def _as_array(x, params: QuantParams) -> tuple[np.ndarray, bool]:
    """Return a 2-D float array broadcastable against the params, and whether x was scalar."""
    if isinstance(x, TensorView):
        arr = x.values
        if params.granularity == "per_channel" and arr.shape[0] != len(params.scales):
            raise ConfigError(
                f"tensor has {arr.shape[0]} channels but params carry {len(params.scales)} scales",
                field="scales",
            )
        return arr, False
    if params.granularity == "per_channel":
        raise ConfigError("per_channel params need a TensorView input", field="granularity")
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ConfigError("values must be finite", field="values")
    return arr, arr.ndim == 0


def _quantize(x, params: QuantParams):
    arr, scalar = _as_array(x, params)
    s, z = params._columns()
    if arr.ndim < 2:
        s, z = s[0, 0], z[0, 0]
    q = np.clip(round_half_away((arr - z) / s), params.qmin, params.qmax).astype(np.int64)
    return int(q) if scalar else q


def _dequantize(x_int, params: QuantParams):
    q = np.asarray(x_int, dtype=np.int64)
    s, z = params._columns()
    if params.granularity == "per_channel":
        if q.ndim != 2 or q.shape[0] != len(params.scales):
            raise ConfigError("per_channel dequantization needs one row per scale", field="scales")
    elif q.ndim < 2:
        s, z = s[0, 0], z[0, 0]
    out = s * q + z
    return float(out) if np.ndim(out) == 0 else out


def _require(params: QuantParams, scheme: Scheme) -> None:
    if params.scheme != scheme:
        raise ConfigError(f"expected {scheme} params, got {params.scheme}", field="scheme")


def quantize_symmetric(x, params: QuantParams):
    _require(params, "symmetric")
    return _quantize(x, params)


def dequantize_symmetric(x_int, params: QuantParams):
    _require(params, "symmetric")
    return _dequantize(x_int, params)


def quantize_asymmetric(x, params: QuantParams):
    _require(params, "asymmetric")
    return _quantize(x, params)


def dequantize_asymmetric(x_int, params: QuantParams):
    _require(params, "asymmetric")
    return _dequantize(x_int, params)


def quantize_per_channel(t: TensorView, params: QuantParams) -> np.ndarray:
    if params.granularity != "per_channel":
        raise ConfigError("expected per_channel params", field="granularity")
    if not isinstance(t, TensorView):
        raise ConfigError("per_channel quantization needs a TensorView", field="values")
    return _quantize(t, params)


def quantize(x, params: QuantParams):
    return _quantize(x, params)


def dequantize(x_int, params: QuantParams):
    return _dequantize(x_int, params)


def fake_quantize(t: TensorView, params: QuantParams) -> TensorView:
    """Quantize then dequantize, keeping the real-valued tensor shape."""
    if not isinstance(t, TensorView):
        t = TensorView(t)
    return TensorView(_dequantize(_quantize(t, params), params))


@dataclass(frozen=True)
class ErrorStats:
    mse: float
    max_abs: float
    mean_abs: float


def quant_error_stats(original: TensorView, reconstructed: TensorView) -> ErrorStats:
    if original.shape != reconstructed.shape:
        raise ConfigError(f"shape mismatch: {original.shape} vs {reconstructed.shape}", field="shape")
    diff = original.values - reconstructed.values
    return ErrorStats(
        mse=float(np.mean(diff**2)),
        max_abs=float(np.max(np.abs(diff))),
        mean_abs=float(np.mean(np.abs(diff))),
    )


def read_tensor(path: str | Path) -> TensorView:
    """Read ``channels elements`` on the first line, then one value per line."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ConfigError("empty tensor file", field="shape")
    header = lines[0].split()
    try:
        channels, per_channel = (int(v) for v in header)
    except ValueError:
        raise ConfigError(f"line 1: expected two integers, got {lines[0]!r}", field="shape") from None
    try:
        values = [float(v) for v in lines[1:]]
    except ValueError as exc:
        raise ConfigError(f"non-numeric tensor value ({exc})", field="values") from None
    return TensorView.from_flat(values, channels, per_channel)


def write_tensor(t: TensorView, path: str | Path) -> None:
    rows = [f"{t.shape[0]} {t.shape[1]}"] + [repr(float(v)) for v in t.values.ravel()]
    Path(path).write_text("\n".join(rows) + "\n")
