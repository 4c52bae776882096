"""Command line interface.

Exit codes: 0 success, 2 config/schema error, 3 unknown preset,
4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import presets, quant
from .config import parse_config
from .core import HardwareConfig, ModelConfig, PrecisionSpec
from .errors import ConfigError, InternalInvariantError, UnknownPresetError
from .latency import AGGREGATION_MODES
from .report import FORMATS, emit_plot_data, render, run_profile, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_PRESET, EXIT_INTERNAL = 0, 2, 3, 4
# Only chooses where relative --out/--plot-data paths land; never affects numbers.
OUTPUT_DIR_ENV = "EDGECOST_OUTPUT_DIR"


def _looks_like_path(ref: str) -> bool:
    return ref.endswith(".json") or os.sep in ref or ref.lstrip().startswith("{")


def _resolve(ref: str, kind: type, loader):
    if _looks_like_path(ref):
        cfg = parse_config(ref)
        if not isinstance(cfg, kind):
            raise ConfigError(f"{ref} holds a {type(cfg).__name__}, expected {kind.__name__}", field="kind")
        return cfg
    return loader(ref)


def resolve_model(ref: str, seq_len: int | None = None) -> ModelConfig:
    model = _resolve(ref, ModelConfig, presets.load_model_preset)
    if seq_len is not None:
        model = dataclasses.replace(model, seq_len=seq_len)
    return model


def resolve_device(ref: str) -> HardwareConfig:
    return _resolve(ref, HardwareConfig, presets.load_device_preset)


def resolve_precision(ref: str) -> PrecisionSpec:
    return _resolve(ref, PrecisionSpec, presets.load_precision_preset)


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if not path.is_absolute() and os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def cmd_profile(args) -> int:
    report = run_profile(
        resolve_model(args.model, args.seq_len),
        resolve_device(args.device),
        resolve_precision(args.precision),
        mode=args.mode,
    )
    _write(render(report, args.format), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    # Resolve every name up front so a typo fails before any evaluation.
    devices = [resolve_device(d) for d in _split(args.devices)]
    models = [resolve_model(m, args.seq_len) for m in _split(args.models)]
    precisions = [resolve_precision(p) for p in _split(args.precisions)]
    result = run_sweep(devices, models, precisions, mode=args.mode, workers=args.workers)
    _write(render(result, args.format), args.out)
    if args.plot_data:
        _write(emit_plot_data(result), args.plot_data)
    return EXIT_OK


def cmd_presets_list(args) -> int:
    if args.format == "json":
        sys.stdout.write(json.dumps(presets.list_presets(), indent=2) + "\n")
    else:
        sys.stdout.write(presets.format_listing())
    return EXIT_OK


def cmd_quant_demo(args) -> int:
    tensor = quant.read_tensor(args.input)
    params = quant.calibrate(tensor, args.scheme, args.granularity, args.bits)
    q = quant.quantize(tensor, params)
    recon = quant.fake_quantize(tensor, params)
    stats = quant.quant_error_stats(tensor, recon)
    out = {
        "shape": list(tensor.shape),
        "scheme": params.scheme,
        "granularity": params.granularity,
        "bits": params.bits,
        "int_range": [params.qmin, params.qmax],
        "scales": list(params.scales),
        "zero_points": None if params.zero_points is None else list(params.zero_points),
        "quantized": q.tolist(),
        "error": dataclasses.asdict(stats),
    }
    _write(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgecost",
        description="Analytical latency, memory and energy estimates for transformer inference on edge devices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="profile one model on one device at one precision")
    p.add_argument("--model", required=True, help="model preset name or JSON config path")
    p.add_argument("--device", required=True, help="device preset name or JSON config path")
    p.add_argument("--precision", required=True, help="FP32, FP16, INT8, INT4 or a JSON config path")
    p.add_argument("--mode", choices=AGGREGATION_MODES, default="serial")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--seq-len", type=int, default=None, help="override the model's sequence length")
    p.add_argument("--out", default=None, help="write to this file instead of stdout")
    p.set_defaults(func=cmd_profile)

    s = sub.add_parser("sweep", help="profile the cartesian product of devices, models and precisions")
    s.add_argument("--devices", default="jetson-orin-nano-super,raspberry-pi-4,raspberry-pi-5")
    s.add_argument("--models", default="deepseek-r1-1.5b,gemma3-1b,llama3.2-1b,tinyllama-1.1b")
    s.add_argument("--precisions", default="FP32,FP16,INT8,INT4")
    s.add_argument("--mode", choices=AGGREGATION_MODES, default="serial")
    s.add_argument("--format", choices=FORMATS, default="json")
    s.add_argument("--seq-len", type=int, default=None)
    s.add_argument("--workers", type=int, default=1, help="evaluate cells on this many threads")
    s.add_argument("--out", default=None)
    s.add_argument("--plot-data", default=None, help="also write per-panel series JSON here")
    s.set_defaults(func=cmd_sweep)

    pr = sub.add_parser("presets", help="inspect shipped presets")
    pr_sub = pr.add_subparsers(dest="presets_command", required=True)
    pl = pr_sub.add_parser("list", help="list presets with provenance flags")
    pl.add_argument("--format", choices=("text", "json"), default="text")
    pl.set_defaults(func=cmd_presets_list)

    q = sub.add_parser("quant", help="quantization simulator")
    q_sub = q.add_subparsers(dest="quant_command", required=True)
    qd = q_sub.add_parser("demo", help="calibrate, quantize and reconstruct a tensor file")
    qd.add_argument("--input", required=True, help="tensor file: 'channels elements' header, one value per line")
    qd.add_argument("--bits", type=int, default=8)
    qd.add_argument("--scheme", choices=quant.SCHEMES, default="symmetric")
    qd.add_argument("--granularity", choices=quant.GRANULARITIES, default="per_tensor")
    qd.add_argument("--out", default=None)
    qd.set_defaults(func=cmd_quant_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownPresetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRESET
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
