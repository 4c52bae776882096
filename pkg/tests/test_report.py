import csv
import io
import json
from fractions import Fraction

import pytest

from conftest import unit_hardware
from edgecost import (
    ConfigError,
    ModelConfig,
    PrecisionSpec,
    load_device_preset,
    load_model_preset,
    load_precision_preset,
    render,
    run_profile,
    run_sweep,
)
from edgecost.report import CSV_HEADER, PLOT_PANELS, canonical_float, emit_plot_data, parse_report, plot_series


@pytest.fixture(scope="module")
def default_sweep(presets):
    return run_sweep(
        list(presets.devices.values()), list(presets.models.values()), list(presets.precisions.values())
    )


def test_toy_profile_matches_module_oracles(toy_model, int8):
    r = run_profile(toy_model, unit_hardware(), int8)
    assert r.param_count == 8 and r.flops_per_token == 27
    assert r.memory.total == 11
    assert r.arithmetic_intensity == pytest.approx(27 / 11)
    assert r.latency.stages() == {"t_comp": 27.0, "t_mem": 11.0, "t_io": 8.0, "t_h2d": 8.0, "t_net": 1.0}
    assert r.latency.t_total == 55.0
    assert [c.flops for _, c in r.operators.items()] == [6, 4, 8, 9]


def test_profile_is_deterministic():
    args = (load_model_preset("gemma3-1b"), load_device_preset("raspberry-pi-5"), load_precision_preset("INT4"))
    assert render(run_profile(*args)) == render(run_profile(*args))


def test_json_round_trip_is_byte_identical():
    r = run_profile(load_model_preset("tinyllama-1.1b"), load_device_preset("raspberry-pi-4"), load_precision_preset("INT4"))
    text = render(r)
    parsed = parse_report(text)
    assert render(parsed) == text
    assert parsed.model == r.model and parsed.hardware == r.hardware and parsed.precision == r.precision
    assert parsed.memory == r.memory
    assert parsed.latency.t_io == canonical_float(r.latency.t_io)


def test_report_is_self_contained():
    r = run_profile(load_model_preset("llama3.2-1b"), load_device_preset("jetson-orin-nano-super"),
                    load_precision_preset("FP16"), mode="overlapped")
    data = json.loads(render(r))
    echoed = parse_report(render(r))
    again = run_profile(echoed.model, echoed.hardware, echoed.precision, mode=data["inputs"]["aggregation_mode"])
    assert render(again) == render(r)


def test_assumptions_are_echoed():
    r = run_profile(load_model_preset("tinyllama-1.1b"), load_device_preset("raspberry-pi-4"), load_precision_preset("FP32"))
    data = json.loads(render(r))
    assert data["assumptions"]["assumed_values"]["storage_bw"] == 5e7
    assert data["assumptions"]["energy_coefficients"] == {"e_flop": 1e-10, "e_byte": 1.6e-10}
    assert data["schema_version"] == 1


def test_int4_half_bytes_rendered_exactly():
    m = ModelConfig("odd", 1, 1, 1, 1, 1, 1)
    r = run_profile(m, unit_hardware(), PrecisionSpec("INT4", 4))
    data = json.loads(render(r))
    assert data["memory_footprint"]["total_bytes"] == 5.5
    assert parse_report(render(r)).memory.total == Fraction(11, 2)


def test_unknown_mode_and_format(toy_model, int8):
    with pytest.raises(ConfigError):
        run_profile(toy_model, unit_hardware(), int8, mode="magic")
    with pytest.raises(ConfigError):
        render(run_profile(toy_model, unit_hardware(), int8), "yaml")


def test_sweep_cardinality_and_order(presets):
    result = run_sweep(list(presets.devices.values()), [load_model_preset("tinyllama-1.1b")],
                       list(presets.precisions.values()))
    assert len(result) == 12
    keys = [(r.hardware.name, r.precision.bits_per_element) for r in result]
    assert keys == sorted(keys, key=lambda k: (k[0], -k[1]))


def test_sweep_concurrency_invariant(presets, default_sweep):
    parallel = run_sweep(
        list(reversed(presets.devices.values())), list(presets.models.values()), list(presets.precisions.values()),
        workers=8,
    )
    assert render(parallel) == render(default_sweep)


def test_default_sweep_monotone_in_bits(default_sweep):
    assert len(default_sweep) == 48
    by_cell = {}
    for r in default_sweep:
        by_cell.setdefault((r.hardware.name, r.model.name), []).append((r.precision.bits_per_element, r.latency.t_total))
    for series in by_cell.values():
        totals = [t for _, t in sorted(series, reverse=True)]
        assert totals == sorted(totals, reverse=True)


def test_csv(default_sweep):
    text = render(default_sweep, "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 49
    assert rows[1][:3] == ["jetson-orin-nano-super", "deepseek-r1-1.5b", "FP32"]


def test_markdown_layout(default_sweep):
    text = render(default_sweep, "markdown")
    assert text.count("| Model | Precision | Model Size | Memory at Runtime |") == 3
    rows = [ln for ln in text.splitlines() if ln.startswith("| ") and not ln.startswith("| Model")]
    assert len(rows) == 48
    assert "| tinyllama-1.1b | FP32 | 4.03GB |" in text
    assert "Assumed hardware values" in text


def test_plot_data_shape(default_sweep):
    data = json.loads(emit_plot_data(default_sweep))
    assert list(data["panels"]) == list(PLOT_PANELS)
    for panel in data["panels"].values():
        assert len(panel["series"]) == 4
        for points in panel["series"].values():
            assert len(points) == 12
            assert {(p["device"], p["precision"]) for p in points} == {
                (d, p) for d in ("jetson-orin-nano-super", "raspberry-pi-4", "raspberry-pi-5")
                for p in ("FP32", "FP16", "INT8", "INT4")
            }


def test_plot_storage_panel_is_projection(default_sweep):
    series = plot_series(default_sweep)["panels"]["b_storage_io_latency"]["series"]
    lookup = {(r.model.name, r.hardware.name, r.precision.name): r.latency.t_io for r in default_sweep}
    for model, points in series.items():
        for p in points:
            assert p["value"] == lookup[(model, p["device"], p["precision"])]


def test_plot_end_to_end_ordering(default_sweep):
    series = plot_series(default_sweep)["panels"]["e_end_to_end_latency"]["series"]
    for points in series.values():
        for device in {p["device"] for p in points}:
            v = {p["precision"]: p["value"] for p in points if p["device"] == device}
            assert v["FP32"] >= v["FP16"] >= v["INT8"] >= v["INT4"]


def test_plot_data_rejects_empty():
    with pytest.raises(ConfigError):
        emit_plot_data([])
