import json
import subprocess
import sys

import numpy as np
import pytest

from edgecost.cli import main
from edgecost.config import dumps
from edgecost.presets import load_model_preset
from edgecost.quant import TensorView, write_tensor


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_profile_json(capsys):
    code, out, _ = run(capsys, "profile", "--model", "tinyllama-1.1b", "--device", "raspberry-pi-4", "--precision", "INT8")
    assert code == 0
    data = json.loads(out)
    assert data["param_count"] == 1_007_681_536
    assert data["inputs"]["aggregation_mode"] == "serial"


def test_profile_from_config_files(capsys, tmp_path):
    path = tmp_path / "model.json"
    path.write_text(dumps(load_model_preset("gemma3-1b")))
    code, out, _ = run(capsys, "profile", "--model", str(path), "--device", "raspberry-pi-5", "--precision", "FP16",
                       "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].startswith("raspberry-pi-5,gemma3-1b,FP16,16,serial,")


def test_seq_len_override(capsys):
    code, out, _ = run(capsys, "profile", "--model", "tinyllama-1.1b", "--device", "raspberry-pi-4", "--precision",
                       "FP16", "--seq-len", "512")
    assert code == 0 and json.loads(out)["inputs"]["model"]["seq_len"] == 512


def test_unknown_preset_exit_code(capsys):
    code, _, err = run(capsys, "profile", "--model", "tinyllama-1.1b", "--device", "pi6", "--precision", "INT8")
    assert code == 3
    assert "raspberry-pi-4" in err


def test_config_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "hw.json"
    bad.write_text(json.dumps({"kind": "hardware", "name": "x", "peak_gflops": 1}))
    code, _, err = run(capsys, "profile", "--model", "tinyllama-1.1b", "--device", str(bad), "--precision", "INT8")
    assert code == 2
    assert "peak_flops" in err


def test_wrong_kind_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(dumps(load_model_preset("gemma3-1b")))
    code, _, err = run(capsys, "profile", "--model", "tinyllama-1.1b", "--device", str(path), "--precision", "INT8")
    assert code == 2


def test_sweep_fails_fast_on_bad_name(capsys):
    code, out, _ = run(capsys, "sweep", "--devices", "raspberry-pi-4,nope", "--models", "tinyllama-1.1b")
    assert code == 3 and out == ""


def test_sweep_writes_outputs(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("EDGECOST_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "sweep", "--models", "tinyllama-1.1b", "--out", "sweep.json", "--plot-data", "plot.json",
                     "--workers", "4")
    assert code == 0
    assert len(json.loads((tmp_path / "sweep.json").read_text())["reports"]) == 12
    assert len(json.loads((tmp_path / "plot.json").read_text())["panels"]) == 6


def test_presets_list(capsys):
    code, out, _ = run(capsys, "presets", "list")
    assert code == 0
    assert "raspberry-pi-4" in out and "[assumed]" in out
    code, out2, _ = run(capsys, "presets", "list")
    assert out2 == out


def test_quant_demo(capsys, tmp_path):
    path = tmp_path / "w.txt"
    write_tensor(TensorView(np.array([[-1.0, 0.0, 1.0], [-100.0, 40.0, 100.0]])), path)
    code, out, _ = run(capsys, "quant", "demo", "--bits", "8", "--scheme", "symmetric", "--granularity", "per_channel",
                       "--input", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["quantized"] == [[-127, 0, 127], [-127, 51, 127]]
    assert data["scales"] == pytest.approx([1 / 127, 100 / 127])
    assert data["error"]["max_abs"] <= 100 / 127 / 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "edgecost", "presets", "list", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert len(json.loads(proc.stdout)["models"]) == 4


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["profile", "--model", "x"])
    assert exc.value.code == 2
