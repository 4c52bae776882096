import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from edgecost import HardwareConfig, ModelConfig, PrecisionSpec  # noqa: E402
from edgecost.presets import catalog  # noqa: E402


def unit_hardware(**overrides) -> HardwareConfig:
    values = dict(
        name="unit",
        peak_flops=1.0,
        mem_bw=1.0,
        storage_bw=1.0,
        h2d_bw=1.0,
        net_bw=1.0,
        u_compute=1.0,
        u_memory=1.0,
        u_storage=1.0,
        u_h2d=1.0,
        u_net=1.0,
        e_flop=0.0,
        e_byte=0.0,
    )
    values.update(overrides)
    return HardwareConfig(**values)


@pytest.fixture
def toy_model():
    return ModelConfig("toy", layers=1, hidden_dim=1, intermediate_dim=1, attention_heads=1, vocab_size=1, seq_len=1)


@pytest.fixture
def int8():
    return PrecisionSpec("INT8", 8)


@pytest.fixture
def tinyllama_shape():
    return ModelConfig(
        "tiny-shape", layers=22, hidden_dim=2048, intermediate_dim=5632, attention_heads=32, vocab_size=32000,
        seq_len=2048,
    )


@pytest.fixture(scope="session")
def presets():
    return catalog()


# Acceptance summary: one line per criterion, printed after the run.
_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
