from pathlib import Path

import pytest
import yaml
from typer.testing import CliRunner

from qpow_cli.classical_model import AsicSpec, NetworkSnapshot
from qpow_cli.netstats_io import (
    REFERENCE_SCENARIO,
    SELF_CONSISTENT_SCENARIO,
    bundled_scenario_path,
    resolve_scenario,
)
from qpow_cli.quantum_model import target_from_compact


@pytest.fixture
def paper_scenario():
    return resolve_scenario(REFERENCE_SCENARIO)


@pytest.fixture
def self_consistent_scenario():
    return resolve_scenario(SELF_CONSISTENT_SCENARIO)


@pytest.fixture
def asic():
    return AsicSpec(
        hashrate_th_per_s=140.0,
        nameplate_power_w=3010.0,
        nameplate_energy_per_block_j=502.0,
        nand_per_hash=8588,
        bits_per_nand=0.625,
        label="Antminer S19 XP",
    )


@pytest.fixture
def network():
    return NetworkSnapshot(
        difficulty=3.125e13,
        network_hashrate_th_per_s=2.01e8,
        block_time_s=600.0,
        network_energy_per_block_j=3.2267e9,
        max_target=target_from_compact(0x1D00FFFF),
        annual_consumption_twh=126.7,
    )


@pytest.fixture
def paper_data():
    """The bundled 2022 scenario as a plain mapping, for editing in tests."""
    return yaml.safe_load(bundled_scenario_path(REFERENCE_SCENARIO).read_text(encoding="utf-8"))


@pytest.fixture
def write_scenario(tmp_path):
    def _write(data, name: str = "scenario.yaml") -> Path:
        path = tmp_path / name
        if isinstance(data, str):
            path.write_text(data, encoding="utf-8")
        else:
            path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def runner():
    return CliRunner()
