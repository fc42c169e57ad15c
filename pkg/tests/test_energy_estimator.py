import dataclasses

import pytest

from qpow_cli.energy_estimator import (
    BREAK_EVEN_COLUMN,
    LANDAUER_COLUMN,
    REFERENCE_TABLE_I,
    REFERENCE_TABLE_II,
    SUSPECTED_ERRATA,
    EnergyEstimator,
)
from qpow_cli.errors import DomainError
from qpow_cli.netstats_io import resolve_scenario
from qpow_cli.physics import TemperatureK

CLASSICAL = "Classical"
NON_ECC = "Non-ECC NISQ Miner"
ONE_LAYER = "1 Layer ECC Quantum Miner"
TWO_LAYER = "2 Layer ECC Quantum Miner"

TABLE_II = [
    (CLASSICAL, 1.324, 502.0, 2258.69),
    (NON_ECC, 1.43e-18, 5.43e-16, 2.4457216e-15),
    (ONE_LAYER, 3.75e-10, 1.42e-7, 6.4e-7),
    (TWO_LAYER, 4.5e-9, 1.70e-6, 7.68e-6),
]


@pytest.fixture
def estimator(paper_scenario):
    return EnergyEstimator(paper_scenario)


@pytest.mark.parametrize("label, landauer, at_379, at_1706", TABLE_II)
def test_table_ii_cells(estimator, label, landauer, at_379, at_1706):
    doc = estimator.table_ii()
    assert doc.cell(label, LANDAUER_COLUMN) == pytest.approx(landauer, rel=0.01, abs=0)
    assert doc.cell(label, "Ratio (1:379)") == pytest.approx(at_379, rel=0.01, abs=0)
    assert doc.cell(label, "Ratio (1:1706)") == pytest.approx(at_1706, rel=0.01, abs=0)


@pytest.mark.parametrize(
    "label, ratio", [(CLASSICAL, 1706.0), (NON_ECC, 1.58e21), (ONE_LAYER, 6.02e12), (TWO_LAYER, 5.02e11)]
)
def test_table_i_break_even(estimator, label, ratio):
    assert estimator.table_i().cell(label, BREAK_EVEN_COLUMN) == pytest.approx(ratio, rel=0.01, abs=0)


def test_suspected_errata_are_absent(estimator):
    one_layer = estimator.table_i().cell(ONE_LAYER, LANDAUER_COLUMN)
    assert one_layer == pytest.approx(3.7497e-10, rel=0.002, abs=0)
    assert one_layer != pytest.approx(SUSPECTED_ERRATA["table_i_1_layer_landauer_j"], rel=0.01, abs=0)

    non_ecc = estimator.table_ii().cell(NON_ECC, "Ratio (1:1706)")
    assert non_ecc == pytest.approx(1.4336e-18 * 1706, rel=0.01, abs=0)
    assert non_ecc != pytest.approx(SUSPECTED_ERRATA["table_ii_non_ecc_ratio_1706_j"], rel=0.01, abs=0)
    assert REFERENCE_TABLE_II[0][1706.0] != SUSPECTED_ERRATA["table_ii_non_ecc_ratio_1706_j"]


def test_methodology_chain(estimator):
    figures = estimator.classical_figures()
    assert figures.share == pytest.approx(6.965e-7, rel=0.005, abs=0)
    assert figures.share_used == 7.0e-7
    assert figures.attributed_j == pytest.approx(2258.69, rel=0.005, abs=0)
    assert figures.nameplate_j == 502.0
    assert figures.attributed_ratio == pytest.approx(1706.6, rel=1e-3, abs=0)
    assert figures.nameplate_ratio == pytest.approx(379.3, rel=1e-3, abs=0)

    rows = {r.label: r for r in estimator.infrastructure_rows()}
    assert rows[ONE_LAYER].erased_bits == pytest.approx(1.339e11, rel=0.005, abs=0)
    assert rows[TWO_LAYER].erased_bits == pytest.approx(1.607e12, rel=0.005, abs=0)
    assert rows[NON_ECC].erased_bits == 512
    assert rows[NON_ECC].ec_steps is None
    assert rows[ONE_LAYER].ec_steps == 1.1159814903e10


def test_advantage_and_savings(estimator):
    advantage, savings, row, ratio = estimator.advantage_summary()
    assert advantage == pytest.approx(2.94279275e8, rel=0.01, abs=0)
    assert f"{savings:.4g}" == "126.7"
    assert row.label == TWO_LAYER
    assert ratio == 1706.0


def test_strict_check_passes_on_bundled_fixture(estimator):
    result = estimator.check_against_reference()
    assert result.strict
    assert len(result.cells) == 16
    assert result.passed, [(c.row, c.column, c.deviation) for c in result.failures]
    assert result.max_deviation < 0.01


def test_check_report(estimator):
    result = estimator.check_against_reference()
    doc = estimator.check_report(result)
    assert len(doc.rows) == len(result.cells)
    assert doc.summary[0].value == result.max_deviation


def test_check_on_self_consistent_reports_deviations(self_consistent_scenario):
    result = EnergyEstimator(self_consistent_scenario).check_against_reference()
    assert not result.strict
    assert not result.passed
    classical = next(c for c in result.cells if c.row == CLASSICAL and c.column == LANDAUER_COLUMN)
    assert classical.computed == pytest.approx(1.264, rel=0.001, abs=0)
    assert classical.deviation == pytest.approx(0.045, abs=0.002)


def test_self_consistent_classical_bits(self_consistent_scenario):
    figures = EnergyEstimator(self_consistent_scenario).classical_figures()
    assert figures.bits_per_block == pytest.approx(4.51e20, rel=0.001, abs=0)
    assert figures.landauer_j == pytest.approx(1.264, rel=0.001, abs=0)
    assert 1.324 / figures.landauer_j == pytest.approx(1.047, abs=0.002)


def test_self_consistent_runtime_column(self_consistent_scenario):
    doc = EnergyEstimator(self_consistent_scenario).energy_report()
    assert doc.cell(NON_ECC, "Runtime") is None
    assert doc.cell(TWO_LAYER, "Runtime") == pytest.approx(4.6894e5, rel=1e-3, abs=0)


def test_custom_ratio_sweep(paper_scenario):
    doc = EnergyEstimator(paper_scenario, [1.0, 10.0, 1e6]).energy_report()
    assert [c.name for c in doc.columns] == [
        LANDAUER_COLUMN,
        "Erased bits",
        "Ratio (1:1)",
        "Ratio (1:10)",
        "Ratio (1:1e+06)",
        "Runtime",
    ]
    landauer = doc.cell(TWO_LAYER, LANDAUER_COLUMN)
    assert doc.cell(TWO_LAYER, "Ratio (1:10)") == pytest.approx(10 * landauer, rel=1e-12, abs=0)


def test_sub_unit_ratio_is_rejected(paper_scenario):
    with pytest.raises(DomainError):
        EnergyEstimator(paper_scenario, [0.5]).table_ii()


def test_temperature_scales_every_landauer_value(paper_scenario):
    warm = dataclasses.replace(paper_scenario, temperature_k=TemperatureK(300.0))
    base = {r.label: r.landauer_j for r in EnergyEstimator(paper_scenario).infrastructure_rows()}
    for row in EnergyEstimator(warm).infrastructure_rows():
        assert row.landauer_j / base[row.label] == pytest.approx(300.0 / 293.0, rel=1e-12, abs=0)


def test_tables_report_combines_both_tables(estimator):
    doc = estimator.tables_report()
    assert [r.label for r in doc.rows] == [CLASSICAL, NON_ECC, ONE_LAYER, TWO_LAYER]
    assert doc.cell(TWO_LAYER, BREAK_EVEN_COLUMN) == estimator.table_i().cell(TWO_LAYER, BREAK_EVEN_COLUMN)


def test_reference_tables_cover_every_row():
    assert set(REFERENCE_TABLE_I) == set(REFERENCE_TABLE_II)


@pytest.fixture
def zero_energy_scenario(paper_data, write_scenario):
    paper_data["fixture_constants"]["rounded_share"] = 0.0
    paper_data["fixture_constants"]["bits_per_block_override"] = 0.0
    return resolve_scenario(write_scenario(paper_data))


def test_zero_share_and_zero_bits_leave_ratios_undefined(zero_energy_scenario):
    estimator = EnergyEstimator(zero_energy_scenario)
    figures = estimator.classical_figures()
    assert figures.attributed_j == 0.0
    assert figures.landauer_j == 0.0
    assert figures.attributed_ratio is None
    assert figures.nameplate_ratio is None

    doc = estimator.tables_report()
    assert doc.cell(CLASSICAL, "Ratio (1:1706)") == 0.0
    assert all(row.values[-1] is None for row in doc.rows)
    assert doc.cell(TWO_LAYER, LANDAUER_COLUMN) == pytest.approx(4.5e-9, rel=0.01, abs=0)

    advantage, savings, row, ratio = estimator.advantage_summary()
    assert advantage is None and savings is None
    assert row.label == TWO_LAYER and ratio == 1706.0


def test_uncomputable_cells_fail_the_check(zero_energy_scenario):
    estimator = EnergyEstimator(zero_energy_scenario)
    result = estimator.check_against_reference()
    missing = [c for c in result.failures if c.computed is None]
    assert {c.row for c in missing} == {CLASSICAL, NON_ECC, ONE_LAYER, TWO_LAYER}
    assert all(c.column == BREAK_EVEN_COLUMN for c in missing)

    doc = estimator.check_report(result)
    assert doc.summary[0].value is None
    assert doc.cell(f"Table I / {NON_ECC} / {BREAK_EVEN_COLUMN}", "Deviation") is None
