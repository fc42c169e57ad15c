import pytest

from qpow_cli.energy_estimator import EnergyEstimator
from qpow_cli.error_collector import ErrorCollector
from qpow_cli.errors import ScenarioNotFoundError
from qpow_cli.netstats_io import resolve_scenario
from qpow_cli.validator import ERROR, WARNING, ValidationIssue, ValidatorEngine


def test_bundled_scenarios_are_clean():
    engine = ValidatorEngine()
    assert engine.validate("paper-2022") == []
    assert engine.validate("self-consistent") == []


def test_missing_file_propagates(tmp_path):
    with pytest.raises(ScenarioNotFoundError):
        ValidatorEngine().validate(tmp_path / "absent.yaml")


def test_schema_issues_become_errors(paper_data, write_scenario):
    paper_data["network"]["foo"] = 1
    paper_data["asic"]["hashrate_th_per_s"] = 0
    path = write_scenario(paper_data)
    issues = ValidatorEngine().validate(path)
    assert {i.field for i in issues} == {"network.foo", "asic.hashrate_th_per_s"}
    assert all(i.severity == ERROR and i.file == str(path) for i in issues)


def test_syntax_error_is_an_error(write_scenario):
    issues = ValidatorEngine().validate(write_scenario("a: [b\n"))
    assert len(issues) == 1
    assert issues[0].severity == ERROR
    assert "malformed YAML" in issues[0].message


def test_invariant_error_keeps_its_field(paper_data, write_scenario):
    paper_data["network"]["max_target_bits"] = 0x1D80FFFF
    [issue] = ValidatorEngine().validate(write_scenario(paper_data))
    assert issue.field == "network.max_target_bits"
    assert "sign bit" in issue.message


def test_soft_checks_warn(paper_data, write_scenario):
    paper_data["asic"]["hashrate_th_per_s"] = 3.0e+8
    paper_data["asic"]["nameplate_energy_per_block_j"] = 0.5
    issues = ValidatorEngine().validate(write_scenario(paper_data))
    assert {i.field for i in issues} == {
        "asic.hashrate_th_per_s",
        "asic.nameplate_energy_per_block_j",
    }
    assert all(i.severity == WARNING for i in issues)


def test_sub_unit_ratio_is_an_error(paper_data, write_scenario):
    paper_data["ratios"] = [0.5, 379.0]
    [issue] = ValidatorEngine().validate(write_scenario(paper_data))
    assert issue.field == "ratios[0]"
    assert issue.severity == ERROR


def test_zero_attribution_and_zero_bits_only_warn(paper_data, write_scenario):
    paper_data["fixture_constants"]["rounded_share"] = 0.0
    paper_data["fixture_constants"]["bits_per_block_override"] = 0.0
    issues = ValidatorEngine().validate(write_scenario(paper_data))
    assert {i.field for i in issues} == {
        "fixture_constants.rounded_share",
        "fixture_constants.bits_per_block_override",
    }
    assert all(i.severity == WARNING for i in issues)


def test_collector_separates_errors_from_warnings():
    collector = ErrorCollector()
    collector.collect(
        [
            ValidationIssue("a.yaml", "ratios[0]", "low", WARNING),
            ValidationIssue("a.yaml", "network.foo", "unknown key 'foo'"),
        ]
    )
    assert collector.has_errors()
    assert [i.field for i in collector.errors] == ["network.foo"]
    assert [i.field for i in collector.warnings] == ["ratios[0]"]


def test_collector_takes_check_failures(self_consistent_scenario, paper_scenario):
    loose = ErrorCollector()
    loose.collect_check(EnergyEstimator(self_consistent_scenario).check_against_reference())
    assert loose.warnings and not loose.has_errors()

    strict = ErrorCollector()
    strict.collect_check(EnergyEstimator(paper_scenario).check_against_reference(tolerance=1e-6))
    assert strict.has_errors()
    assert strict.errors[0].field.startswith("Table ")


def test_collector_display_goes_to_stderr(capsys):
    collector = ErrorCollector()
    collector.collect([ValidationIssue("a.yaml", "network.foo", "bad")])
    collector.display()
    captured = capsys.readouterr()
    assert "network.foo" in captured.err
    assert captured.out == ""


def test_empty_collector_displays_nothing(capsys):
    ErrorCollector().display()
    assert capsys.readouterr().err == ""


def test_collector_reports_uncomputable_cells(paper_data, write_scenario):
    paper_data["fixture_constants"]["rounded_share"] = 0.0
    scenario = resolve_scenario(write_scenario(paper_data))
    collector = ErrorCollector()
    collector.collect_check(EnergyEstimator(scenario).check_against_reference())
    assert collector.has_errors()
    assert any(i.message.startswith("computed n/a vs published") for i in collector.errors)
