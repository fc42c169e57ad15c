"""Scenario verdicts for the `validate` command."""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

from .classical_model import classical_landauer_per_block
from .errors import (
    ScenarioError,
    ScenarioNotFoundError,
    ScenarioSchemaError,
)
from .netstats_io import Scenario, resolve_scenario

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class ValidationIssue:
    file: str
    field: str
    message: str
    severity: str = ERROR


class ValidatorEngine:
    """Hard errors for anything that stops a scenario from loading or being
    projected; warnings for inputs that load but describe a physically odd setup."""

    def validate(self, ref: Union[str, Path]) -> List[ValidationIssue]:
        try:
            scenario = resolve_scenario(ref)
        except ScenarioNotFoundError:
            raise
        except ScenarioSchemaError as e:
            return [ValidationIssue(self._file(e), f, msg) for f, msg in e.issues]
        except ScenarioError as e:
            return [ValidationIssue(self._file(e), e.field or "<root>", e.message)]
        return self._soft_checks(scenario)

    @staticmethod
    def _file(error: ScenarioError) -> str:
        return str(error.path) if error.path is not None else "<scenario>"

    def _soft_checks(self, scenario: Scenario) -> List[ValidationIssue]:
        file = str(scenario.source) if scenario.source else scenario.name
        issues: List[ValidationIssue] = []

        # projections reject ratios below 1
        for i, ratio in enumerate(scenario.ratios):
            if ratio < 1:
                issues.append(
                    ValidationIssue(
                        file, f"ratios[{i}]", f"efficiency ratio {ratio:g} is below 1; projections need >= 1"
                    )
                )

        asic, net = scenario.asic, scenario.network
        share = asic.hashrate_th_per_s / net.network_hashrate_th_per_s
        if share > 1:
            issues.append(
                ValidationIssue(
                    file, "asic.hashrate_th_per_s",
                    f"miner hash rate exceeds the network's (share {share:.4g})", WARNING,
                )
            )

        constants = scenario.fixture_constants
        if constants.rounded_share == 0:
            issues.append(
                ValidationIssue(
                    file, "fixture_constants.rounded_share",
                    "zero share attributes no energy; attributed ratio and break-even are n/a", WARNING,
                )
            )

        landauer = classical_landauer_per_block(asic, net, scenario.temperature_k).energy_joules
        if landauer == 0:
            issues.append(
                ValidationIssue(
                    file, "fixture_constants.bits_per_block_override",
                    "zero bits per block gives a zero Landauer minimum; classical ratios are n/a", WARNING,
                )
            )
        elif asic.nameplate_energy_per_block_j / landauer < 1:
            issues.append(
                ValidationIssue(
                    file, "asic.nameplate_energy_per_block_j",
                    "nameplate energy per block is below the Landauer minimum", WARNING,
                )
            )
        return issues
