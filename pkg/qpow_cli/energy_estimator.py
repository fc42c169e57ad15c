"""End-to-end energy pipeline over a Scenario.

Builds the per-infrastructure rows (classical ASIC plus one row per quantum
architecture) and turns them into the two published tables, the ratio-sweep
energy report and the advantage / savings summary. Also holds the published
reference cells used by `tables --check`.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .classical_model import (
    AttributionMethod,
    actual_energy_per_block,
    bits_erased_per_hash,
    classical_landauer_per_block,
    efficiency_ratio,
    hashes_per_block,
    network_share,
)
from .netstats_io import Column, Quantity, ReportDocument, ReportRow, Scenario
from .quantum_model import (
    QuantumArchitecture,
    advantage_factor,
    annual_savings,
    break_even_ratio,
    ec_steps_total,
    erased_bits,
    mining_runtime_s,
    projected_actual_energy,
    quantum_landauer_energy,
    sweep_projected_energy,
)

CLASSICAL_LABEL = "Classical"
LANDAUER_COLUMN = "Landauer Theoretical Minimum"
BREAK_EVEN_COLUMN = "Ratio to Equal Classical Actual"
DEFAULT_TOLERANCE = 0.01

RowKey = Union[str, int]  # "classical" or the number of ECC layers

# Published cells keyed by row (classical / ECC layers) and column
# ("landauer" or the efficiency ratio).
REFERENCE_TABLE_II: Dict[RowKey, Dict[Union[str, float], float]] = {
    "classical": {"landauer": 1.324, 379.0: 502.0, 1706.0: 2258.69},
    0: {"landauer": 1.43e-18, 379.0: 5.43e-16, 1706.0: 2.4457216e-15},
    1: {"landauer": 3.75e-10, 379.0: 1.42e-7, 1706.0: 6.4e-7},
    2: {"landauer": 4.5e-9, 379.0: 1.70e-6, 1706.0: 7.68e-6},
}
REFERENCE_TABLE_I: Dict[RowKey, float] = {
    "classical": 1706.0,
    0: 1.58e21,
    1: 6.02e12,
    2: 5.02e11,
}
# Printed values that contradict the surrounding text and cannot be reproduced;
# the text values above are used instead.
SUSPECTED_ERRATA: Dict[str, float] = {
    "table_i_1_layer_landauer_j": 2.5e-10,
    "table_ii_non_ecc_ratio_1706_j": 1.43e-15,
}


@dataclass(frozen=True)
class InfrastructureRow:
    label: str
    key: RowKey
    landauer_j: float
    erased_bits: float
    projected_j: Tuple[float, ...]
    break_even: Optional[float]
    ec_steps: Optional[float] = None
    gate_count: Optional[float] = None
    runtime_s: Optional[float] = None


@dataclass(frozen=True)
class ClassicalFigures:
    share: float
    share_used: float
    hashes_per_block: float
    bits_per_hash: float
    landauer_j: float
    bits_per_block: float
    attributed_j: float
    nameplate_j: float
    attributed_ratio: Optional[float]
    nameplate_ratio: Optional[float]


@dataclass(frozen=True)
class CellCheck:
    table: str
    row: str
    column: str
    computed: Optional[float]
    reference: float

    @property
    def deviation(self) -> float:
        """Relative deviation; infinite when the cell could not be computed."""
        if self.computed is None:
            return float("inf")
        return abs(self.computed - self.reference) / abs(self.reference)


@dataclass
class CheckResult:
    scenario_id: str
    strict: bool
    tolerance: float
    cells: List[CellCheck] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.cells), default=0.0)

    @property
    def failures(self) -> List[CellCheck]:
        return [c for c in self.cells if c.deviation > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failures


def _ratio_or_none(actual_j: float, landauer_j: float) -> Optional[float]:
    # zero share or a zero-bit override leaves the ratio undefined
    if actual_j == 0 or landauer_j == 0:
        return None
    return efficiency_ratio(actual_j, landauer_j).ratio


class EnergyEstimator:
    """Runs a scenario through the classical and quantum models."""

    def __init__(self, scenario: Scenario, ratios: Optional[Sequence[float]] = None) -> None:
        self.scenario = scenario
        self.ratios: Tuple[float, ...] = tuple(ratios) if ratios else scenario.ratios
        self.temperature = scenario.temperature_k

    def classical_figures(self) -> ClassicalFigures:
        s = self.scenario
        share = network_share(s.asic, s.network)
        share_used = s.fixture_constants.rounded_share if s.fixture_constants.rounded_share is not None else share
        ledger = classical_landauer_per_block(s.asic, s.network, self.temperature)
        attributed = actual_energy_per_block(s.asic, s.network, AttributionMethod.NETWORK_ATTRIBUTION, share=share_used)
        nameplate = actual_energy_per_block(s.asic, s.network, AttributionMethod.NAMEPLATE)
        return ClassicalFigures(
            share=share,
            share_used=share_used,
            hashes_per_block=hashes_per_block(s.asic, s.network),
            bits_per_hash=bits_erased_per_hash(s.asic),
            landauer_j=ledger.energy_joules,
            bits_per_block=ledger.bits_erased,
            attributed_j=attributed,
            nameplate_j=nameplate,
            attributed_ratio=_ratio_or_none(attributed, ledger.energy_joules),
            nameplate_ratio=_ratio_or_none(nameplate, ledger.energy_joules),
        )

    def _ec_steps(self, arch: QuantumArchitecture) -> float:
        override = self.scenario.fixture_constants.ec_steps_paper
        if override is not None:
            return override
        net = self.scenario.network
        return ec_steps_total(
            net.search_space, net.max_target, net.difficulty, arch.gates_per_iteration, arch.corrected_qubits
        )

    def infrastructure_rows(self) -> List[InfrastructureRow]:
        classical = self.classical_figures()
        rows = [
            InfrastructureRow(
                label=CLASSICAL_LABEL,
                key="classical",
                landauer_j=classical.landauer_j,
                erased_bits=classical.bits_per_block,
                projected_j=tuple(sweep_projected_energy(classical.landauer_j, self.ratios)),
                break_even=classical.attributed_ratio,
            )
        ]
        for arch in self.scenario.quantum_architectures:
            steps = self._ec_steps(arch)
            landauer = quantum_landauer_energy(arch, steps, self.temperature)
            gates = steps / arch.corrected_qubits
            rows.append(
                InfrastructureRow(
                    label=arch.display_name,
                    key=arch.ecc_layers,
                    landauer_j=landauer,
                    erased_bits=erased_bits(arch, steps),
                    projected_j=tuple(sweep_projected_energy(landauer, self.ratios)),
                    break_even=break_even_ratio(classical.attributed_j, landauer) if classical.attributed_j else None,
                    ec_steps=steps if arch.ecc_layers else None,
                    gate_count=gates,
                    runtime_s=mining_runtime_s(gates, arch.gate_time_s) if arch.gate_time_s else None,
                )
            )
        return rows

    def advantage_summary(self) -> Tuple[Optional[float], Optional[float], InfrastructureRow, float]:
        """Advantage of the most heavily corrected architecture at the largest ratio.

        Returns (advantage factor, annual TWh saved, row used, ratio used). The
        first two are None when the classical miner is attributed no energy.
        """
        classical = self.classical_figures()
        quantum_rows = self.infrastructure_rows()[1:]
        reference = max(quantum_rows, key=lambda r: r.key)
        ratio = max(self.ratios)
        if not classical.attributed_j:
            return None, None, reference, ratio
        quantum_actual = projected_actual_energy(reference.landauer_j, ratio)
        advantage = advantage_factor(classical.attributed_j, quantum_actual)
        savings = None
        if self.scenario.network.annual_consumption_twh is not None:
            savings = annual_savings(self.scenario.network, advantage)
        return advantage, savings, reference, ratio

    def _ratio_columns(self) -> Tuple[Column, ...]:
        return tuple(Column(f"Ratio (1:{r:g})", "J") for r in self.ratios)

    def table_ii(self) -> ReportDocument:
        rows = self.infrastructure_rows()
        return ReportDocument(
            title="Energy consumption of mining infrastructures per block",
            scenario_id=self.scenario.name,
            columns=(Column(LANDAUER_COLUMN, "J"),) + self._ratio_columns(),
            rows=tuple(ReportRow(r.label, (r.landauer_j,) + r.projected_j) for r in rows),
        )

    def table_i(self) -> ReportDocument:
        rows = self.infrastructure_rows()
        return ReportDocument(
            title="Efficiency ratio needed to equal the classical actual energy",
            scenario_id=self.scenario.name,
            columns=(Column(LANDAUER_COLUMN, "J"), Column(BREAK_EVEN_COLUMN, "1")),
            rows=tuple(ReportRow(r.label, (r.landauer_j, r.break_even)) for r in rows),
        )

    def tables_report(self) -> ReportDocument:
        """Both published tables side by side: the Table II columns then the break-even column."""
        rows = self.infrastructure_rows()
        return ReportDocument(
            title="Required efficiency ratio for various infrastructures",
            scenario_id=self.scenario.name,
            columns=(Column(LANDAUER_COLUMN, "J"),) + self._ratio_columns() + (Column(BREAK_EVEN_COLUMN, "1"),),
            rows=tuple(ReportRow(r.label, (r.landauer_j,) + r.projected_j + (r.break_even,)) for r in rows),
        )

    def summary_quantities(self) -> Tuple[Quantity, ...]:
        c = self.classical_figures()
        advantage, savings, reference, ratio = self.advantage_summary()
        return (
            Quantity("Network hash-rate share", c.share, "1"),
            Quantity("Share used for attribution", c.share_used, "1"),
            Quantity("Hashes per block", c.hashes_per_block, "hash"),
            Quantity("Bits erased per block (classical)", c.bits_per_block, "bit"),
            Quantity("Network-attributed energy", c.attributed_j, "J"),
            Quantity("Nameplate energy", c.nameplate_j, "J"),
            Quantity("Attributed efficiency ratio", c.attributed_ratio, "1"),
            Quantity("Nameplate efficiency ratio", c.nameplate_ratio, "1"),
            Quantity(f"Advantage factor ({reference.label}, 1:{ratio:g})", advantage, "1"),
            Quantity("Annual savings", savings, "TWh/yr"),
        )

    def energy_report(self) -> ReportDocument:
        rows = self.infrastructure_rows()
        columns = (
            (Column(LANDAUER_COLUMN, "J"), Column("Erased bits", "bit"))
            + self._ratio_columns()
            + (Column("Runtime", "s"),)
        )
        return ReportDocument(
            title="Landauer minimum and projected energy per block",
            scenario_id=self.scenario.name,
            columns=columns,
            rows=tuple(
                ReportRow(r.label, (r.landauer_j, r.erased_bits) + r.projected_j + (r.runtime_s,)) for r in rows
            ),
            summary=self.summary_quantities(),
            notes=(f"Heat-sink temperature {self.temperature.kelvin:g} K",),
        )

    def breakeven_report(self) -> ReportDocument:
        doc = self.table_i()
        advantage, savings, reference, ratio = self.advantage_summary()
        return ReportDocument(
            title=doc.title,
            scenario_id=doc.scenario_id,
            columns=doc.columns,
            rows=doc.rows,
            summary=(Quantity(f"Advantage factor ({reference.label}, 1:{ratio:g})", advantage, "1"),),
        )

    def check_against_reference(self, tolerance: float = DEFAULT_TOLERANCE) -> CheckResult:
        """Compare computed cells with the published ones they correspond to."""
        result = CheckResult(
            scenario_id=self.scenario.name, strict=self.scenario.is_reference_fixture, tolerance=tolerance
        )
        for row in self.infrastructure_rows():
            reference = REFERENCE_TABLE_II.get(row.key)
            if reference is None:
                continue
            result.cells.append(CellCheck("II", row.label, LANDAUER_COLUMN, row.landauer_j, reference["landauer"]))
            for ratio, value in zip(self.ratios, row.projected_j):
                if ratio in reference:
                    result.cells.append(CellCheck("II", row.label, f"Ratio (1:{ratio:g})", value, reference[ratio]))
            result.cells.append(
                CellCheck("I", row.label, BREAK_EVEN_COLUMN, row.break_even, REFERENCE_TABLE_I[row.key])
            )
        return result

    def check_report(self, result: CheckResult) -> ReportDocument:
        max_deviation = result.max_deviation
        return ReportDocument(
            title="Deviation from published cells",
            scenario_id=result.scenario_id,
            columns=(Column("Computed", "as cell"), Column("Published", "as cell"), Column("Deviation", "1")),
            rows=tuple(
                ReportRow(
                    f"Table {c.table} / {c.row} / {c.column}",
                    (c.computed, c.reference, c.deviation if c.computed is not None else None),
                )
                for c in result.cells
            ),
            summary=(
                Quantity("Max relative deviation", max_deviation if math.isfinite(max_deviation) else None, "1"),
            ),
        )
