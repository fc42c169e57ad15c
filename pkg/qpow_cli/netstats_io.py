"""Scenario files in, reports out.

Scenarios are YAML documents validated against a strict, versioned pydantic
schema (unknown keys are rejected) and then turned into the frozen domain
dataclasses. Reports are written as an aligned text table, RFC 4180 CSV or a
structured JSON document that keeps full float precision.
"""
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple, TypeVar, Union

import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    field_validator,
    model_validator,
)
from rich.console import Console
from rich.table import Table

from . import __version__
from .classical_model import AsicSpec, NetworkSnapshot
from .errors import (
    DomainError,
    ReportWriteError,
    ScenarioInvariantError,
    ScenarioNotFoundError,
    ScenarioSchemaError,
    ScenarioSyntaxError,
)
from .physics import TemperatureK
from .quantum_model import MAX_ECC_LAYERS, QuantumArchitecture, target_from_compact

console = Console()

SCHEMA_VERSION = 1
FIXTURES_DIR = Path(__file__).parent / "fixtures"
REFERENCE_SCENARIO = "paper-2022"
SELF_CONSISTENT_SCENARIO = "self-consistent"


# --- schema -----------------------------------------------------------------

class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _parse_int(value: Any) -> Any:
    if isinstance(value, str):
        try:
            return int(value.replace("_", ""), 0)
        except ValueError:
            raise ValueError(f"not an integer literal: {value!r}")
    return value


class NetworkModel(_StrictModel):
    difficulty: PositiveFloat
    network_hashrate_th_per_s: PositiveFloat
    block_time_s: PositiveFloat
    network_energy_per_block_j: PositiveFloat
    max_target: Optional[int] = None
    max_target_bits: Optional[int] = None
    annual_consumption_twh: Optional[PositiveFloat] = None
    search_space_bits: int = Field(256, ge=1, le=256)

    @field_validator("max_target", "max_target_bits", mode="before")
    @classmethod
    def coerce_int_literals(cls, value: Any) -> Any:
        return _parse_int(value)

    @model_validator(mode="after")
    def check_single_target(self) -> "NetworkModel":
        if (self.max_target is None) == (self.max_target_bits is None):
            raise ValueError("give exactly one of max_target or max_target_bits")
        return self


class AsicModel(_StrictModel):
    label: str = "Classical"
    hashrate_th_per_s: PositiveFloat
    nameplate_power_w: PositiveFloat
    nameplate_energy_per_block_j: PositiveFloat
    nand_per_hash: PositiveInt
    bits_per_nand: PositiveFloat


class QuantumArchitectureModel(_StrictModel):
    label: str = ""
    ecc_layers: int = Field(ge=0, le=MAX_ECC_LAYERS)
    measurements_per_ec_step: PositiveInt = 12
    gates_per_iteration: PositiveInt = 1280
    corrected_qubits: PositiveInt
    output_qubits: PositiveInt = 512
    gate_time_s: Optional[PositiveFloat] = None


class FixtureConstantsModel(_StrictModel):
    bits_per_block_override: Optional[NonNegativeFloat] = None
    ec_steps_paper: Optional[NonNegativeFloat] = None
    rounded_share: Optional[float] = Field(None, ge=0, le=1)


class ScenarioModel(_StrictModel):
    schema_version: Literal[1]
    name: str
    description: str = ""
    temperature_k: PositiveFloat = 293.0
    ratios: List[PositiveFloat] = Field(min_length=1)
    network: NetworkModel
    asic: AsicModel
    quantum_architectures: List[QuantumArchitectureModel] = Field(min_length=1)
    fixture_constants: FixtureConstantsModel = Field(default_factory=FixtureConstantsModel)


# --- domain -----------------------------------------------------------------

@dataclass(frozen=True)
class FixtureConstants:
    bits_per_block_override: Optional[float] = None
    ec_steps_paper: Optional[float] = None
    rounded_share: Optional[float] = None


@dataclass(frozen=True)
class Scenario:
    name: str
    network: NetworkSnapshot
    asic: AsicSpec
    quantum_architectures: Tuple[QuantumArchitecture, ...]
    ratios: Tuple[float, ...]
    temperature_k: TemperatureK
    fixture_constants: FixtureConstants = FixtureConstants()
    description: str = ""
    source: Optional[Path] = field(default=None, compare=False)

    @property
    def is_reference_fixture(self) -> bool:
        return self.name == REFERENCE_SCENARIO


def _format_loc(loc: Sequence[Union[str, int]]) -> str:
    parts: List[str] = []
    for item in loc:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts) or "<root>"


def _schema_issues(error: ValidationError) -> List[Tuple[str, str]]:
    issues = []
    for err in error.errors():
        loc = _format_loc(err["loc"])
        if err["type"] == "extra_forbidden":
            issues.append((loc, f"unknown key {str(err['loc'][-1])!r}"))
        else:
            issues.append((loc, err["msg"]))
    return issues


BuiltT = TypeVar("BuiltT")


def _build(path: Optional[Path], section: str, factory: Callable[..., BuiltT], **kwargs: Any) -> BuiltT:
    try:
        return factory(**kwargs)
    except DomainError as e:
        raise ScenarioInvariantError(path, str(e), field=section)


def scenario_from_dict(data: Any, path: Optional[Path] = None) -> Scenario:
    """Validate a parsed YAML mapping and build the domain objects from it."""
    if not isinstance(data, dict):
        raise ScenarioSchemaError(path, [("<root>", "scenario must be a mapping")])
    try:
        model = ScenarioModel.model_validate(data)
    except ValidationError as e:
        raise ScenarioSchemaError(path, _schema_issues(e))

    net = model.network
    if net.max_target is not None:
        max_target = net.max_target
    else:
        try:
            max_target = target_from_compact(net.max_target_bits)
        except DomainError as e:
            raise ScenarioInvariantError(path, str(e), field="network.max_target_bits")

    constants = FixtureConstants(**model.fixture_constants.model_dump())
    network = _build(
        path, "network", NetworkSnapshot,
        difficulty=net.difficulty,
        network_hashrate_th_per_s=net.network_hashrate_th_per_s,
        block_time_s=net.block_time_s,
        network_energy_per_block_j=net.network_energy_per_block_j,
        max_target=max_target,
        annual_consumption_twh=net.annual_consumption_twh,
        search_space_bits=net.search_space_bits,
    )
    asic = _build(
        path, "asic", AsicSpec,
        bits_per_block_override=constants.bits_per_block_override,
        **model.asic.model_dump(),
    )
    architectures = tuple(
        _build(path, f"quantum_architectures[{i}]", QuantumArchitecture, **arch.model_dump())
        for i, arch in enumerate(model.quantum_architectures)
    )
    temperature = _build(path, "temperature_k", TemperatureK, kelvin=model.temperature_k)
    return Scenario(
        name=model.name,
        description=model.description,
        network=network,
        asic=asic,
        quantum_architectures=architectures,
        ratios=tuple(model.ratios),
        temperature_k=temperature,
        fixture_constants=constants,
        source=path,
    )


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and fully validate a scenario file."""
    path = Path(path)
    if not path.is_file():
        raise ScenarioNotFoundError(path, "scenario file not found")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioNotFoundError(path, f"cannot read scenario file: {e.strerror or e}")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ScenarioSyntaxError(path, f"malformed YAML: {e}")
    return scenario_from_dict(data, path)


def list_bundled_scenarios() -> List[str]:
    return sorted(p.stem for p in FIXTURES_DIR.glob("*.yaml"))


def bundled_scenario_path(name: str) -> Path:
    path = FIXTURES_DIR / f"{name}.yaml"
    if not path.is_file():
        raise ScenarioNotFoundError(path, f"no bundled scenario named {name!r}")
    return path


def resolve_scenario(ref: Optional[Union[str, Path]] = None) -> Scenario:
    """Load a bundled scenario by name, or a scenario file by path."""
    if ref is None:
        ref = REFERENCE_SCENARIO
    if isinstance(ref, str) and ref in list_bundled_scenarios():
        return load_scenario(bundled_scenario_path(ref))
    return load_scenario(Path(ref))


def scenario_to_dict(scenario: Scenario) -> Dict[str, Any]:
    net = scenario.network
    asic = scenario.asic
    network: Dict[str, Any] = {
        "difficulty": net.difficulty,
        "network_hashrate_th_per_s": net.network_hashrate_th_per_s,
        "block_time_s": net.block_time_s,
        "network_energy_per_block_j": net.network_energy_per_block_j,
        "max_target": f"{net.max_target:#066x}",
        "search_space_bits": net.search_space_bits,
    }
    if net.annual_consumption_twh is not None:
        network["annual_consumption_twh"] = net.annual_consumption_twh

    architectures = []
    for arch in scenario.quantum_architectures:
        entry: Dict[str, Any] = {
            "label": arch.label,
            "ecc_layers": arch.ecc_layers,
            "measurements_per_ec_step": arch.measurements_per_ec_step,
            "gates_per_iteration": arch.gates_per_iteration,
            "corrected_qubits": arch.corrected_qubits,
            "output_qubits": arch.output_qubits,
        }
        if arch.gate_time_s is not None:
            entry["gate_time_s"] = arch.gate_time_s
        architectures.append(entry)

    constants = {k: v for k, v in vars(scenario.fixture_constants).items() if v is not None}
    return {
        "schema_version": SCHEMA_VERSION,
        "name": scenario.name,
        "description": scenario.description,
        "temperature_k": scenario.temperature_k.kelvin,
        "ratios": list(scenario.ratios),
        "network": network,
        "asic": {
            "label": asic.label,
            "hashrate_th_per_s": asic.hashrate_th_per_s,
            "nameplate_power_w": asic.nameplate_power_w,
            "nameplate_energy_per_block_j": asic.nameplate_energy_per_block_j,
            "nand_per_hash": asic.nand_per_hash,
            "bits_per_nand": asic.bits_per_nand,
        },
        "quantum_architectures": architectures,
        "fixture_constants": constants,
    }


def save_scenario(scenario: Scenario, path: Union[str, Path]) -> None:
    """Write a scenario back out as YAML that `load_scenario` accepts."""
    path = Path(path)
    try:
        path.write_text(yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False), encoding="utf-8")
    except OSError as e:
        raise ReportWriteError(f"cannot write scenario to {path}: {e.strerror or e}")


# --- reports ----------------------------------------------------------------

class ReportFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"
    STRUCTURED = "structured"


Number = Union[int, float]


@dataclass(frozen=True)
class Column:
    name: str
    unit: str


@dataclass(frozen=True)
class ReportRow:
    label: str
    values: Tuple[Optional[Number], ...]


@dataclass(frozen=True)
class Quantity:
    label: str
    value: Optional[Number]
    unit: str


@dataclass(frozen=True)
class ReportDocument:
    """A titled table of labelled rows; every column carries a unit."""
    title: str
    scenario_id: str
    columns: Tuple[Column, ...]
    rows: Tuple[ReportRow, ...] = ()
    summary: Tuple[Quantity, ...] = ()
    notes: Tuple[str, ...] = ()
    format: ReportFormat = ReportFormat.TEXT
    metadata: Tuple[Tuple[str, str], ...] = (("tool", f"qpow-cli {__version__}"),)

    def __post_init__(self) -> None:
        for column in self.columns:
            if not column.unit:
                raise DomainError(f"column {column.name!r} has no unit")
        for row in self.rows:
            if len(row.values) != len(self.columns):
                raise DomainError(f"row {row.label!r} has {len(row.values)} values for {len(self.columns)} columns")

    def cell(self, row_label: str, column_name: str) -> Optional[Number]:
        index = [c.name for c in self.columns].index(column_name)
        for row in self.rows:
            if row.label == row_label:
                return row.values[index]
        raise KeyError(row_label)


def _display(value: Optional[Number]) -> str:
    if value is None:
        return "-"
    if isinstance(value, int):
        return str(value)
    return f"{value:.4g}"


def _csv_cell(value: Optional[Number]) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def render_text(doc: ReportDocument, target: Console) -> None:
    """Rich table of the rows, then the summary quantities and any notes."""
    table = Table(title=f"{doc.title} [{doc.scenario_id}]")
    table.add_column("Infrastructure", style="cyan")
    for column in doc.columns:
        table.add_column(f"{column.name} ({column.unit})", justify="right")
    for row in doc.rows:
        table.add_row(row.label, *[_display(v) for v in row.values])
    target.print(table)

    if doc.summary:
        summary = Table(show_header=False, box=None)
        summary.add_column("Quantity", style="cyan")
        summary.add_column("Value", justify="right")
        summary.add_column("Unit")
        for q in doc.summary:
            summary.add_row(q.label, _display(q.value), q.unit)
        target.print(summary)
    for note in doc.notes:
        target.print(f"[yellow]Note: {note}[/yellow]")


def render_csv(doc: ReportDocument) -> str:
    """Rows only, one header line with units; floats at full precision."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["label"] + [f"{c.name} [{c.unit}]" for c in doc.columns])
    for row in doc.rows:
        writer.writerow([row.label] + [_csv_cell(v) for v in row.values])
    return buffer.getvalue()


def report_to_dict(doc: ReportDocument, fmt: ReportFormat = ReportFormat.STRUCTURED) -> Dict[str, Any]:
    return {
        "format": fmt.value,
        "title": doc.title,
        "scenario_id": doc.scenario_id,
        "metadata": dict(doc.metadata),
        "columns": [{"name": c.name, "unit": c.unit} for c in doc.columns],
        "rows": [{"label": r.label, "values": list(r.values)} for r in doc.rows],
        "summary": [{"label": q.label, "value": q.value, "unit": q.unit} for q in doc.summary],
        "notes": list(doc.notes),
    }


def render_structured(doc: ReportDocument) -> str:
    return json.dumps(report_to_dict(doc), indent=2) + "\n"


def report_from_dict(data: Dict[str, Any]) -> ReportDocument:
    return ReportDocument(
        title=data["title"],
        scenario_id=data["scenario_id"],
        columns=tuple(Column(c["name"], c["unit"]) for c in data["columns"]),
        rows=tuple(ReportRow(r["label"], tuple(r["values"])) for r in data["rows"]),
        summary=tuple(Quantity(q["label"], q["value"], q["unit"]) for q in data.get("summary", [])),
        notes=tuple(data.get("notes", [])),
        format=ReportFormat(data.get("format", ReportFormat.STRUCTURED.value)),
        metadata=tuple(sorted(data.get("metadata", {}).items())),
    )


def read_report(path: Union[str, Path]) -> ReportDocument:
    """Load a report written in the structured format."""
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_report(
    doc: ReportDocument,
    fmt: Optional[ReportFormat] = None,
    destination: Optional[Union[str, Path]] = None,
) -> None:
    """Serialise a report to a file path, or to stdout when destination is None or '-'."""
    fmt = ReportFormat(fmt or doc.format)
    to_stdout = destination is None or str(destination) == "-"

    if fmt is ReportFormat.TEXT:
        if to_stdout:
            render_text(doc, console)
            return
        buffer = io.StringIO()
        render_text(doc, Console(file=buffer, width=140, no_color=True, force_terminal=False))
        payload = buffer.getvalue()
    elif fmt is ReportFormat.CSV:
        payload = render_csv(doc)
    else:
        payload = render_structured(doc)

    if to_stdout:
        sys.stdout.write(payload)
        sys.stdout.flush()
        return
    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(payload)
    except OSError as e:
        raise ReportWriteError(f"cannot write report to {path}: {e.strerror or e}")
