import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from rich.console import Console

from .errors import DomainError, UsageError
from .physics import DEFAULT_TEMPERATURE_K, ErasureLedger, TemperatureLike, erasure_energy

console = Console(stderr=True)

TERA = 1e12
MAX_TARGET_LIMIT = 2 ** 256


def _require_positive(name: str, value: float) -> None:
    if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class AsicSpec:
    """A classical SHA-256 ASIC miner.

    Attributes:
        hashrate_th_per_s: Rated hash rate in terahashes per second
        nameplate_power_w: Manufacturer's power draw in watts
        nameplate_energy_per_block_j: Manufacturer-derived energy per block, in
            joules, stored as quoted rather than re-derived from the wattage
        nand_per_hash: NAND gates evaluated per hash
        bits_per_nand: Bits erased per NAND evaluation
        bits_per_block_override: Replaces the computed bits-per-block when set
    """
    hashrate_th_per_s: float
    nameplate_power_w: float
    nameplate_energy_per_block_j: float
    nand_per_hash: int
    bits_per_nand: float
    bits_per_block_override: Optional[float] = None
    label: str = "Classical"

    def __post_init__(self) -> None:
        _require_positive("hashrate_th_per_s", self.hashrate_th_per_s)
        _require_positive("nameplate_power_w", self.nameplate_power_w)
        _require_positive("nameplate_energy_per_block_j", self.nameplate_energy_per_block_j)
        _require_positive("bits_per_nand", self.bits_per_nand)
        if not isinstance(self.nand_per_hash, int) or self.nand_per_hash <= 0:
            raise DomainError(f"nand_per_hash must be a positive integer, got {self.nand_per_hash!r}")
        if self.bits_per_block_override is not None:
            override = self.bits_per_block_override
            if not math.isfinite(override) or override < 0:
                raise DomainError(f"bits_per_block_override must be non-negative, got {override!r}")


@dataclass(frozen=True)
class NetworkSnapshot:
    difficulty: float
    network_hashrate_th_per_s: float
    block_time_s: float
    network_energy_per_block_j: float
    max_target: int
    annual_consumption_twh: Optional[float] = None
    search_space_bits: int = 256

    def __post_init__(self) -> None:
        _require_positive("difficulty", self.difficulty)
        _require_positive("network_hashrate_th_per_s", self.network_hashrate_th_per_s)
        _require_positive("block_time_s", self.block_time_s)
        _require_positive("network_energy_per_block_j", self.network_energy_per_block_j)
        if not isinstance(self.max_target, int) or not 0 < self.max_target < MAX_TARGET_LIMIT:
            raise DomainError("max_target must be an integer in (0, 2**256)")
        if self.annual_consumption_twh is not None:
            _require_positive("annual_consumption_twh", self.annual_consumption_twh)
        if not isinstance(self.search_space_bits, int) or not 1 <= self.search_space_bits <= 256:
            raise DomainError("search_space_bits must be an integer in [1, 256]")

    @property
    def search_space(self) -> int:
        return 2 ** self.search_space_bits


@dataclass(frozen=True)
class EfficiencyRatio:
    actual_j: float
    landauer_j: float
    ratio: float


class AttributionMethod(str, Enum):
    NETWORK_ATTRIBUTION = "network-attribution"
    NAMEPLATE = "nameplate"


def hashes_per_block(spec: AsicSpec, snap: NetworkSnapshot) -> float:
    """Hashes the ASIC computes during one block interval."""
    return spec.hashrate_th_per_s * TERA * snap.block_time_s


def bits_erased_per_hash(spec: AsicSpec) -> float:
    """NAND gates per hash times bits erased per NAND."""
    return spec.nand_per_hash * spec.bits_per_nand


def classical_landauer_per_block(
    spec: AsicSpec,
    snap: NetworkSnapshot,
    temperature: TemperatureLike = DEFAULT_TEMPERATURE_K,
) -> ErasureLedger:
    """Landauer minimum for one block cycle of the ASIC."""
    if spec.bits_per_block_override is not None:
        bits = spec.bits_per_block_override
    else:
        bits = hashes_per_block(spec, snap) * bits_erased_per_hash(spec)
    return erasure_energy(bits, temperature)


def network_share(spec: AsicSpec, snap: NetworkSnapshot) -> float:
    """The ASIC's fraction of the network hash rate; warns above 1."""
    share = spec.hashrate_th_per_s / snap.network_hashrate_th_per_s
    if share > 1:
        console.print(
            f"[yellow]Warning: {spec.label} hash rate exceeds the network's (share {share:.4g})[/yellow]"
        )
    return share


def actual_energy_per_block(
    spec: AsicSpec,
    snap: NetworkSnapshot,
    method: Union[AttributionMethod, str] = AttributionMethod.NETWORK_ATTRIBUTION,
    share: Optional[float] = None,
) -> float:
    """Real-world joules per block for the ASIC.

    network-attribution charges the miner its hash-rate share of the network's
    per-block energy; `share` overrides the computed share (the published
    2258.69 J is only reproduced with the rounded 7.0e-7). nameplate returns
    the configured per-block figure as is.
    """
    try:
        method = AttributionMethod(method)
    except ValueError:
        choices = ", ".join(m.value for m in AttributionMethod)
        raise UsageError(f"unknown attribution method {method!r} (expected one of: {choices})")

    if method is AttributionMethod.NAMEPLATE:
        return spec.nameplate_energy_per_block_j

    if share is None:
        share = network_share(spec, snap)
    elif not math.isfinite(share) or share < 0:
        raise DomainError(f"share must be finite and non-negative, got {share!r}")
    return snap.network_energy_per_block_j * share


def efficiency_ratio(actual_j: float, landauer_j: float) -> EfficiencyRatio:
    """actual / Landauer; warns when the device would beat the limit."""
    _require_positive("actual_j", actual_j)
    _require_positive("landauer_j", landauer_j)
    ratio = actual_j / landauer_j
    if ratio < 1:
        console.print(
            f"[yellow]Warning: efficiency ratio {ratio:.4g} is below 1; "
            f"the device would beat the Landauer limit[/yellow]"
        )
    return EfficiencyRatio(actual_j=actual_j, landauer_j=landauer_j, ratio=ratio)
