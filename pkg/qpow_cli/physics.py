"""Landauer-limit energy accounting.

Every energy figure in the package is built from `erasure_energy`: the minimum
heat dissipated when `bits` bits are erased into a sink at temperature T.
"""
import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError


@dataclass(frozen=True)
class PhysConstants:
    boltzmann_k: float = 1.380649e-23  # J/K, exact SI value
    ln2: float = math.log(2.0)


CONSTANTS = PhysConstants()

# Room temperature; reproduces the published 1.324 J and 1.4336e-18 J within 1%.
DEFAULT_TEMPERATURE_K = 293.0


@dataclass(frozen=True)
class TemperatureK:
    kelvin: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.kelvin) or self.kelvin <= 0:
            raise DomainError(f"temperature must be a finite positive kelvin value, got {self.kelvin!r}")


@dataclass(frozen=True)
class ErasureLedger:
    bits_erased: float
    temperature: TemperatureK
    energy_joules: float


TemperatureLike = Union[TemperatureK, float, int]


def as_temperature(value: TemperatureLike) -> TemperatureK:
    if isinstance(value, TemperatureK):
        return value
    return TemperatureK(float(value))


def landauer_bit_energy(temperature: TemperatureLike) -> float:
    """Minimum energy in joules to erase one bit at the given sink temperature."""
    t = as_temperature(temperature)
    return CONSTANTS.boltzmann_k * t.kelvin * CONSTANTS.ln2


def erasure_energy(bits: float, temperature: TemperatureLike = DEFAULT_TEMPERATURE_K) -> ErasureLedger:
    """E = k_B * T * ln2 * B.

    Bit counts are real-valued: gate-level accounting yields fractional bits
    per gate (0.625 for a NAND).
    """
    t = as_temperature(temperature)
    bits = float(bits)
    if not math.isfinite(bits) or bits < 0:
        raise DomainError(f"bits erased must be finite and non-negative, got {bits!r}")
    return ErasureLedger(
        bits_erased=bits,
        temperature=t,
        energy_joules=bits * landauer_bit_energy(t),
    )
