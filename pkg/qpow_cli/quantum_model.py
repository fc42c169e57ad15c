"""Cost model of a Grover-based quantum miner.

Counts flow in one direction: target -> marked count M -> iterations t ->
gate count E = t*g -> error-correction steps E*d -> erased bits -> Landauer
energy -> ratio-scaled projections. N and max_target are exact Python ints
(up to 2**256); M, t and everything downstream are floats.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .classical_model import MAX_TARGET_LIMIT, NetworkSnapshot
from .errors import ConfigurationError, DomainError
from .physics import DEFAULT_TEMPERATURE_K, TemperatureLike, erasure_energy

MAX_ECC_LAYERS = 4
# below this Grover step the success probability stops changing at float precision
MIN_RESOLVED_STEP = 1e-12
MAX_CORRECTION_STEPS = 4


@dataclass(frozen=True)
class QuantumArchitecture:
    """A quantum miner protected by `ecc_layers` concatenated Shor-code layers.

    c counts error-correcting measurements per correction step, g gates per
    Grover iteration, d qubits under correction, q output qubits measured at
    the end. ecc_layers == 0 is a non-ECC (NISQ) device.
    """
    ecc_layers: int = 0
    measurements_per_ec_step: int = 12
    gates_per_iteration: int = 1280
    corrected_qubits: int = 512
    output_qubits: int = 512
    label: str = ""
    gate_time_s: Optional[float] = None

    def __post_init__(self) -> None:
        if not isinstance(self.ecc_layers, int) or not 0 <= self.ecc_layers <= MAX_ECC_LAYERS:
            raise DomainError(f"ecc_layers must be an integer in [0, {MAX_ECC_LAYERS}], got {self.ecc_layers!r}")
        for name in ("measurements_per_ec_step", "gates_per_iteration", "corrected_qubits", "output_qubits"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise DomainError(f"{name} must be a positive integer, got {value!r}")
        if self.gate_time_s is not None and not (math.isfinite(self.gate_time_s) and self.gate_time_s > 0):
            raise DomainError(f"gate_time_s must be positive, got {self.gate_time_s!r}")

    @property
    def display_name(self) -> str:
        if self.label:
            return self.label
        if self.ecc_layers == 0:
            return "Non-ECC NISQ Miner"
        return f"{self.ecc_layers} Layer ECC Quantum Miner"


@dataclass(frozen=True)
class GroverPlan:
    """Iteration count chosen for a search and the success probability it reaches."""

    search_space_n: int
    marked_count: float
    iterations: float
    success_probability: float

    def __post_init__(self) -> None:
        _check_search(self.search_space_n, self.marked_count)
        if not 0.0 <= self.success_probability <= 1.0:
            raise DomainError("success_probability must lie in [0, 1]")

    @classmethod
    def for_probability(cls, n: int, m: float, p_target: float) -> "GroverPlan":
        t = iterations_for_success(n, m, p_target)
        return cls(n, m, float(t), grover_success_probability(n, m, t))


@dataclass(frozen=True)
class EccCost:
    """Per-block error-correction bookkeeping for one architecture."""

    gate_count: float
    ec_steps: float
    erased_bits: float


def _check_search(n: int, m: float) -> None:
    if not isinstance(n, int) or n <= 0:
        raise DomainError(f"search space N must be a positive integer, got {n!r}")
    if not math.isfinite(m) or m <= 0:
        raise DomainError(f"marked count M must be positive, got {m!r}")
    if m > n:
        raise DomainError(f"marked count M={m!r} exceeds search space N={n!r}")


def _theta(n: int, m: float) -> float:
    # min() absorbs rounding when M == N
    return math.asin(min(1.0, math.sqrt(m / n)))


def target_from_compact(bits: int) -> int:
    """Expand Bitcoin's compact 'nBits' encoding into a 256-bit target."""
    if not isinstance(bits, int) or not 0 <= bits < 2 ** 32:
        raise DomainError(f"compact target must be a 32-bit unsigned integer, got {bits!r}")
    if bits & 0x00800000:
        raise DomainError(f"compact target {bits:#010x} has its sign bit set")
    exponent = bits >> 24
    coefficient = bits & 0xFFFFFF
    if exponent <= 3:
        target = coefficient >> (8 * (3 - exponent))
    else:
        target = coefficient << (8 * (exponent - 3))
    if target >= MAX_TARGET_LIMIT:
        raise DomainError(f"compact target {bits:#010x} overflows 256 bits")
    return target


def pow_target_m(max_target: int, difficulty: float) -> float:
    """M = maxTarget / Difficulty."""
    if not isinstance(difficulty, (int, float)) or not math.isfinite(difficulty) or difficulty <= 0:
        raise DomainError(f"difficulty must be positive, got {difficulty!r}")
    if isinstance(difficulty, int):
        # exact for power-of-two style inputs that would lose bits as floats
        q, r = divmod(max_target, difficulty)
        if r == 0:
            return float(q)
    return max_target / difficulty


def grover_iterations_paper(n: int, m: float) -> float:
    """t = sqrt(N / M), the iteration count used for table reproduction."""
    _check_search(n, m)
    return math.sqrt(n / m)


def optimal_iterations(n: int, m: float) -> int:
    """floor(pi/4 * sqrt(N / M)), the textbook Grover count."""
    _check_search(n, m)
    return int(math.floor(math.pi / 4 * math.sqrt(n / m)))


def grover_success_probability(n: int, m: float, t: int) -> float:
    """sin^2((2t + 1) * theta) with sin(theta) = sqrt(M / N)."""
    _check_search(n, m)
    if t < 0:
        raise DomainError(f"iteration count must be non-negative, got {t!r}")
    return math.sin((2 * t + 1) * _theta(n, m)) ** 2


def _best_iterations(n: int, m: float) -> int:
    theta = _theta(n, m)
    centre = math.pi / (4 * theta) - 0.5
    candidates = {max(0, math.floor(centre)), max(0, math.ceil(centre))}
    return max(sorted(candidates), key=lambda t: grover_success_probability(n, m, t))


def iterations_for_success(n: int, m: float, p_target: float) -> int:
    """Smallest t reaching p_target, capped at the most probable t."""
    _check_search(n, m)
    if not 0 < p_target <= 1:
        raise DomainError(f"p_target must lie in (0, 1], got {p_target!r}")
    if p_target <= m / n:
        return 0

    cap = _best_iterations(n, m)
    theta = _theta(n, m)
    t = max(0, math.ceil((math.asin(math.sqrt(p_target)) / theta - 1) / 2))
    if 2 * theta < MIN_RESOLVED_STEP:
        return min(t, cap)
    # closed-form estimate can land a step off either way
    for _ in range(MAX_CORRECTION_STEPS):
        if t == 0 or grover_success_probability(n, m, t - 1) < p_target:
            break
        t -= 1
    for _ in range(MAX_CORRECTION_STEPS):
        if t >= cap or grover_success_probability(n, m, t) >= p_target:
            break
        t += 1
    return min(t, cap)


def gate_count(t: float, g: float) -> float:
    """E = t * g."""
    if t < 0 or g < 0:
        raise DomainError("iterations and gates per iteration must be non-negative")
    return t * g


def ec_steps(gate_count_e: float, d: int) -> float:
    """ECSteps = E * d."""
    if gate_count_e < 0 or d <= 0:
        raise DomainError("gate count must be non-negative and corrected qubits positive")
    return gate_count_e * d


def ec_steps_total(n: int, max_target: int, difficulty: float, g: int, d: int) -> float:
    """sqrt(N / (maxTarget / Difficulty)) * g * d."""
    m = pow_target_m(max_target, difficulty)
    return ec_steps(gate_count(grover_iterations_paper(n, m), g), d)


def erased_bits(arch: QuantumArchitecture, steps: float) -> float:
    """ECSteps * c**n + q; a non-ECC device only erases its q output qubits."""
    if steps < 0:
        raise DomainError(f"ec_steps must be non-negative, got {steps!r}")
    if arch.ecc_layers == 0:
        return float(arch.output_qubits)
    return steps * (arch.measurements_per_ec_step ** arch.ecc_layers) + arch.output_qubits


def ecc_cost(arch: QuantumArchitecture, t: float, steps_override: Optional[float] = None) -> EccCost:
    """Gate count, correction steps and erased bits for t iterations on `arch`."""
    e = gate_count(t, arch.gates_per_iteration)
    steps = steps_override if steps_override is not None else ec_steps(e, arch.corrected_qubits)
    return EccCost(gate_count=e, ec_steps=steps, erased_bits=erased_bits(arch, steps))


def quantum_landauer_energy(
    arch: QuantumArchitecture,
    steps: float,
    temperature: TemperatureLike = DEFAULT_TEMPERATURE_K,
) -> float:
    """Landauer minimum for the bits `arch` erases over `steps` correction steps."""
    return erasure_energy(erased_bits(arch, steps), temperature).energy_joules


def projected_actual_energy(landauer_j: float, ratio: float) -> float:
    """Landauer minimum scaled by an assumed device inefficiency ratio."""
    if not math.isfinite(ratio) or ratio < 1:
        raise DomainError(f"efficiency ratio must be >= 1, got {ratio!r}")
    if landauer_j < 0:
        raise DomainError(f"Landauer energy must be non-negative, got {landauer_j!r}")
    return landauer_j * ratio


def sweep_projected_energy(landauer_j: float, ratios: Sequence[float]) -> List[float]:
    """Projected energy at each ratio, in order."""
    return [projected_actual_energy(landauer_j, r) for r in ratios]


def _positive_pair(a_name: str, a: float, b_name: str, b: float) -> None:
    for name, value in ((a_name, a), (b_name, b)):
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"{name} must be positive, got {value!r}")


def break_even_ratio(classical_actual_j: float, quantum_landauer_j: float) -> float:
    """Quantum inefficiency ratio at which quantum energy equals classical energy."""
    _positive_pair("classical_actual_j", classical_actual_j, "quantum_landauer_j", quantum_landauer_j)
    return classical_actual_j / quantum_landauer_j


def advantage_factor(classical_actual_j: float, quantum_actual_j: float) -> float:
    """How many times less energy the quantum miner spends per block."""
    _positive_pair("classical_actual_j", classical_actual_j, "quantum_actual_j", quantum_actual_j)
    return classical_actual_j / quantum_actual_j


def annual_savings(snap: NetworkSnapshot, advantage: float) -> float:
    """TWh per year saved if the whole network mined at the given advantage."""
    if snap.annual_consumption_twh is None:
        raise ConfigurationError("network.annual_consumption_twh is required for annual savings")
    if not math.isfinite(advantage) or advantage < 1:
        raise DomainError(f"advantage must be >= 1, got {advantage!r}")
    return snap.annual_consumption_twh * (1 - 1 / advantage)


def mining_runtime_s(gate_count_e: float, gate_time_s: float) -> float:
    """Wall-clock seconds for E sequential logical gates."""
    if gate_count_e < 0 or gate_time_s <= 0:
        raise DomainError("gate count must be non-negative and gate time positive")
    return gate_count_e * gate_time_s
