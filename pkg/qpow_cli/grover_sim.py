"""Exact statevector execution of the quantum mining loop at desk scale.

SHA-256 is replaced by a toy 64-bit xor-shift-multiply hash; the cost model
only depends on (N, M), so any hash with a roughly uniform digest works. The
oracle is a direct phase flip on classically precomputed marked indices.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .errors import DomainError, ResourceLimitError

MAX_QUBITS = 24
MASK64 = (1 << 64) - 1
NORM_TOLERANCE = 1e-10

# splitmix64 finaliser constants
DEFAULT_MULTIPLIERS = (0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9, 0x94D049BB133111EB)
DEFAULT_SHIFTS = (30, 27)


def make_rng(seed: int) -> np.random.Generator:
    """Philox counter-based generator; bit-identical across platforms."""
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) <= MASK64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class ToyPowInstance:
    nonce_bits: int
    digest_bits: int
    target: int
    multipliers: Tuple[int, int, int] = DEFAULT_MULTIPLIERS
    shifts: Tuple[int, int] = DEFAULT_SHIFTS

    def __post_init__(self) -> None:
        if not isinstance(self.nonce_bits, int) or not 1 <= self.nonce_bits <= MAX_QUBITS:
            raise ResourceLimitError(f"nonce_bits must be in [1, {MAX_QUBITS}], got {self.nonce_bits!r}")
        if not isinstance(self.digest_bits, int) or not 1 <= self.digest_bits <= MAX_QUBITS:
            raise DomainError(f"digest_bits must be in [1, {MAX_QUBITS}], got {self.digest_bits!r}")
        if not isinstance(self.target, int) or not 0 <= self.target < 2 ** self.digest_bits:
            raise DomainError(f"target must be in [0, 2**{self.digest_bits}), got {self.target!r}")
        if len(self.multipliers) != 3 or any(m % 2 == 0 or not 0 < m <= MASK64 for m in self.multipliers):
            raise DomainError("hash multipliers must be three odd 64-bit constants")
        if len(self.shifts) != 2 or any(not 0 < s < 64 for s in self.shifts):
            raise DomainError("hash shifts must be two amounts in (0, 64)")

    @classmethod
    def from_difficulty(
        cls,
        nonce_bits: int,
        digest_bits: int,
        difficulty: int,
        shift_bits: Optional[int] = None,
    ) -> "ToyPowInstance":
        """Target by the block-template rule 2**digest_bits - D * 2**k.

        k defaults to digest_bits // 8, the same proportion as 32 of 256.
        Small difficulties push the result out of range; that is an error,
        not something to clamp.
        """
        if shift_bits is None:
            shift_bits = digest_bits // 8
        target = 2 ** digest_bits - difficulty * 2 ** shift_bits
        if not 0 <= target < 2 ** digest_bits:
            raise DomainError(
                f"2**{digest_bits} - {difficulty} * 2**{shift_bits} = {target} "
                f"is outside the {digest_bits}-bit digest range"
            )
        return cls(nonce_bits=nonce_bits, digest_bits=digest_bits, target=target)

    @property
    def search_space(self) -> int:
        return 2 ** self.nonce_bits


@dataclass
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class MiningOutcome:
    success_probability: float
    sampled_nonce: int
    sample_satisfies_target: bool
    iterations_used: int
    marked_count: int


def toy_hash(nonce: int, instance: ToyPowInstance) -> int:
    """Three xor-shift-multiply rounds over a 64-bit word, top digest_bits kept."""
    if not isinstance(nonce, (int, np.integer)) or not 0 <= int(nonce) < instance.search_space:
        raise DomainError(f"nonce {nonce!r} outside [0, 2**{instance.nonce_bits})")
    s1, s2 = instance.shifts
    x = (int(nonce) + instance.multipliers[0]) & MASK64
    for m in instance.multipliers:
        x ^= x >> s1
        x = (x * m) & MASK64
        x ^= x >> s2
    return x >> (64 - instance.digest_bits)


def toy_hash_all(instance: ToyPowInstance) -> np.ndarray:
    """Digest of every nonce, vectorised; agrees with toy_hash element-wise."""
    s1, s2 = (np.uint64(s) for s in instance.shifts)
    x = np.arange(instance.search_space, dtype=np.uint64) + np.uint64(instance.multipliers[0])
    for m in instance.multipliers:
        x ^= x >> s1
        x *= np.uint64(m)
        x ^= x >> s2
    return x >> np.uint64(64 - instance.digest_bits)


def marked_mask(instance: ToyPowInstance) -> np.ndarray:
    return toy_hash_all(instance) <= np.uint64(instance.target)


def count_marked(instance: ToyPowInstance) -> int:
    """Brute-force count of nonces whose digest is at or below the target."""
    return int(np.count_nonzero(marked_mask(instance)))


def lowest_digest_mask(instance: ToyPowInstance, marked: int) -> np.ndarray:
    """Mask of exactly `marked` nonces: those with the smallest (digest, nonce)."""
    if not 0 <= marked <= instance.search_space:
        raise DomainError(f"marked count must be in [0, {instance.search_space}], got {marked!r}")
    order = np.argsort(toy_hash_all(instance), kind="stable")
    mask = np.zeros(instance.search_space, dtype=bool)
    mask[order[:marked]] = True
    return mask


def init_uniform(num_qubits: int) -> StateVector:
    if not isinstance(num_qubits, int) or not 1 <= num_qubits <= MAX_QUBITS:
        raise ResourceLimitError(f"qubit count must be in [1, {MAX_QUBITS}], got {num_qubits!r}")
    size = 2 ** num_qubits
    return StateVector(num_qubits, np.full(size, 2.0 ** (-num_qubits / 2), dtype=np.complex128))


def _as_mask(state: StateVector, marked: Union[np.ndarray, ToyPowInstance]) -> np.ndarray:
    if isinstance(marked, ToyPowInstance):
        if marked.nonce_bits != state.num_qubits:
            raise DomainError("instance nonce_bits does not match the state's qubit count")
        return marked_mask(marked)
    mask = np.asarray(marked, dtype=bool)
    if mask.shape != state.amplitudes.shape:
        raise DomainError("marked mask length must equal the number of amplitudes")
    return mask


def apply_oracle(state: StateVector, marked: Union[np.ndarray, ToyPowInstance]) -> StateVector:
    """Negate the amplitude of every marked basis state, in place."""
    mask = _as_mask(state, marked)
    state.amplitudes[mask] *= -1
    return state


def apply_diffusion(state: StateVector) -> StateVector:
    """Inversion about the mean, in place: a_i <- 2*mean - a_i."""
    mean = state.amplitudes.mean()
    np.subtract(2 * mean, state.amplitudes, out=state.amplitudes)
    return state


def marked_probability(state: StateVector, mask: np.ndarray) -> float:
    """Probability of measuring a marked nonce."""
    return float(np.sum(state.probabilities()[mask]))


def sample_nonces(state: StateVector, shots: int, seed: int) -> np.ndarray:
    """Draw `shots` measurement outcomes from the Born-rule distribution."""
    probs = state.probabilities()
    return make_rng(seed).choice(probs.size, size=shots, p=probs / probs.sum())


def run(instance: ToyPowInstance, t: int, seed: int, mask: Optional[np.ndarray] = None) -> MiningOutcome:
    """t oracle+diffusion rounds from the uniform state, then one measurement.

    `mask` replaces the target-derived marked set (used when the caller asks
    for an exact marked count rather than a target).
    """
    if not isinstance(t, int) or t < 0:
        raise DomainError(f"iteration count must be a non-negative integer, got {t!r}")
    state = init_uniform(instance.nonce_bits)
    if mask is None:
        mask = marked_mask(instance)
    for _ in range(t):
        apply_oracle(state, mask)
        apply_diffusion(state)

    nonce = int(sample_nonces(state, 1, seed)[0])
    return MiningOutcome(
        success_probability=marked_probability(state, mask),
        sampled_nonce=nonce,
        sample_satisfies_target=bool(mask[nonce]),
        iterations_used=t,
        marked_count=int(np.count_nonzero(mask)),
    )
