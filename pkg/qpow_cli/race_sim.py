"""Seeded block-cycle race between modelled miners.

Each block cycle every agent makes one independent attempt with its per-block
success probability. Among the agents that succeed in the same block one winner
is picked uniformly; blocks nobody claims go to the unmodelled rest of the
network. Every agent pays its energy each cycle, win or lose.

Random streams are Philox generators keyed by (seed, purpose, agent index), so
adding an agent never perturbs another agent's draws, and raising one agent's
probability can only add wins for it.
"""
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .grover_sim import MASK64
from .quantum_model import GroverPlan, grover_success_probability

DEFAULT_RETARGET_INTERVAL = 2016
DEFAULT_TARGET_BLOCK_TIME_S = 600.0
RETARGET_CLAMP = 4.0
CHUNK_BLOCKS = 1 << 18

_AGENT_STREAM = 1
_TIEBREAK_STREAM = 2
_TIMING_STREAM = 3


class MinerKind(str, Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"


@dataclass(frozen=True)
class MinerAgent:
    """One miner in the race: its per-block odds and the energy it burns per cycle."""

    kind: MinerKind
    per_block_success_prob: float
    energy_per_block_j: float
    label: str

    def __post_init__(self) -> None:
        if not 0 < self.per_block_success_prob <= 1:
            raise DomainError(f"{self.label}: success probability must lie in (0, 1]")
        if not math.isfinite(self.energy_per_block_j) or self.energy_per_block_j <= 0:
            raise DomainError(f"{self.label}: energy per block must be positive")


@dataclass(frozen=True)
class RaceConfig:
    agents: Sequence[MinerAgent]
    num_blocks: int
    seed: int
    difficulty: float = 1.0
    retarget_interval_blocks: int = DEFAULT_RETARGET_INTERVAL
    target_block_time_s: float = DEFAULT_TARGET_BLOCK_TIME_S
    retarget_enabled: bool = False
    hashrate_multiplier: float = 1.0

    def __post_init__(self) -> None:
        if not self.agents:
            raise DomainError("a race needs at least one agent")
        if not isinstance(self.num_blocks, int) or self.num_blocks <= 0:
            raise DomainError("num_blocks must be a positive integer")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        if not isinstance(self.retarget_interval_blocks, int) or self.retarget_interval_blocks <= 0:
            raise DomainError("retarget_interval_blocks must be a positive integer")
        for name in ("difficulty", "target_block_time_s", "hashrate_multiplier"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be positive")
        if self.retarget_enabled and self.num_blocks < self.retarget_interval_blocks:
            raise DomainError("num_blocks must cover at least one retarget interval when retargeting")


@dataclass(frozen=True)
class AgentResult:
    label: str
    kind: MinerKind
    per_block_success_prob: float
    blocks_won: int
    total_energy_j: float

    @property
    def energy_per_won_block_j(self) -> Optional[float]:
        if self.blocks_won == 0:
            return None
        return self.total_energy_j / self.blocks_won


@dataclass(frozen=True)
class RaceReport:
    agents: List[AgentResult] = field(default_factory=list)
    final_difficulty: float = 1.0
    total_blocks: int = 0
    mean_block_time_s: float = 0.0

    def blocks_won(self, label: str) -> int:
        for agent in self.agents:
            if agent.label == label:
                return agent.blocks_won
        raise KeyError(label)


def grover_block_probability(
    n: int, m: float, iterations: Optional[int] = None, p_target: Optional[float] = None
) -> float:
    """Per-block success probability of a Grover miner over N nonces with M marked.

    Give either a fixed iteration count or a target probability; the latter
    uses the smallest iteration count that reaches it.
    """
    if iterations is not None and p_target is not None:
        raise DomainError("iterations and p_target are mutually exclusive")
    if p_target is not None:
        return GroverPlan.for_probability(n, m, p_target).success_probability
    if iterations is None:
        raise DomainError("give an iteration count or a target probability")
    return grover_success_probability(n, m, iterations)


def retarget_difficulty(current_difficulty: float, observed_mean_block_time_s: float, target_s: float) -> float:
    """Proportional retarget, clamped to a factor of four either way."""
    for name, value in (
        ("current_difficulty", current_difficulty),
        ("observed_mean_block_time_s", observed_mean_block_time_s),
        ("target_s", target_s),
    ):
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"{name} must be positive, got {value!r}")
    proposed = current_difficulty * (target_s / observed_mean_block_time_s)
    return min(max(proposed, current_difficulty / RETARGET_CLAMP), current_difficulty * RETARGET_CLAMP)


def _stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    seq = np.random.SeedSequence([seed & 0xFFFFFFFF, seed >> 32, purpose, index])
    return np.random.Generator(np.random.Philox(seq))


def _window_sizes(config: RaceConfig) -> List[int]:
    step = config.retarget_interval_blocks if config.retarget_enabled else CHUNK_BLOCKS
    full, rest = divmod(config.num_blocks, step)
    return [step] * full + ([rest] if rest else [])


def run_race(config: RaceConfig) -> RaceReport:
    """Play `config.num_blocks` block cycles and tally wins and energy per agent."""
    agents = list(config.agents)
    agent_rngs = [_stream(config.seed, _AGENT_STREAM, i) for i in range(len(agents))]
    tiebreak_rng = _stream(config.seed, _TIEBREAK_STREAM)
    timing_rng = _stream(config.seed, _TIMING_STREAM)
    probs = np.array([a.per_block_success_prob for a in agents])[:, None]

    wins = np.zeros(len(agents), dtype=np.int64)
    difficulty = config.difficulty
    equilibrium = config.difficulty * config.hashrate_multiplier
    elapsed = 0.0

    for size in _window_sizes(config):
        draws = np.stack([rng.random(size) for rng in agent_rngs])
        success = draws < probs
        ties = tiebreak_rng.random(size)

        claimants = success.sum(axis=0)
        rank = np.floor(ties * claimants).astype(np.int64) + 1
        winner = success & (np.cumsum(success, axis=0) == rank)
        wins += winner.sum(axis=1)

        mean_interval = config.target_block_time_s * difficulty / equilibrium
        intervals = timing_rng.standard_exponential(size) * mean_interval
        elapsed += float(intervals.sum())
        if config.retarget_enabled and size == config.retarget_interval_blocks:
            difficulty = retarget_difficulty(difficulty, float(intervals.mean()), config.target_block_time_s)

    return RaceReport(
        agents=[
            AgentResult(
                label=a.label,
                kind=a.kind,
                per_block_success_prob=a.per_block_success_prob,
                blocks_won=int(wins[i]),
                total_energy_j=config.num_blocks * a.energy_per_block_j,
            )
            for i, a in enumerate(agents)
        ],
        final_difficulty=difficulty,
        total_blocks=config.num_blocks,
        mean_block_time_s=elapsed / config.num_blocks,
    )


def merge_reports(a: RaceReport, b: RaceReport) -> RaceReport:
    """Combine two runs of the same agent line-up; associative."""
    if [x.label for x in a.agents] != [y.label for y in b.agents]:
        raise DomainError("can only merge reports with the same agents")
    total = a.total_blocks + b.total_blocks
    return RaceReport(
        agents=[
            replace(x, blocks_won=x.blocks_won + y.blocks_won, total_energy_j=x.total_energy_j + y.total_energy_j)
            for x, y in zip(a.agents, b.agents)
        ],
        final_difficulty=b.final_difficulty,
        total_blocks=total,
        mean_block_time_s=(a.mean_block_time_s * a.total_blocks + b.mean_block_time_s * b.total_blocks) / total,
    )


def _run_with_seed(args: Tuple[RaceConfig, int]) -> RaceReport:
    config, seed = args
    return run_race(replace(config, seed=seed))


def run_sweep(config: RaceConfig, seeds: Sequence[int], workers: int = 1) -> List[RaceReport]:
    """One race per seed, in seed order; a process pool when workers > 1."""
    tasks = [(config, s) for s in seeds]
    if workers <= 1 or len(tasks) <= 1:
        return [_run_with_seed(t) for t in tasks]
    with Pool(processes=workers) as pool:
        return pool.map(_run_with_seed, tasks)
