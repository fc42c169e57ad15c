import dataclasses
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpow_cli.errors import DomainError
from qpow_cli.race_sim import (
    MinerAgent,
    MinerKind,
    RaceConfig,
    grover_block_probability,
    merge_reports,
    retarget_difficulty,
    run_race,
    run_sweep,
)

CLASSICAL_J = 2258.69
QUANTUM_J = 4.50604e-9 * 1706.0


def classical(p=7e-7, energy=CLASSICAL_J):
    return MinerAgent(MinerKind.CLASSICAL, p, energy, "classical")


def quantum(p=7e-7, energy=QUANTUM_J):
    return MinerAgent(MinerKind.QUANTUM, p, energy, "quantum")


def test_classical_wins_follow_binomial():
    blocks = 10_000_000
    p = 7e-7
    report = run_race(RaceConfig(agents=[classical(p)], num_blocks=blocks, seed=2022))
    mean = blocks * p
    sigma = math.sqrt(blocks * p * (1 - p))
    assert abs(report.blocks_won("classical") - mean) <= 3 * sigma


def test_equal_odds_reproduce_the_energy_advantage():
    config = RaceConfig(agents=[classical(0.5), quantum(0.5)], num_blocks=200_000, seed=42)
    report = run_race(config)
    c, q = report.agents
    ratio = c.energy_per_won_block_j / q.energy_per_won_block_j
    assert ratio == pytest.approx(2.94e8, rel=0.05, abs=0)


def test_every_agent_pays_every_cycle():
    report = run_race(RaceConfig(agents=[classical(0.2), quantum(0.9)], num_blocks=1000, seed=1))
    assert report.agents[0].total_energy_j == pytest.approx(1000 * CLASSICAL_J)
    assert report.agents[1].total_energy_j == pytest.approx(1000 * QUANTUM_J)


def test_ties_are_shared():
    report = run_race(RaceConfig(agents=[classical(1.0), quantum(1.0)], num_blocks=10_000, seed=5))
    c, q = (a.blocks_won for a in report.agents)
    assert c + q == 10_000
    assert c == pytest.approx(5000, abs=300)


def test_certain_agent_wins_everything_alone():
    report = run_race(RaceConfig(agents=[quantum(1.0)], num_blocks=100, seed=0))
    assert report.blocks_won("quantum") == 100


def test_no_wins_leaves_energy_per_block_undefined():
    report = run_race(RaceConfig(agents=[classical(1e-12)], num_blocks=10, seed=0))
    assert report.agents[0].blocks_won == 0
    assert report.agents[0].energy_per_won_block_j is None


def test_unknown_label():
    report = run_race(RaceConfig(agents=[classical()], num_blocks=10, seed=0))
    with pytest.raises(KeyError):
        report.blocks_won("nobody")


def test_same_seed_same_report():
    config = RaceConfig(agents=[classical(0.01), quantum(0.02)], num_blocks=50_000, seed=42)
    assert run_race(config) == run_race(config)


def test_adding_an_agent_does_not_perturb_the_first():
    alone = run_race(RaceConfig(agents=[classical(0.3)], num_blocks=20_000, seed=9))
    paired = run_race(RaceConfig(agents=[classical(0.3), quantum(1e-9)], num_blocks=20_000, seed=9))
    assert paired.blocks_won("classical") <= alone.blocks_won("classical")
    assert alone.blocks_won("classical") - paired.blocks_won("classical") <= paired.blocks_won("quantum")


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 0.5), st.floats(0.0, 0.4), st.integers(0, 2 ** 32))
def test_raising_probability_never_costs_wins(p, bump, seed):
    low = run_race(RaceConfig(agents=[classical(p)], num_blocks=5000, seed=seed))
    high = run_race(RaceConfig(agents=[classical(p + bump)], num_blocks=5000, seed=seed))
    assert high.blocks_won("classical") >= low.blocks_won("classical")


@pytest.mark.parametrize(
    "current, observed, target, expected",
    [(1.0, 600.0, 600.0, 1.0), (1.0, 300.0, 600.0, 2.0), (1.0, 60.0, 600.0, 4.0), (8.0, 6000.0, 600.0, 2.0)],
)
def test_retarget_is_proportional_and_clamped(current, observed, target, expected):
    assert retarget_difficulty(current, observed, target) == pytest.approx(expected)


@pytest.mark.parametrize("args", [(0.0, 600.0, 600.0), (1.0, -1.0, 600.0), (1.0, 600.0, float("nan"))])
def test_retarget_rejects_non_positive(args):
    with pytest.raises(DomainError):
        retarget_difficulty(*args)


def test_mean_block_time_tracks_hashrate():
    base = RaceConfig(agents=[classical(0.1)], num_blocks=100_000, seed=3)
    assert run_race(base).mean_block_time_s == pytest.approx(600.0, rel=0.02, abs=0)
    faster = dataclasses.replace(base, hashrate_multiplier=2.0)
    assert run_race(faster).mean_block_time_s == pytest.approx(300.0, rel=0.02, abs=0)


def test_retargeting_restores_the_block_time():
    config = RaceConfig(
        agents=[classical(0.1)],
        num_blocks=2016 * 20,
        seed=11,
        retarget_enabled=True,
        hashrate_multiplier=2.0,
    )
    report = run_race(config)
    assert report.final_difficulty == pytest.approx(2.0, rel=0.1, abs=0)


def test_retargeting_needs_a_full_window():
    with pytest.raises(DomainError):
        RaceConfig(agents=[classical()], num_blocks=100, seed=0, retarget_enabled=True)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"agents": []},
        {"num_blocks": 0},
        {"seed": -1},
        {"seed": 2 ** 64},
        {"difficulty": 0.0},
        {"retarget_interval_blocks": 0},
        {"hashrate_multiplier": float("inf")},
    ],
)
def test_config_invariants(kwargs):
    with pytest.raises(DomainError):
        RaceConfig(**{"agents": [classical()], "num_blocks": 10, "seed": 0, **kwargs})


@pytest.mark.parametrize("p, energy", [(0.0, 1.0), (1.5, 1.0), (0.5, 0.0), (0.5, float("nan"))])
def test_agent_invariants(p, energy):
    with pytest.raises(DomainError):
        MinerAgent(MinerKind.CLASSICAL, p, energy, "bad")


def test_merge_is_associative():
    config = RaceConfig(agents=[classical(0.2), quantum(0.3)], num_blocks=1000, seed=0)
    a, b, c = run_sweep(config, [1, 2, 3])
    left = merge_reports(merge_reports(a, b), c)
    right = merge_reports(a, merge_reports(b, c))
    assert [x.blocks_won for x in left.agents] == [x.blocks_won for x in right.agents]
    assert left.total_blocks == right.total_blocks == 3000
    assert left.mean_block_time_s == pytest.approx(right.mean_block_time_s)
    assert left.agents[0].total_energy_j == pytest.approx(3000 * CLASSICAL_J)


def test_merge_needs_matching_agents():
    a = run_race(RaceConfig(agents=[classical()], num_blocks=10, seed=0))
    b = run_race(RaceConfig(agents=[quantum()], num_blocks=10, seed=0))
    with pytest.raises(DomainError):
        merge_reports(a, b)


def test_sweep_in_parallel_matches_sequential():
    config = RaceConfig(agents=[classical(0.05)], num_blocks=5000, seed=0)
    seeds = [4, 8, 15, 16]
    assert run_sweep(config, seeds, workers=2) == run_sweep(config, seeds, workers=1)


def test_sweep_mean_wins_match_binomial_expectation():
    blocks, p_c, p_q = 50_000, 0.01, 0.02
    config = RaceConfig(agents=[classical(p_c), quantum(p_q)], num_blocks=blocks, seed=0)
    reports = run_sweep(config, list(range(20)))
    # a tie goes to either agent with equal odds
    expected = {"classical": p_c * (1 - p_q / 2), "quantum": p_q * (1 - p_c / 2)}
    for label, w in expected.items():
        mean = sum(r.blocks_won(label) for r in reports) / len(reports)
        sigma_of_mean = math.sqrt(blocks * w * (1 - w) / len(reports))
        assert abs(mean - blocks * w) <= 3 * sigma_of_mean


def test_grover_block_probability():
    assert grover_block_probability(8, 1, iterations=2) == pytest.approx(0.9453125, abs=1e-9)
    assert grover_block_probability(8, 1, p_target=0.9) == pytest.approx(0.9453125, abs=1e-9)
    assert grover_block_probability(2 ** 256, 1, p_target=0.5) == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("kwargs", [{}, {"iterations": 1, "p_target": 0.5}])
def test_grover_block_probability_needs_one_source(kwargs):
    with pytest.raises(DomainError):
        grover_block_probability(8, 1, **kwargs)


def test_grover_odds_feed_a_race():
    p = grover_block_probability(16, 1, iterations=3)
    report = run_race(RaceConfig(agents=[classical(0.01), quantum(p)], num_blocks=20_000, seed=9))
    assert report.blocks_won("quantum") > 15 * report.blocks_won("classical")
