import math

import numpy as np
import pytest

from bingolab import (
    STANDARD_LINES,
    CardSpec,
    Line,
    LineSet,
    SimConfig,
    ValidationError,
    coverage_profile,
    estimate_reliability,
    eval_reliability,
    expectation_by_sum,
    game_length_counts,
    generate_card,
    lines_of,
    run_trials,
    simulate_game,
    stats_from_counts,
)


def make_lines(universe, *groups):
    return LineSet(universe_size=universe, lines=tuple(Line(frozenset(g)) for g in groups))


@pytest.fixture(scope="module")
def lines_3x3():
    return lines_of(generate_card(CardSpec(n=3, m=3), 77), STANDARD_LINES)


def test_whole_pool_line_always_takes_every_call():
    lines = make_lines(6, set(range(1, 7)))
    stats = run_trials(SimConfig(lines=lines, trials=64, seed=3))
    assert stats.mean == 6.0
    assert stats.sample_variance == 0.0
    rng = np.random.default_rng(0)
    assert simulate_game(lines, rng) == 6


def test_3x3_lengths_stay_in_pigeonhole_window(lines_3x3):
    counts = game_length_counts(SimConfig(lines=lines_3x3, trials=20_000, seed=11))
    assert counts.sum() == 20_000
    assert counts[:3].sum() == 0  # a line needs 3 calls
    assert counts[8:].sum() == 0  # 2 uncalled numbers block at most 2 of 3 rows


def test_simulate_game_deterministic(lines_3x3):
    first = simulate_game(lines_3x3, np.random.default_rng(123))
    second = simulate_game(lines_3x3, np.random.default_rng(123))
    assert first == second
    assert 3 <= first <= 7


def test_run_trials_bit_identical_across_workers(lines_3x3):
    stats = [
        run_trials(SimConfig(lines=lines_3x3, trials=30_000, seed=5, workers=w))
        for w in (1, 4, 16)
    ]
    assert stats[0] == stats[1] == stats[2]


def test_histogram_bit_identical_across_workers(lines_3x3):
    base = game_length_counts(SimConfig(lines=lines_3x3, trials=10_000, seed=9, workers=1))
    for w in (2, 8):
        other = game_length_counts(SimConfig(lines=lines_3x3, trials=10_000, seed=9, workers=w))
        assert np.array_equal(base, other)


def test_different_seeds_give_different_histograms(lines_3x3):
    a = game_length_counts(SimConfig(lines=lines_3x3, trials=5_000, seed=1))
    b = game_length_counts(SimConfig(lines=lines_3x3, trials=5_000, seed=2))
    assert not np.array_equal(a, b)


def test_mean_within_4se_of_exact(lines_3x3):
    profile = coverage_profile(lines_3x3)
    exact = float(expectation_by_sum(profile, 9))
    stats = run_trials(SimConfig(lines=lines_3x3, trials=100_000, seed=42))
    assert abs(stats.mean - exact) <= 4 * stats.standard_error


def test_agreement_envelope_across_trial_scales(lines_3x3):
    profile = coverage_profile(lines_3x3)
    exact = float(expectation_by_sum(profile, 9))
    for trials in (1_000, 10_000, 100_000):
        stats = run_trials(SimConfig(lines=lines_3x3, trials=trials, seed=31))
        assert abs(stats.mean - exact) <= 4 * stats.standard_error


def test_single_trial_degenerate_stats(lines_3x3):
    stats = run_trials(SimConfig(lines=lines_3x3, trials=1, seed=8))
    assert stats.trials == 1
    assert not stats.variance_defined
    assert stats.sample_variance == 0.0
    assert stats.standard_error == 0.0
    assert stats.ci95 == (stats.mean, stats.mean)
    assert stats.mean == float(int(stats.mean))


def test_stats_from_handmade_histogram():
    counts = np.array([0, 2, 0, 2], dtype=np.int64)
    stats = stats_from_counts(counts)
    assert stats.trials == 4
    assert stats.mean == 2.0
    assert stats.sample_variance == pytest.approx(4 / 3, abs=0)
    assert stats.standard_error == pytest.approx(math.sqrt(stats.sample_variance / 4), abs=0)
    lo, hi = stats.ci95
    assert lo == pytest.approx(2.0 - 1.96 * stats.standard_error)
    assert hi == pytest.approx(2.0 + 1.96 * stats.standard_error)


def test_stats_json_shape(lines_3x3):
    stats = run_trials(SimConfig(lines=lines_3x3, trials=100, seed=2))
    payload = stats.to_dict(seed=2)
    assert set(payload) == {"trials", "mean", "variance", "se", "ci95", "seed"}
    assert payload["trials"] == 100
    assert payload["seed"] == 2
    assert len(payload["ci95"]) == 2


def test_estimate_reliability_endpoints(lines_3x3):
    assert estimate_reliability(lines_3x3, 1.0, 500, seed=1) == 0.0
    assert estimate_reliability(lines_3x3, 0.0, 500, seed=1) == 1.0


def test_estimate_reliability_matches_polynomial(lines_3x3):
    profile = coverage_profile(lines_3x3)
    trials = 100_000
    q_exact = 1.0 - eval_reliability(profile, 0.5)
    q_hat = estimate_reliability(lines_3x3, 0.5, trials, seed=6)
    se = math.sqrt(q_exact * (1 - q_exact) / trials)
    assert abs(q_hat - q_exact) <= 4 * se


def test_estimate_reliability_worker_invariance(lines_3x3):
    values = {
        estimate_reliability(lines_3x3, 0.37, 20_000, seed=13, workers=w)
        for w in (1, 4, 16)
    }
    assert len(values) == 1


def test_config_validation(lines_3x3):
    with pytest.raises(ValidationError):
        SimConfig(lines=lines_3x3, trials=0, seed=1)
    with pytest.raises(ValidationError):
        SimConfig(lines=lines_3x3, trials=10, seed=1, workers=0)
    with pytest.raises(ValidationError):
        SimConfig(lines=LineSet(universe_size=9), trials=10, seed=1)
    with pytest.raises(ValidationError):
        estimate_reliability(lines_3x3, 1.2, 100, seed=0)


def test_multiplayer_simulation_beyond_enumeration_limit():
    # 3 five-by-five cards: more unique lines than the exact engine allows
    from bingolab import union_lines

    cards = [generate_card(CardSpec(n=5, m=15), s) for s in (1, 2, 3)]
    lines = union_lines(cards, STANDARD_LINES)
    assert len(lines) > 28
    stats = run_trials(SimConfig(lines=lines, trials=2_000, seed=4))
    assert lines.min_line_size <= stats.mean <= 75


def test_from_game_builds_reproducible_config():
    from bingolab import SIM_STREAM_INDEX, derive_seed, generate_cards, union_lines

    spec = CardSpec(n=3, m=5)
    config = SimConfig.from_game(spec, 2, STANDARD_LINES, master_seed=42, trials=500)
    manual = union_lines(generate_cards(spec, 2, 42), STANDARD_LINES)
    assert config.lines == manual
    assert config.seed == derive_seed(42, SIM_STREAM_INDEX)
    assert run_trials(config) == run_trials(config)
