"""Seeded, reproducible game simulation.

Simulation validates the exact engine and covers multiplayer
configurations whose unique-line count exceeds the enumeration limit.

Reproducibility contract: trial t always consumes the same block of a
counter-based Philox stream keyed by the seed (one fixed-size block of
uniforms per trial, padded to the generator's 4-output counter step), so
results are bit-identical for every worker count and chunking. Per-trial
aggregation uses exact integer accumulators (game lengths are small
integers), which makes the combined statistics order-independent too.

A game is simulated by position assignment rather than sequential
calling: rank every pool number by an independent uniform draw (a uniform
random bijection to call indices), complete each line at the max rank of
its numbers, and end the game at the min over lines. Identical in
distribution to calling numbers one at a time, and branch-free.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .model import CardSpec, LineSet, PatternFamily, generate_cards, union_lines
from .rng import derive_seed

_MASK64 = (1 << 64) - 1
_PHILOX_STEP = 4  # Philox counter advance unit: 4 x 64-bit outputs
_CHUNK_BUDGET = 1 << 21  # uniforms held in memory per chunk

# Sub-seed index for a trial stream derived from a game's master seed;
# far above any card index, so the two never collide.
SIM_STREAM_INDEX = 1 << 32


@dataclass(frozen=True)
class TrialStats:
    """Sample statistics over simulated games. With a single trial the
    variance is undefined; it is reported as 0 with variance_defined
    False."""

    trials: int
    mean: float
    sample_variance: float
    standard_error: float
    ci95: tuple[float, float]
    variance_defined: bool = True

    def to_dict(self, seed: int | None = None) -> dict:
        return {
            "trials": self.trials,
            "mean": self.mean,
            "variance": self.sample_variance,
            "se": self.standard_error,
            "ci95": [self.ci95[0], self.ci95[1]],
            "seed": seed,
        }


@dataclass(frozen=True)
class SimConfig:
    """A simulation run: the unique-line set, trial count, master seed,
    and worker count (which never affects the result, only wall time)."""

    lines: LineSet
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self) -> None:
        if len(self.lines) == 0:
            raise ValidationError("cannot simulate an empty line set")
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")

    @classmethod
    def from_game(
        cls,
        spec: CardSpec,
        players: int,
        family: PatternFamily,
        master_seed: int,
        trials: int,
        workers: int = 1,
    ) -> "SimConfig":
        """Build the config for a full multiplayer game: generate the
        cards from the master seed, take their unique lines, and derive
        the trial stream from the same master seed."""
        lines = union_lines(generate_cards(spec, players, master_seed), family)
        return cls(
            lines=lines,
            trials=trials,
            seed=derive_seed(master_seed, SIM_STREAM_INDEX),
            workers=workers,
        )


def _line_index_arrays(lines: LineSet) -> list[np.ndarray]:
    return [np.array(sorted(line.numbers), dtype=np.int64) - 1 for line in lines.lines]


def _trial_uniforms(seed: int, first_trial: int, n_trials: int, stride: int) -> np.ndarray:
    """Uniform block for trials [first_trial, first_trial + n_trials); row
    t-first_trial holds trial t's draws. The stride is padded so every
    trial starts on a Philox counter step, making any partition of the
    trial range produce identical rows."""
    padded = -(-stride // _PHILOX_STEP) * _PHILOX_STEP
    bitgen = np.random.Philox(key=seed & _MASK64)
    bitgen.advance(first_trial * padded // _PHILOX_STEP)
    u = np.random.Generator(bitgen).random((n_trials, padded))
    return u[:, :stride]


def _game_lengths(u: np.ndarray, line_indices: list[np.ndarray]) -> np.ndarray:
    """Game length per row of uniforms: rank the draws into call positions,
    then take min over lines of (max position within the line)."""
    pool = u.shape[1]
    order = np.argsort(u, axis=1, kind="stable")
    positions = np.empty_like(order)
    np.put_along_axis(
        positions, order, np.broadcast_to(np.arange(1, pool + 1), u.shape), axis=1
    )
    best: np.ndarray | None = None
    for idx in line_indices:
        completed_at = positions[:, idx].max(axis=1)
        best = completed_at if best is None else np.minimum(best, completed_at)
    assert best is not None
    return best


def simulate_game(lines: LineSet, rng: np.random.Generator) -> int:
    """Number of calls to the first completed line in one game, drawing
    the call order from `rng`."""
    if len(lines) == 0:
        raise ValidationError("cannot simulate an empty line set")
    u = rng.random((1, lines.universe_size))
    return int(_game_lengths(u, _line_index_arrays(lines))[0])


def _chunk_ranges(trials: int, stride: int, workers: int) -> list[tuple[int, int]]:
    cap = max(256, _CHUNK_BUDGET // max(1, stride))
    chunks = []
    start = 0
    while start < trials:
        size = min(cap, trials - start)
        chunks.append((start, size))
        start += size
    return chunks


def _run_chunked(config: SimConfig, chunk_fn) -> np.ndarray:
    """Map chunk_fn(first_trial, n_trials) -> int64 array over the trial
    range and sum the results; exact integer sums commute, so worker
    scheduling cannot change the output."""
    chunks = _chunk_ranges(config.trials, config.lines.universe_size, config.workers)
    if config.workers == 1 or len(chunks) == 1:
        results = [chunk_fn(*chunk) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda c: chunk_fn(*c), chunks))
    return np.sum(results, axis=0, dtype=np.int64)


def game_length_counts(config: SimConfig) -> np.ndarray:
    """Histogram of simulated game lengths: index k holds the number of
    trials that ended on call k (length pool_size + 1, index 0 unused)."""
    pool = config.lines.universe_size
    line_indices = _line_index_arrays(config.lines)

    def chunk_fn(first: int, count: int) -> np.ndarray:
        u = _trial_uniforms(config.seed, first, count, pool)
        lengths = _game_lengths(u, line_indices)
        return np.bincount(lengths, minlength=pool + 1).astype(np.int64)

    return _run_chunked(config, chunk_fn)


def stats_from_counts(counts: np.ndarray) -> TrialStats:
    """Sample mean/variance/SE/CI from a game-length histogram, computed
    from exact integer sums."""
    trials = int(counts.sum())
    if trials < 1:
        raise ValidationError("histogram holds no trials")
    values = np.arange(len(counts), dtype=object)
    s1 = int(np.sum(values * counts))
    s2 = int(np.sum(values * values * counts))
    mean = s1 / trials
    if trials == 1:
        return TrialStats(
            trials=1,
            mean=float(mean),
            sample_variance=0.0,
            standard_error=0.0,
            ci95=(float(mean), float(mean)),
            variance_defined=False,
        )
    variance = float(Fraction(trials * s2 - s1 * s1, trials * (trials - 1)))
    se = math.sqrt(variance / trials)
    return TrialStats(
        trials=trials,
        mean=float(mean),
        sample_variance=variance,
        standard_error=se,
        ci95=(float(mean) - 1.96 * se, float(mean) + 1.96 * se),
    )


def run_trials(config: SimConfig) -> TrialStats:
    """Simulate config.trials independent games and summarize them."""
    return stats_from_counts(game_length_counts(config))


def estimate_reliability(
    lines: LineSet, p: float, trials: int, seed: int, workers: int = 1
) -> float:
    """Fraction of trials in which no line is fully marked when each pool
    number is marked independently with probability p (estimates the
    no-completion probability Q(p))."""
    if not (0 <= p <= 1):
        raise ValidationError(f"marking probability must be in [0, 1], got {p}")
    config = SimConfig(lines=lines, trials=trials, seed=seed, workers=workers)
    pool = lines.universe_size
    line_indices = _line_index_arrays(lines)

    def chunk_fn(first: int, count: int) -> np.ndarray:
        marks = _trial_uniforms(seed, first, count, pool) < p
        any_complete = np.zeros(count, dtype=bool)
        for idx in line_indices:
            any_complete |= marks[:, idx].all(axis=1)
        return np.array([int(np.count_nonzero(~any_complete))], dtype=np.int64)

    none_complete = int(_run_chunked(config, chunk_fn)[0])
    return none_complete / trials
