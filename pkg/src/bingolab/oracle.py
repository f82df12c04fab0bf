"""Brute-force ground truth at tiny scale.

Everything here is re-derived by direct counting over explicit call
subsets or mark grids, never through inclusion-exclusion, so a shared
algebra bug cannot slip past both this module and the engine. Performance
is irrelevant; capacity is capped hard.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import CapacityError, ValidationError
from .model import LineSet

MAX_POOL = 24
MAX_GRID_UNIVERSE = 20


def _masks_over_pool(lines: LineSet) -> list[int]:
    return [sum(1 << (num - 1) for num in line.numbers) for line in lines.lines]


def exact_cdf_by_subsets(lines: LineSet, k: int) -> Fraction:
    """P(game ends within k calls), by enumerating every k-subset of the
    pool and counting those containing at least one full line."""
    pool = lines.universe_size
    if pool > MAX_POOL:
        raise CapacityError(f"pool of {pool} exceeds oracle cap of {MAX_POOL}")
    if not (0 <= k <= pool):
        raise ValidationError(f"k must be in [0, {pool}], got {k}")
    masks = _masks_over_pool(lines)
    bits = [1 << i for i in range(pool)]
    hits = 0
    for combo in combinations(range(pool), k):
        called = 0
        for i in combo:
            called |= bits[i]
        if any(mask & called == mask for mask in masks):
            hits += 1
    return Fraction(hits, comb(pool, k))


def exact_expectation_by_enumeration(lines: LineSet, pool_size: int | None = None) -> Fraction:
    """E[calls to first completed line] = sum_k k * (F(k) - F(k-1)), all
    exact, with F from exact_cdf_by_subsets."""
    pool = lines.universe_size if pool_size is None else pool_size
    if pool != lines.universe_size:
        raise ValidationError(
            f"pool_size {pool} does not match line universe {lines.universe_size}"
        )
    total = Fraction(0)
    prev = Fraction(0)
    for k in range(1, pool + 1):
        cur = exact_cdf_by_subsets(lines, k)
        total += k * (cur - prev)
        prev = cur
    return total


def exact_reliability_by_grids(lines: LineSet, p):
    """P(at least one line fully marked) when each square is independently
    marked with probability p, by enumerating all 2^U markings of the
    covered universe. Exact when p is a Fraction."""
    covered = lines.covered_numbers
    universe = len(covered)
    if universe > MAX_GRID_UNIVERSE:
        raise CapacityError(
            f"{universe} covered numbers exceed oracle cap of {MAX_GRID_UNIVERSE}"
        )
    index = {num: i for i, num in enumerate(covered)}
    masks = [
        sum(1 << index[num] for num in line.numbers) for line in lines.lines
    ]
    total = 0 * p
    q = 1 - p
    for marking in range(1 << universe):
        if any(mask & marking == mask for mask in masks):
            marked = marking.bit_count()
            total += p ** marked * q ** (universe - marked)
    return total
