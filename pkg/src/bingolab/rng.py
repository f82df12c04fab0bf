"""Deterministic seed derivation.

One 64-bit master seed reproduces an entire experiment: per-card seeds and
per-simulation stream keys are derived through the SplitMix64 finalizer, so
sub-seeds are decorrelated and stable across platforms and worker counts.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(state: int) -> int:
    """SplitMix64 finalizer: bijective avalanche mix of a 64-bit word."""
    z = state & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master_seed: int, index: int) -> int:
    """Sub-seed for stream `index` of a SplitMix64 sequence seeded with
    `master_seed`. Distinct indices give decorrelated 64-bit seeds."""
    return mix64((master_seed + (index + 1) * _GAMMA) & _MASK64)
