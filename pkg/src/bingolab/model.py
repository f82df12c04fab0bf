"""Cards, winning-pattern families, and unique-line sets.

A generalized (n, m)-Bingo card is an n x n grid (n odd) whose column j
holds n distinct numbers drawn from the interval [m*j + 1, m*(j+1)]
(0-indexed j), giving a call pool of exactly m*n numbers. Winning patterns
are position sets on the grid; instantiating them against a concrete card
yields lines identified purely by their number-sets, which is also how
lines are deduplicated across multiple cards.

All types are immutable after construction and safe to share across
threads; every operation here is a pure function of its arguments.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ValidationError
from .rng import derive_seed

Position = tuple[int, int]


@dataclass(frozen=True)
class CardSpec:
    """Game parameters: card side length n (odd, >= 3), values per column m
    (>= n), and whether the center square is pre-marked."""

    n: int
    m: int
    free_space: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not isinstance(self.m, int):
            raise ValidationError("card parameters n and m must be integers")
        if self.n < 3 or self.n % 2 == 0:
            raise ValidationError(f"n must be an odd integer >= 3, got {self.n}")
        if self.m < self.n:
            raise ValidationError(f"m must be >= n, got m={self.m} < n={self.n}")

    @property
    def pool_size(self) -> int:
        """Total count of callable numbers, m*n."""
        return self.m * self.n

    @property
    def center(self) -> Position:
        return (self.n // 2, self.n // 2)

    def column_interval(self, col: int) -> tuple[int, int]:
        """Inclusive number interval for 0-indexed column `col`."""
        lo = self.m * col + 1
        return lo, lo + self.m - 1


@dataclass(frozen=True)
class Card:
    """A concrete filled card: spec plus an n x n grid of distinct numbers,
    addressed (row, col) and row-major in serialized form."""

    spec: CardSpec
    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.spec.n
        if len(self.grid) != n or any(len(row) != n for row in self.grid):
            raise ValidationError(f"grid must be {n}x{n}")
        for col in range(n):
            lo, hi = self.spec.column_interval(col)
            entries = [self.grid[row][col] for row in range(n)]
            if any(not (lo <= v <= hi) for v in entries):
                raise ValidationError(
                    f"column {col} entries must lie in [{lo}, {hi}], got {entries}"
                )
            if len(set(entries)) != n:
                raise ValidationError(f"column {col} entries are not distinct: {entries}")

    def number_at(self, row: int, col: int) -> int:
        return self.grid[row][col]

    def to_dict(self) -> dict:
        """Card file schema: {"n", "m", "free_space", "grid" (row-major)}."""
        return {
            "n": self.spec.n,
            "m": self.spec.m,
            "free_space": self.spec.free_space,
            "grid": [list(row) for row in self.grid],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Card":
        spec = CardSpec(n=data["n"], m=data["m"], free_space=bool(data["free_space"]))
        return cls(spec=spec, grid=tuple(tuple(row) for row in data["grid"]))


@dataclass(frozen=True)
class PatternFamily:
    """A family of winning patterns, as position sets on the n x n grid.

    Variants: "lines" (n rows + n columns + 2 diagonals), "corners" (the
    single four-corner pattern), or "custom" with explicit position sets.
    """

    kind: str
    custom: tuple[frozenset[Position], ...] = ()

    def position_patterns(self, n: int) -> tuple[frozenset[Position], ...]:
        """Instantiate the family's patterns for side length n."""
        if self.kind == "lines":
            pats = [frozenset((r, c) for c in range(n)) for r in range(n)]
            pats += [frozenset((r, c) for r in range(n)) for c in range(n)]
            pats.append(frozenset((i, i) for i in range(n)))
            pats.append(frozenset((i, n - 1 - i) for i in range(n)))
            return tuple(pats)
        if self.kind == "corners":
            return (frozenset({(0, 0), (0, n - 1), (n - 1, 0), (n - 1, n - 1)}),)
        if self.kind == "custom":
            for pat in self.custom:
                if not pat:
                    raise ValidationError("custom pattern must be non-empty")
                for (r, c) in pat:
                    if not (0 <= r < n and 0 <= c < n):
                        raise ValidationError(
                            f"custom pattern position {(r, c)} outside {n}x{n} grid"
                        )
            return self.custom
        raise ValidationError(f"unknown pattern family kind: {self.kind!r}")


STANDARD_LINES = PatternFamily("lines")
FOUR_CORNERS = PatternFamily("corners")


def custom_family(position_sets: Iterable[Iterable[Position]]) -> PatternFamily:
    """Build a custom family from explicit position sets (validated when
    instantiated against a card)."""
    return PatternFamily("custom", tuple(frozenset(p) for p in position_sets))


def family_from_name(name: str) -> PatternFamily:
    if name == "lines":
        return STANDARD_LINES
    if name == "corners":
        return FOUR_CORNERS
    raise ValidationError(f"unknown pattern family name: {name!r}")


@dataclass(frozen=True)
class Line:
    """One winning line as the set of numbers that must all be called.

    `source` is (card index, pattern index) for traceability only; identity
    and deduplication are by number-set alone.
    """

    numbers: frozenset[int]
    source: tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        if not self.numbers:
            raise ValidationError("a line must cover at least one number")

    @property
    def key(self) -> tuple[int, ...]:
        """Canonical form: sorted number tuple."""
        return tuple(sorted(self.numbers))


@dataclass(frozen=True)
class LineSet:
    """Deduplicated lines over a call pool of `universe_size` numbers."""

    universe_size: int
    lines: tuple[Line, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        seen = set()
        for line in self.lines:
            if any(not (1 <= x <= self.universe_size) for x in line.numbers):
                raise ValidationError(
                    f"line {line.key} outside universe [1, {self.universe_size}]"
                )
            if line.key in seen:
                raise ValidationError(f"duplicate line in LineSet: {line.key}")
            seen.add(line.key)

    def __len__(self) -> int:
        return len(self.lines)

    @property
    def number_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(line.numbers for line in self.lines)

    @property
    def covered_numbers(self) -> tuple[int, ...]:
        """Sorted distinct numbers appearing in any line."""
        covered: set[int] = set()
        for line in self.lines:
            covered |= line.numbers
        return tuple(sorted(covered))

    @property
    def min_line_size(self) -> int:
        return min(len(line.numbers) for line in self.lines)


def generate_card(spec: CardSpec, seed: int) -> Card:
    """Generate a card: each column is a uniformly random ordered sample of
    n distinct values from its column interval.

    Pure function of (spec, seed): repeated calls are byte-identical, and
    the within-column order is part of the random outcome (it fixes rows
    and diagonals).
    """
    rng = random.Random(seed)
    n = spec.n
    columns = []
    for col in range(n):
        lo, hi = spec.column_interval(col)
        columns.append(rng.sample(range(lo, hi + 1), n))
    grid = tuple(tuple(columns[c][r] for c in range(n)) for r in range(n))
    return Card(spec=spec, grid=grid)


def generate_cards(spec: CardSpec, count: int, master_seed: int) -> list[Card]:
    """Generate `count` cards; card i uses a sub-seed derived from
    (master_seed, i), so one master seed reproduces the whole set."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    return [generate_card(spec, derive_seed(master_seed, i)) for i in range(count)]


def canonical_card(spec: CardSpec) -> Card:
    """The deterministic card with grid[r][c] = m*c + r + 1.

    Every valid card with the same spec shares its line geometry, so this
    is the reference card for quantities that depend only on pattern
    geometry (single-card coverage profiles, sweeps over m).
    """
    n, m = spec.n, spec.m
    grid = tuple(tuple(m * c + r + 1 for c in range(n)) for r in range(n))
    return Card(spec=spec, grid=grid)


def lines_of(card: Card, family: PatternFamily, card_index: int = 0) -> LineSet:
    """Instantiate the family's patterns as number-sets for this card.

    With free_space set, the center number is dropped from every pattern
    that contains it, so lines through the center need one fewer call.
    Duplicate number-sets (possible only for custom families) collapse to
    the first occurrence.
    """
    spec = card.spec
    patterns = family.position_patterns(spec.n)
    center = spec.center
    lines: list[Line] = []
    seen: set[tuple[int, ...]] = set()
    for pat_index, positions in enumerate(patterns):
        if spec.free_space:
            positions = positions - {center}
            if not positions:
                raise ValidationError(
                    f"pattern {pat_index} covers only the free center square"
                )
        numbers = frozenset(card.number_at(r, c) for (r, c) in positions)
        line = Line(numbers=numbers, source=(card_index, pat_index))
        if line.key not in seen:
            seen.add(line.key)
            lines.append(line)
    return LineSet(universe_size=spec.pool_size, lines=tuple(lines))


def union_lines(cards: Sequence[Card], family: PatternFamily) -> LineSet:
    """Concatenate per-card lines and deduplicate by number-set.

    The result is the unique-line set of the multiplayer game: duplicates
    across cards count once, and reordering the cards changes only the
    surviving `source` tags, never the set of number-sets.
    """
    if not cards:
        raise ValidationError("need at least one card")
    spec = cards[0].spec
    if any(card.spec != spec for card in cards):
        raise ValidationError("all cards must share the same CardSpec")
    lines: list[Line] = []
    seen: set[tuple[int, ...]] = set()
    for card_index, card in enumerate(cards):
        for line in lines_of(card, family, card_index=card_index).lines:
            if line.key not in seen:
                seen.add(line.key)
                lines.append(line)
    return LineSet(universe_size=spec.pool_size, lines=tuple(lines))


def save_cards(path: str, cards: Sequence[Card], master_seed: int | None = None) -> None:
    """Write a multiplayer card file: the master seed plus each card's
    full {"n", "m", "free_space", "grid"} object."""
    payload = {"seed": master_seed, "cards": [card.to_dict() for card in cards]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_cards(path: str) -> tuple[list[Card], int | None]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return [Card.from_dict(d) for d in payload["cards"]], payload.get("seed")
