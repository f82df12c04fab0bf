from fractions import Fraction

import pytest

from bingolab import (
    STANDARD_LINES,
    CapacityError,
    CardSpec,
    Line,
    LineSet,
    exact_cdf_by_subsets,
    exact_expectation_by_enumeration,
    exact_reliability_by_grids,
    generate_card,
    lines_of,
    union_lines,
)


def make_lines(universe, *groups):
    return LineSet(universe_size=universe, lines=tuple(Line(frozenset(g)) for g in groups))


def test_cdf_at_full_pool_is_one():
    card = generate_card(CardSpec(n=3, m=3), 1)
    lines = lines_of(card, STANDARD_LINES)
    assert exact_cdf_by_subsets(lines, 9) == 1


def test_cdf_below_line_size_is_zero():
    card = generate_card(CardSpec(n=3, m=3), 1)
    lines = lines_of(card, STANDARD_LINES)
    assert exact_cdf_by_subsets(lines, 2) == 0


def test_cdf_3x3_first_completion():
    # 8 lines of 3 numbers; no 3-subset of the pool holds two lines
    card = generate_card(CardSpec(n=3, m=3), 123)
    lines = lines_of(card, STANDARD_LINES)
    assert exact_cdf_by_subsets(lines, 3) == Fraction(8, 84)


def test_expectation_single_number_line():
    lines = make_lines(2, {1})
    assert exact_expectation_by_enumeration(lines) == Fraction(3, 2)


def test_expectation_duplicate_cards_collapse():
    card = generate_card(CardSpec(n=3, m=3), 7)
    single = exact_expectation_by_enumeration(lines_of(card, STANDARD_LINES))
    doubled = exact_expectation_by_enumeration(union_lines([card, card], STANDARD_LINES))
    assert single == doubled


def test_reliability_endpoints():
    card = generate_card(CardSpec(n=3, m=3), 2)
    lines = lines_of(card, STANDARD_LINES)
    assert exact_reliability_by_grids(lines, Fraction(1)) == 1
    assert exact_reliability_by_grids(lines, Fraction(0)) == 0


def test_reliability_single_pair_line():
    lines = make_lines(2, {1, 2})
    p = Fraction(1, 3)
    assert exact_reliability_by_grids(lines, p) == p * p


def test_pool_capacity_cap():
    lines = make_lines(25, {1, 2, 3})
    with pytest.raises(CapacityError):
        exact_cdf_by_subsets(lines, 3)


def test_grid_capacity_cap():
    lines = make_lines(30, set(range(1, 22)))
    with pytest.raises(CapacityError):
        exact_reliability_by_grids(lines, 0.5)


def test_bad_k_rejected():
    lines = make_lines(9, {1, 2, 3})
    with pytest.raises(Exception):
        exact_cdf_by_subsets(lines, 10)
