"""Game-length CDF/PMF, expectations, and the reliability polynomial.

All quantities are single passes over a coverage profile. Two evaluation
routes exist side by side: an exact path on arbitrary-precision rationals
(the authoritative one; the alternating counts reach 1e7 at n=11 and
float cancellation is a real risk) and a double-precision fast path whose
binomial ratios are computed as telescoping products so that no factorial
is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, fsum
from typing import IO, Iterable, Sequence

from .engine import DEFAULT_ENUM_LIMIT, CoverageProfile, coverage_profile, s_value
from .errors import ValidationError
from .model import CardSpec, PatternFamily, canonical_card, lines_of


def _check_args(profile: CoverageProfile, pool_size: int, k: int | None = None) -> None:
    if pool_size < profile.support_max:
        raise ValidationError(
            f"pool_size {pool_size} smaller than the profile's maximum coverage "
            f"{profile.support_max}"
        )
    if k is not None and not (0 <= k <= pool_size):
        raise ValidationError(f"k must be in [0, {pool_size}], got {k}")


def cdf_at(profile: CoverageProfile, pool_size: int, k: int) -> Fraction:
    """P(game length <= k), exact: sum_j A[j] * C(k,j) / C(pool,j)."""
    _check_args(profile, pool_size, k)
    total = Fraction(0)
    for j, a in enumerate(profile.counts):
        if a and j <= k:
            total += Fraction(a * comb(k, j), comb(pool_size, j))
    return total


def cdf_at_float(profile: CoverageProfile, pool_size: int, k: int) -> float:
    """Float fast path for cdf_at; C(k,j)/C(pool,j) as the telescoping
    product of (k-i)/(pool-i)."""
    _check_args(profile, pool_size, k)
    ratio = 1.0
    terms = []
    for j in range(1, min(k, profile.support_max) + 1):
        ratio *= (k - j + 1) / (pool_size - j + 1)
        a = profile.counts[j]
        if a:
            terms.append(a * ratio)
    return fsum(terms)


def pmf_at(profile: CoverageProfile, pool_size: int, k: int) -> Fraction:
    """P(game length = k), exact: sum_j A[j] * C(k-1,j-1) / C(pool,j)."""
    _check_args(profile, pool_size, k)
    if k < 1:
        raise ValidationError(f"k must be >= 1 for the PMF, got {k}")
    total = Fraction(0)
    for j, a in enumerate(profile.counts):
        if a and j <= k:
            total += Fraction(a * comb(k - 1, j - 1), comb(pool_size, j))
    return total


def pmf_at_float(profile: CoverageProfile, pool_size: int, k: int) -> float:
    """Float fast path for pmf_at; C(k-1,j-1)/C(pool,j) expanded as
    (j/pool) * prod of (k-1-i)/(pool-1-i)."""
    _check_args(profile, pool_size, k)
    if k < 1:
        raise ValidationError(f"k must be >= 1 for the PMF, got {k}")
    prod = 1.0
    terms = []
    stop = min(k, profile.support_max)
    for j in range(1, stop + 1):
        a = profile.counts[j]
        if a:
            terms.append(a * j / pool_size * prod)
        if j < stop:
            prod *= (k - j) / (pool_size - j)
    return fsum(terms)


def expectation_closed_form(s: Fraction, n: int, m: int) -> Fraction:
    """E[game length] = (m*n + 1) * (1 - s): affine in m with slope
    n*(1 - s) and intercept (1 - s)."""
    return (m * n + 1) * (1 - s)


def expectation_by_sum(profile: CoverageProfile, pool_size: int) -> Fraction:
    """E[game length] = sum_k k * P(length = k), exact.

    Must agree with expectation_closed_form to the last digit; the
    agreement is the operational check of the summation-collapse step in
    the closed form's derivation.
    """
    _check_args(profile, pool_size)
    return sum(
        (k * pmf_at(profile, pool_size, k) for k in range(1, pool_size + 1)),
        Fraction(0),
    )


@dataclass(frozen=True)
class GameDistribution:
    """Exact CDF (k = 0..pool), PMF (k = 1..pool; index 0 fixed at zero),
    and expectation of the game length."""

    pool_size: int
    cdf: tuple[Fraction, ...]
    pmf: tuple[Fraction, ...]
    expectation: Fraction

    @property
    def expectation_float(self) -> float:
        return float(self.expectation)

    def cdf_floats(self) -> list[float]:
        return [float(x) for x in self.cdf]

    def pmf_floats(self) -> list[float]:
        return [float(x) for x in self.pmf]


def game_distribution(profile: CoverageProfile, pool_size: int) -> GameDistribution:
    """Tabulate the full distribution, cross-checking the directly
    evaluated PMF against CDF differences at every k."""
    _check_args(profile, pool_size)
    cdf = [cdf_at(profile, pool_size, k) for k in range(pool_size + 1)]
    pmf = [Fraction(0)] + [pmf_at(profile, pool_size, k) for k in range(1, pool_size + 1)]
    for k in range(1, pool_size + 1):
        if pmf[k] != cdf[k] - cdf[k - 1]:
            raise AssertionError(f"PMF/CDF inconsistency at k={k}")
        if pmf[k] < 0:
            raise AssertionError(f"negative PMF at k={k}")
    if cdf[pool_size] != 1 or sum(pmf) != 1:
        raise AssertionError("distribution does not sum to 1")
    expectation = sum((k * pmf[k] for k in range(1, pool_size + 1)), Fraction(0))
    return GameDistribution(
        pool_size=pool_size, cdf=tuple(cdf), pmf=tuple(pmf), expectation=expectation
    )


@dataclass(frozen=True)
class ReliabilityPolynomial:
    """P(p) = sum_j A[j] p^j: the probability that at least one line is
    fully marked when every square is marked independently with
    probability p."""

    coefficients: tuple[int, ...]

    def any_complete(self, p):
        """P(p) by Horner; exact when p is a Fraction."""
        if not (0 <= p <= 1):
            raise ValidationError(f"marking probability must be in [0, 1], got {p}")
        result = 0
        for coeff in reversed(self.coefficients):
            result = result * p + coeff
        return result

    def none_complete(self, p):
        """Q(p) = 1 - P(p): no line fully marked."""
        return 1 - self.any_complete(p)

    def integral(self) -> Fraction:
        """Exact integral of P over [0, 1]: sum_j A[j]/(j+1), which is the
        alternating sum S again."""
        return sum(
            (Fraction(a, j + 1) for j, a in enumerate(self.coefficients) if a != 0),
            Fraction(0),
        )


def reliability_polynomial(profile: CoverageProfile) -> ReliabilityPolynomial:
    return ReliabilityPolynomial(coefficients=profile.counts)


def eval_reliability(profile: CoverageProfile, p):
    """P(p) for a marking probability p in [0, 1]."""
    return reliability_polynomial(profile).any_complete(p)


def sweep_expectation(
    n: int,
    family: PatternFamily,
    m_range: Iterable[int],
    *,
    free_space: bool = False,
    worker_count: int = 1,
    limit: int = DEFAULT_ENUM_LIMIT,
) -> list[tuple[int, Fraction]]:
    """Expected game length for each m in m_range, at fixed n and family.

    The coverage profile depends only on the pattern geometry, so it is
    computed once and reused across every m.
    """
    m_list = list(m_range)
    if not m_list:
        raise ValidationError("m_range must be non-empty")
    if any(m < n for m in m_list):
        raise ValidationError(f"every m must be >= n={n}")
    spec = CardSpec(n=n, m=n, free_space=free_space)
    profile = coverage_profile(
        lines_of(canonical_card(spec), family), worker_count, limit=limit
    )
    s = s_value(profile)
    return [(m, expectation_closed_form(s, n, m)) for m in m_list]


def write_distribution_csv(dist: GameDistribution, fh: IO[str]) -> None:
    """Distribution dump: columns k, cdf, pmf at 12 significant digits."""
    fh.write("k,cdf,pmf\n")
    for k in range(dist.pool_size + 1):
        fh.write(f"{k},{float(dist.cdf[k]):.12g},{float(dist.pmf[k]):.12g}\n")


def write_sweep_csv(rows: Sequence[tuple[int, Fraction]], fh: IO[str]) -> None:
    """Sweep dump: columns m, expectation, slope_check, where slope_check
    is the finite difference against the previous row (blank on the first
    row; constant under the affine law)."""
    fh.write("m,expectation,slope_check\n")
    prev: tuple[int, Fraction] | None = None
    for m, e in rows:
        if prev is None:
            slope = ""
        else:
            slope = f"{float((e - prev[1]) / (m - prev[0])):.12g}"
        fh.write(f"{m},{float(e):.12g},{slope}\n")
        prev = (m, e)
