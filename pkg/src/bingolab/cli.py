"""Command-line interface.

Subcommands: exact (profile + distribution + summary for one spec), sweep
(expectation vs m), multiplayer (N seeded cards: exact, simulated, or
both), reliability (P/Q polynomial on a p-grid). Every command is
deterministic given its flags; rerunning byte-reproduces the outputs.

Exit codes: 0 ok, 1 usage/validation, 2 capacity, 3 internal.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from math import fsum
from pathlib import Path

from .distribution import (
    expectation_closed_form,
    game_distribution,
    reliability_polynomial,
    sweep_expectation,
    write_distribution_csv,
    write_sweep_csv,
)
from .engine import DEFAULT_ENUM_LIMIT, coverage_profile, s_value
from .errors import CapacityError, ValidationError
from .model import (
    CardSpec,
    canonical_card,
    family_from_name,
    generate_cards,
    lines_of,
    save_cards,
    union_lines,
)
from .montecarlo import SIM_STREAM_INDEX, SimConfig, run_trials
from .rng import derive_seed


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; this CLI reserves
    2 for capacity errors, so usage errors exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _decimal_str(value: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _rational_dict(value: Fraction, digits: int = 12) -> dict:
    return {
        "rational": f"{value.numerator}/{value.denominator}",
        "decimal": _decimal_str(value, digits),
    }


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolve_workers(args) -> int:
    if args.workers is not None:
        return args.workers
    return int(os.environ.get("BINGO_WORKERS", "1"))


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _single_card_lines(args, m: int):
    spec = CardSpec(n=args.n, m=m, free_space=args.free_space)
    family = family_from_name(args.family)
    return spec, lines_of(canonical_card(spec), family)


def cmd_exact(args) -> int:
    spec, lines = _single_card_lines(args, args.m)
    profile = coverage_profile(lines, _resolve_workers(args), limit=args.limit)
    s = s_value(profile)
    dist = game_distribution(profile, spec.pool_size)
    closed = expectation_closed_form(s, spec.n, spec.m)
    if closed != dist.expectation:
        raise AssertionError("closed-form and summed expectations disagree")

    out = _out_dir(args)
    _write_json(out / "profile.json", profile.to_dict())
    with open(out / "distribution.csv", "w", encoding="utf-8") as fh:
        write_distribution_csv(dist, fh)
    summary = {
        "n": spec.n,
        "m": spec.m,
        "family": args.family,
        "free_space": spec.free_space,
        "pool_size": spec.pool_size,
        "unique_lines": len(lines),
        "s": _rational_dict(s, digits=30),
        "one_minus_s": _rational_dict(1 - s, digits=30),
        "expectation_closed_form": _rational_dict(closed),
        "expectation_by_sum": _rational_dict(dist.expectation),
    }
    _write_json(out / "summary.json", summary)
    json.dump(summary, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def cmd_sweep(args) -> int:
    if args.m_max < args.m_min:
        raise ValidationError("--m-max must be >= --m-min")
    family = family_from_name(args.family)
    rows = sweep_expectation(
        args.n,
        family,
        range(args.m_min, args.m_max + 1),
        free_space=args.free_space,
        worker_count=_resolve_workers(args),
        limit=args.limit,
    )
    expectations = [e for _, e in rows]
    for i in range(2, len(expectations)):
        second = expectations[i] - 2 * expectations[i - 1] + expectations[i - 2]
        if second != 0:
            raise AssertionError(f"expectation not affine in m at m={rows[i][0]}")
    slope = (
        (expectations[-1] - expectations[0]) / (rows[-1][0] - rows[0][0])
        if len(rows) > 1
        else None
    )
    intercept = expectations[0] - slope * rows[0][0] if slope is not None else None

    buf = io.StringIO()
    if slope is not None:
        buf.write(
            f"# slope={float(slope):.12g},intercept={float(intercept):.12g}\n"
        )
    write_sweep_csv(rows, buf)
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    return 0


def cmd_multiplayer(args) -> int:
    spec = CardSpec(n=args.n, m=args.m, free_space=args.free_space)
    family = family_from_name(args.family)
    cards = generate_cards(spec, args.players, args.seed)
    lines = union_lines(cards, family)
    out = _out_dir(args)
    # The exact expectation is conditional on the card realization; a
    # report without its cards would be unreproducible.
    save_cards(str(out / "cards.json"), cards, master_seed=args.seed)

    report: dict = {
        "n": spec.n,
        "m": spec.m,
        "players": args.players,
        "family": args.family,
        "free_space": spec.free_space,
        "seed": args.seed,
        "mode": args.mode,
        "pool_size": spec.pool_size,
        "unique_lines": len(lines),
    }

    exact_expectation: Fraction | None = None
    if args.mode in ("exact", "validate"):
        try:
            profile = coverage_profile(lines, _resolve_workers(args), limit=args.limit)
        except CapacityError as exc:
            raise CapacityError(f"{exc} (rerun with --mode simulate)") from exc
        s_cond = s_value(profile)
        exact_expectation = expectation_closed_form(s_cond, spec.n, spec.m)
        report["exact"] = {
            "s": _rational_dict(s_cond, digits=30),
            "one_minus_s": _rational_dict(1 - s_cond, digits=30),
            "expectation": _rational_dict(exact_expectation),
        }

    if args.mode in ("simulate", "validate"):
        sim_seed = derive_seed(args.seed, SIM_STREAM_INDEX)
        config = SimConfig(
            lines=lines, trials=args.trials, seed=sim_seed,
            workers=_resolve_workers(args),
        )
        stats = run_trials(config)
        report["simulation"] = stats.to_dict(seed=sim_seed)

    if args.mode == "validate":
        assert exact_expectation is not None
        expected = float(exact_expectation)
        error = abs(stats.mean - expected)
        report["comparison"] = {
            "absolute_error": error,
            "relative_error": error / expected,
            "error_in_standard_errors": (
                error / stats.standard_error if stats.standard_error > 0 else None
            ),
        }

    _write_json(out / "report.json", report)
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def cmd_reliability(args) -> int:
    if args.points < 2:
        raise ValidationError("--points must be >= 2")
    _, lines = _single_card_lines(args, args.n)
    profile = coverage_profile(lines, _resolve_workers(args), limit=args.limit)
    poly = reliability_polynomial(profile)
    steps = args.points - 1
    grid = [i / steps for i in range(args.points)]
    p_vals = [poly.any_complete(p) for p in grid]
    q_vals = [1.0 - v for v in p_vals]
    trapezoid = fsum(
        (q_vals[i] + q_vals[i + 1]) * (grid[i + 1] - grid[i]) / 2.0
        for i in range(steps)
    )
    exact = 1 - s_value(profile)

    buf = io.StringIO()
    buf.write("p,P,Q\n")
    for p, pv, qv in zip(grid, p_vals, q_vals):
        buf.write(f"{p:.12g},{pv:.12g},{qv:.12g}\n")
    buf.write(
        f"# trapezoid_q={trapezoid:.12g},exact_one_minus_s={float(exact):.12g},"
        f"difference={abs(trapezoid - float(exact)):.12g}\n"
    )
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    return 0


def _add_common(sub: argparse.ArgumentParser, *, with_m: bool = True) -> None:
    sub.add_argument("--n", type=int, required=True, help="card side length (odd, >= 3)")
    if with_m:
        sub.add_argument("--m", type=int, required=True, help="values per column (>= n)")
    sub.add_argument("--family", choices=("lines", "corners"), default="lines",
                     help="winning pattern family")
    sub.add_argument("--free-space", action="store_true",
                     help="pre-mark the center square")
    sub.add_argument("--workers", type=int, default=None,
                     help="worker count (default: BINGO_WORKERS or 1)")
    sub.add_argument("--limit", type=int, default=DEFAULT_ENUM_LIMIT,
                     help="max unique lines for exact enumeration")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bingolab",
                     description="Exact and simulated game-length analysis "
                                 "for generalized (n,m)-Bingo.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_exact = subs.add_parser("exact", parents=[], help="exact single-card analysis")
    _add_common(p_exact)
    p_exact.add_argument("--out", default=".", help="output directory")
    p_exact.set_defaults(func=cmd_exact)

    p_sweep = subs.add_parser("sweep", help="expectation vs m at fixed n")
    _add_common(p_sweep, with_m=False)
    p_sweep.add_argument("--m-min", type=int, required=True)
    p_sweep.add_argument("--m-max", type=int, required=True)
    p_sweep.add_argument("--out", default=None, help="output CSV (default: stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_multi = subs.add_parser("multiplayer", help="N seeded cards: exact and/or simulated")
    _add_common(p_multi)
    p_multi.add_argument("--players", type=int, required=True, help="number of cards")
    p_multi.add_argument("--seed", type=int, required=True, help="master seed")
    p_multi.add_argument("--trials", type=int, default=100_000)
    p_multi.add_argument("--mode", choices=("exact", "simulate", "validate"),
                         default="validate")
    p_multi.add_argument("--out", default=".", help="output directory")
    p_multi.set_defaults(func=cmd_multiplayer)

    p_rel = subs.add_parser("reliability", help="P(p)/Q(p) on a p-grid")
    _add_common(p_rel, with_m=False)
    p_rel.add_argument("--points", type=int, default=10_001, help="grid points on [0, 1]")
    p_rel.add_argument("--out", default=None, help="output CSV (default: stdout)")
    p_rel.set_defaults(func=cmd_reliability)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"bingolab: error: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"bingolab: capacity error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"bingolab: internal error: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
