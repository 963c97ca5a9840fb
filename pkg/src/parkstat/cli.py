"""``parkstat`` command line.

Exit codes: 0 success, 1 failed identity, 2 usage error, 3 enumeration cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional

from . import exactprob, formulas, lucky, montecarlo, verify
from ._parallel import default_workers
from .errors import IdentityFailure, SizeLimit
from .poly import frac_str
from .protocol import PreferenceVector

EXIT_OK, EXIT_IDENTITY, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    """Exact ``a/b`` or integer; decimals are refused."""
    t = text.strip()
    if "." in t or "e" in t.lower():
        raise UsageError(f"exact command needs a rational like 1/2, got {text!r}")
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed rational {text!r}") from None


def parse_real(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed number {text!r}") from None


def parse_prob(text: str, exact: bool):
    v = parse_rational(text) if exact else parse_real(text)
    if not 0 <= v <= 1:
        raise UsageError(f"p must lie in [0, 1], got {text}")
    return v


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- subcommands ------------------------------------------------------------------


def cmd_prob(args) -> tuple[str, int]:
    try:
        prefs = [int(x) for x in args.prefs.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"malformed --prefs {args.prefs!r}") from None
    try:
        if args.street == "circular":
            alpha = PreferenceVector.circular(prefs, args.spots)
        else:
            alpha = PreferenceVector.linear(prefs, args.spots)
    except ValueError as e:
        raise UsageError(str(e)) from None
    poly = exactprob.park_probability(alpha)
    value = poly(parse_prob(args.p, True)) if args.p is not None else None
    fmt = args.format or "pretty"
    if fmt == "json":
        obj = {"prefs": prefs, "street": args.street, "spots": alpha.street.spots, "poly": str(poly), **poly.to_json()}
        if value is not None:
            obj["p"] = frac_str(parse_rational(args.p))
            obj["value"] = frac_str(value)
        return _json(obj), EXIT_OK
    if fmt == "csv":
        return poly.to_csv(), EXIT_OK
    out = str(poly) + "\n"
    if value is not None:
        out += f"{value}\n"
    return out, EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    p = parse_prob(args.p, True) if args.p is not None else None
    res = verify.THEOREMS[args.theorem](args.n, m=args.m, p=p, workers=args.threads)
    fmt = args.format or "pretty"
    if fmt == "json":
        out = _json({"check": res.name, "passed": res.passed, "detail": res.detail})
    elif fmt == "csv":
        out = _csv([("check", "passed", "detail"), (res.name, res.passed, res.detail)])
    else:
        out = res.line() + "\n"
    return out, EXIT_OK if res.passed else EXIT_IDENTITY


def cmd_dist(args) -> tuple[str, int]:
    p = parse_prob(args.p, True)
    if args.bruteforce:
        dist = formulas.RationalDist(exactprob.conditional_last_pref(args.n, p, args.threads))
    elif p == Fraction(1, 2) and args.half:
        dist = formulas.last_pref_distribution_half(args.n)
    else:
        dist = formulas.last_pref_distribution(args.n, p)
    fmt = args.format or "csv"
    if fmt == "json":
        return _json({"n": args.n, "p": frac_str(p), "mass": [frac_str(x) for x in dist.mass]}), EXIT_OK
    if fmt == "pretty":
        return "".join(f"{j}: {x} ({float(x):.6g})\n" for j, x in enumerate(dist.mass, start=1)), EXIT_OK
    return dist.to_csv(), EXIT_OK


def cmd_mean(args) -> tuple[str, int]:
    fmt = args.format or "pretty"
    if args.asymptotic:
        p = parse_prob(args.p, False)
        val = formulas.last_pref_mean_asymptotic(args.n, p)
        text, num = repr(val), val
    else:
        p = parse_prob(args.p, True)
        val = formulas.last_pref_mean_exact(args.n, p)
        text, num = frac_str(val) if fmt != "pretty" else str(val), float(val)
    if fmt == "json":
        return _json({"n": args.n, "p": args.p, "mean": text, "mean_float": num,
                      "kind": "asymptotic" if args.asymptotic else "exact"}), EXIT_OK
    if fmt == "csv":
        return _csv([("n", "p", "mean", "mean_float"), (args.n, args.p, text, repr(num))]), EXIT_OK
    return text + "\n", EXIT_OK


def cmd_tv(args) -> tuple[str, int]:
    p = parse_prob(args.p, True)
    rep = formulas.tv_bounds_check(args.n, p)
    obj = rep.to_json()
    fmt = args.format or "json"
    if fmt == "csv":
        keys = list(obj)
        out = _csv([keys, [obj[k] for k in keys]])
    elif fmt == "pretty":
        out = f"TV(Q_{{{args.n},{rep.p}}}, U) = {obj['tv_float']:.6g}  bounds [{obj['lower_float']:.6g}, {obj['upper_float']:.6g}]  {'holds' if rep.ok else 'VIOLATED'}\n"
    else:
        out = _json(obj)
    return out, EXIT_OK if rep.ok else EXIT_IDENTITY


def cmd_lucky(args) -> tuple[str, int]:
    n = args.n
    if args.kind == "circular":
        row = list(lucky.unlucky_expected_circular(n))
    elif args.kind == "linear":
        row = list(lucky.unlucky_expected_linear(n))
    elif args.kind == "generating":
        row = list(lucky.q_generating_polynomial(n))
    else:
        row = list(lucky.classical_lucky_generating(n))
    fmt = args.format or "csv"
    if fmt == "json":
        return _json({"n": n, "kind": args.kind, "coeffs": row}), EXIT_OK
    if fmt == "pretty":
        return " ".join(str(v) for v in row) + "\n", EXIT_OK
    return _csv([("k", "value")] + list(enumerate(row))), EXIT_OK


def cmd_triangle(args) -> tuple[str, int]:
    if args.kind == "a220884":
        table = lucky.a220884_rows(args.rows if args.rows is not None else 5)
    else:
        table = lucky.weighted_pascal(args.n if args.n is not None else 4)
    fmt = args.format or "csv"
    if fmt == "json":
        return table.to_json() + "\n", EXIT_OK
    if fmt == "pretty":
        return "".join(" ".join(str(v) for v in r) + "\n" for r in table.rows), EXIT_OK
    return table.to_csv(), EXIT_OK


def _sim_config(args, p) -> montecarlo.SimConfig:
    try:
        return montecarlo.SimConfig(n=args.n, m=args.m, p=p, samples=args.samples, seed=args.seed, street=args.street)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_simulate(args) -> tuple[str, int]:
    cfg = _sim_config(args, parse_prob(args.p, False))
    rep = montecarlo.run_simulation(cfg, threads=args.threads)
    fmt = args.format or "csv"
    if fmt == "json":
        return _json(rep.to_json()), EXIT_OK
    if args.histogram:
        return rep.histogram_csv(), EXIT_OK
    if fmt == "pretty":
        return (f"trials {rep.trials}  successes {rep.successes}  rate {rep.success_rate:.6g} "
                f"+- {rep.success_rate_se:.2g}  mean a_m {rep.conditional_mean:.6g} +- {rep.standard_error:.2g}\n"), EXIT_OK
    return rep.summary_csv(), EXIT_OK


def cmd_sweep(args) -> tuple[str, int]:
    grid = [parse_prob(x, False) for x in args.p_grid.split(",") if x.strip()]
    if not grid:
        raise UsageError("empty --p-grid")
    cfg = _sim_config(args, grid[0])
    reps = montecarlo.sweep_p(cfg, grid, threads=args.threads)
    fmt = args.format or "csv"
    if fmt == "json":
        return _json([r.to_json() for r in reps]), EXIT_OK
    return montecarlo.sweep_csv(reps), EXIT_OK


def cmd_vacancy(args) -> tuple[str, int]:
    table = exactprob.vacancy_table(args.n, workers=args.threads)
    ok = True
    try:
        table.check()
    except IdentityFailure:
        ok = False
    fmt = args.format or "csv"
    if fmt == "json":
        return _json({**table.to_json(), "invariants_hold": ok}), EXIT_OK if ok else EXIT_IDENTITY
    if fmt == "pretty":
        lines = ["\t".join(str(e) for e in row) for row in table.entries]
        return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_IDENTITY
    return _csv(table.csv_rows()), EXIT_OK if ok else EXIT_IDENTITY


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "pretty"), default=None)
    common.add_argument("--out", default=None, help="write output to this path instead of stdout")
    common.add_argument("--threads", type=int, default=None, help="worker count (default: all cores)")

    parser = argparse.ArgumentParser(prog="parkstat", description="Probabilistic parking functions: exact and simulated.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prob", parents=[common], help="parking probability of one preference vector")
    p.add_argument("--prefs", required=True, help="comma-separated preferences, e.g. 2,2,1")
    p.add_argument("--street", choices=("linear", "circular"), default="linear")
    p.add_argument("--spots", type=int, default=None)
    p.add_argument("--p", default=None, help="evaluate at this rational p")
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("verify", parents=[common], help="run one exact identity check")
    p.add_argument("--theorem", required=True, choices=sorted(verify.THEOREMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--p", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dist", parents=[common], help="law of the last preference given parking")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--bruteforce", action="store_true")
    p.add_argument("--half", action="store_true", help="use the p=1/2 simplification")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("mean", parents=[common], help="mean last preference given parking")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--asymptotic", action="store_true")
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("tv", parents=[common], help="distance to uniform with its bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", required=True)
    p.set_defaults(func=cmd_tv)

    p = sub.add_parser("lucky", parents=[common], help="unlucky-car count rows")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("circular", "linear", "generating", "classical"), default="circular")
    p.set_defaults(func=cmd_lucky)

    p = sub.add_parser("triangle", parents=[common], help="A220884 rows or the weighted Pascal triangle")
    p.add_argument("--kind", choices=("a220884", "pascal"), default="a220884")
    p.add_argument("--rows", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_triangle)

    for name, func, helptext in (
        ("simulate", cmd_simulate, "Monte Carlo run at one p"),
        ("sweep", cmd_sweep, "Monte Carlo runs over a grid of p"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, default=None)
        p.add_argument("--samples", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--street", choices=("linear", "circular"), default="linear")
        if name == "simulate":
            p.add_argument("--p", required=True)
            p.add_argument("--histogram", action="store_true", help="emit the j,count,frequency histogram")
        else:
            p.add_argument("--p-grid", default="0,0.25,0.5,0.75,1")
        p.set_defaults(func=func)

    p = sub.add_parser("vacancy", parents=[common], help="expected vacancy table on the circle")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_vacancy)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_workers()
    try:
        out, code = args.func(args)
    except UsageError as e:
        print(f"parkstat: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SizeLimit as e:
        print(f"parkstat: size limit: {e}", file=sys.stderr)
        return EXIT_CAP
    except IdentityFailure as e:
        print(f"parkstat: identity failed: {e}\n  lhs: {e.lhs}\n  rhs: {e.rhs}", file=sys.stderr)
        return EXIT_IDENTITY
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
