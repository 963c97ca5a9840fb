"""Named exact checks, one per closed-form result, each comparing a formula
against an independent evaluation (usually exhaustive enumeration)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional

from . import exactprob, formulas, lucky
from .poly import Poly, frac_str


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    lhs: Any = None
    rhs: Any = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status}  {self.name}: {self.detail}"
        if not self.passed:
            out += f"\n  computed: {self.lhs}\n  expected: {self.rhs}"
        return out


def check_pf_mass(n: int, m: Optional[int] = None, workers: int = 1) -> CheckResult:
    m = n if m is None else m
    mass = exactprob.total_pf_mass(n, m, workers)
    want = Poly.const(exactprob.expected_pf_count(n, m))
    name = "Theorem 1 (p-invariance)" if m == n else "Theorem 2 (m cars)"
    return CheckResult(
        f"{name} n={n} m={m}",
        mass == want,
        f"mass {mass} over {n ** m} vectors",
        str(mass),
        str(want),
    )


DEFAULT_P_GRID = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def check_last_pref(n: int, p: Optional[Fraction] = None, workers: int = 1) -> CheckResult:
    grid = DEFAULT_P_GRID if p is None else (Fraction(p),)
    table = exactprob.last_pref_distribution_bruteforce(n, workers)
    for q in grid:
        brute = tuple(num(q) / den(q) for num, den in (table[j] for j in range(1, n + 1)))
        formula = formulas.last_pref_distribution(n, q).mass
        if brute != formula:
            return CheckResult(f"Theorem 3 n={n} p={q}", False, "distribution mismatch",
                               [frac_str(x) for x in formula], [frac_str(x) for x in brute])
    ps = ", ".join(str(q) for q in grid)
    return CheckResult(f"Theorem 3 n={n}", True, f"formula equals enumeration at p in {{{ps}}}")


def check_half_rate(n: int) -> CheckResult:
    tv = formulas.tv_distance(formulas.last_pref_distribution_half(n), formulas.RationalDist.uniform(n))
    lower, upper = formulas.tv_half_bounds(n)
    ok = lower <= tv <= upper
    return CheckResult(
        f"Theorem 5 n={n}",
        ok,
        f"{float(lower):.6g} <= TV(Q_1/2, U) = {float(tv):.6g} <= {float(upper):.6g}",
        float(tv),
        (float(lower), float(upper)),
    )


def check_sandwich(n: int, p: Fraction = Fraction(3, 4)) -> CheckResult:
    rep = formulas.tv_bounds_check(n, p)
    return CheckResult(
        f"Theorem 6 / sandwich n={n} p={rep.p}",
        rep.ok,
        f"{float(rep.lower):.6g} <= TV(Q_p, U) = {float(rep.tv):.6g} <= {float(rep.upper):.6g}",
        float(rep.tv),
        (float(rep.lower), float(rep.upper)),
    )


def check_unlucky(n: int, workers: int = 1) -> CheckResult:
    brute = lucky.unlucky_distribution_bruteforce(n, n, fixed_first=True, workers=workers)
    want = lucky.unlucky_expected_circular(n)
    got = [brute[k] for k in range(n)]
    ok = all(g == Poly.const(w) for g, w in zip(got, want)) and brute[n] == Poly()
    return CheckResult(f"Theorem 7 n={n}", ok, f"U_n(k) = {want}, p-independent by enumeration",
                       [str(g) for g in got], want)


def check_generating(n: int) -> CheckResult:
    coeffs = list(lucky.q_generating_polynomial(n))
    row = lucky.unlucky_expected_circular(n)
    return CheckResult(f"Theorem 8 n={n}", coeffs == row, f"row {tuple(row)}", coeffs, row)


def check_abel(n: int, x=1, y=1) -> CheckResult:
    pairs = {"-1,-1": (-1, -1), "-1,0": (-1, 0), "-1,1": (-1, 1), "0,0": (0, 0)}
    for kind, (pe, qe) in pairs.items():
        lhs = formulas.abel_sum(n, formulas.AbelParams(x, y, pe, qe))
        rhs = formulas.abel_closed_form(kind, n, x, y)
        if lhs != rhs:
            return CheckResult(f"Abel A_{n}({x},{y};{kind})", False, "identity fails", lhs, rhs)
    return CheckResult(f"Abel identities n={n} x={x} y={y}", True, "all four special instances hold")


def check_pascal(n: int, workers: int = 1) -> CheckResult:
    table = lucky.weighted_pascal(n)
    bottom = list(table[n][:n])
    if bottom != lucky.unlucky_expected_circular(n):
        return CheckResult(f"weighted Pascal n={n}", False, "bottom row differs from U_n",
                           bottom, lucky.unlucky_expected_circular(n))
    for i in range(1, n + 1):
        brute = lucky.unlucky_distribution_bruteforce(n, i, fixed_first=True, workers=workers)
        got = [brute[k] for k in range(i + 1)]
        want = [Poly.const(v) for v in table[i]]
        if got != want:
            return CheckResult(f"weighted Pascal n={n} row {i}", False, "enumeration differs",
                               [str(g) for g in got], list(table[i]))
    return CheckResult(f"weighted Pascal n={n}", True, f"rows 1..{n} match enumeration; bottom row {tuple(bottom)}")


THEOREMS: dict[str, Callable[..., CheckResult]] = {
    "1": lambda n, m=None, p=None, workers=1: check_pf_mass(n, n, workers),
    "2": lambda n, m=None, p=None, workers=1: check_pf_mass(n, m, workers),
    "3": lambda n, m=None, p=None, workers=1: check_last_pref(n, p, workers),
    "5": lambda n, m=None, p=None, workers=1: check_half_rate(n),
    "6": lambda n, m=None, p=None, workers=1: check_sandwich(n, Fraction(3, 4) if p is None else p),
    "7": lambda n, m=None, p=None, workers=1: check_unlucky(n, workers),
    "8": lambda n, m=None, p=None, workers=1: check_generating(n),
    "abel": lambda n, m=None, p=None, workers=1: check_abel(n),
    "pascal": lambda n, m=None, p=None, workers=1: check_pascal(n, workers),
}
