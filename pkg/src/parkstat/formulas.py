"""Closed-form results for the last car's preference, evaluated exactly.

Everything here is rational arithmetic except the large-``n`` mean
expansion and the Poisson/Edgeworth comparison, which are approximations by
nature and use floats (or mpmath for the Poisson tail).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import NamedTuple

import mpmath

from .errors import IdentityFailure, SupportMismatch, ZeroBaseNegativeExponent
from .poly import frac_str


def rpow(base, exp: int) -> Fraction:
    """Exact rational power; negative exponents are fine unless the base is 0."""
    base = Fraction(base)
    if exp < 0:
        if base == 0:
            raise ZeroBaseNegativeExponent(f"0 ** {exp}")
        return 1 / base ** (-exp)
    return base**exp


# -- distributions --------------------------------------------------------


@dataclass(frozen=True)
class RationalDist:
    """Exact probability masses on ``1..n``; ``mass[j - 1]`` is ``P(j)``."""

    mass: tuple[Fraction, ...]

    def __post_init__(self):
        mass = tuple(Fraction(x) for x in self.mass)
        object.__setattr__(self, "mass", mass)
        if not mass:
            raise ValueError("empty distribution")
        if any(x < 0 for x in mass):
            raise ValueError("negative mass")
        if sum(mass) != 1:
            raise ValueError(f"masses sum to {sum(mass)}, not 1")

    @property
    def n(self) -> int:
        return len(self.mass)

    def __getitem__(self, j: int) -> Fraction:
        return self.mass[j - 1]

    @classmethod
    def uniform(cls, n: int) -> "RationalDist":
        return cls((Fraction(1, n),) * n)

    @classmethod
    def point(cls, n: int, j: int) -> "RationalDist":
        return cls(tuple(Fraction(int(k == j)) for k in range(1, n + 1)))

    def floats(self) -> list[float]:
        return [float(x) for x in self.mass]

    def mean(self) -> Fraction:
        return sum((j * x for j, x in enumerate(self.mass, start=1)), Fraction(0))

    def csv_rows(self):
        yield ("j", "numerator", "denominator", "float")
        for j, x in enumerate(self.mass, start=1):
            yield (j, x.numerator, x.denominator, repr(float(x)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(self.csv_rows())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RationalDist":
        rows = sorted(csv.DictReader(io.StringIO(text)), key=lambda r: int(r["j"]))
        return cls(tuple(Fraction(int(r["numerator"]), int(r["denominator"])) for r in rows))


def tv_distance(P: RationalDist, Q: RationalDist) -> Fraction:
    """Half the L1 distance between two mass functions on the same support."""
    if P.n != Q.n:
        raise SupportMismatch(f"support sizes {P.n} and {Q.n} differ")
    return sum((abs(a - b) for a, b in zip(P.mass, Q.mass)), Fraction(0)) / 2


# -- Abel sums ------------------------------------------------------------


@dataclass(frozen=True)
class AbelParams:
    x: Fraction
    y: Fraction
    p_exp: int
    q_exp: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))


def abel_sum(n: int, params: AbelParams) -> Fraction:
    """``sum_s C(n,s) (x+s)^(s+p) (y+n-s)^(n-s+q)`` over ``s = 0..n``."""
    x, y, pe, qe = params.x, params.y, params.p_exp, params.q_exp
    return sum(
        (comb(n, s) * rpow(x + s, s + pe) * rpow(y + n - s, n - s + qe) for s in range(n + 1)),
        Fraction(0),
    )


def abel_closed_form(kind: str, n: int, x, y) -> Fraction:
    """Right-hand sides of the four special Abel instances.

    ``kind`` names the exponent pair: ``"-1,-1"``, ``"-1,0"``, ``"-1,1"`` or ``"0,0"``.
    """
    x, y = Fraction(x), Fraction(y)
    z = x + y + n
    if kind == "-1,-1":
        return (rpow(x, -1) + rpow(y, -1)) * rpow(z, n - 1)
    if kind == "-1,0":
        return rpow(x, -1) * z**n
    if kind == "-1,1":
        return rpow(x, -1) * sum(comb(n, s) * z**s * (y + n - s) * factorial(n - s) for s in range(n + 1))
    if kind == "0,0":
        return sum((comb(n, s) * z**s * factorial(n - s) for s in range(n + 1)), Fraction(0))
    raise ValueError(f"unknown Abel instance {kind!r}")


# -- the last car's preference ------------------------------------------------


def _shuffle_terms(n: int) -> list[int]:
    # C(n-1,s) (n-s)^(n-s-2) (s+1)^(s-1); the only negative powers have base 1
    out = []
    c = 1  # C(n-1, s), updated in place
    for s in range(n):
        a, b = n - s, s + 1
        out.append(c * (a ** (a - 2) if a >= 2 else 1) * (b ** (b - 2) if b >= 2 else 1))
        c = c * (n - 1 - s) // (s + 1)
    return out


def _last_pref_numerators(n: int, p: Fraction) -> tuple[list[int], int]:
    """Integer numerators ``N_j`` and common denominator ``D`` with
    ``P(a_n = j | parks) = N_j / D``."""
    p = Fraction(p)
    a, b = p.numerator, p.denominator
    terms = _shuffle_terms(n)
    prefix = [0]
    for t in terms:
        prefix.append(prefix[-1] + t)
    scale = (n + 1) ** (n - 1)
    D = b * scale
    base = 2 * D // (n + 1)
    nums = []
    for j in range(1, n + 1):
        hi = prefix[n] - prefix[n - j + 1]  # s = n-j+1 .. n-1
        lo = prefix[n - j]  # s = 0 .. n-j-1
        nums.append(base - (a * hi + (b - a) * lo))
    return nums, D


def last_pref_distribution(n: int, p) -> RationalDist:
    """Law of the last car's preference given that all ``n`` cars park."""
    if n < 1:
        raise ValueError("n must be positive")
    nums, D = _last_pref_numerators(n, Fraction(p))
    return RationalDist(tuple(Fraction(x, D) for x in nums))


def last_pref_distribution_half(n: int) -> RationalDist:
    """The ``p = 1/2`` law via its one-term simplification."""
    scale = 2 * (n + 1) ** (n - 1)
    mass = []
    for j in range(1, n + 1):
        term = comb(n - 1, n - j) * rpow(j, j - 2) * rpow(n - j + 1, n - j - 1)
        mass.append(Fraction(1, n + 1) + term / scale)
    return RationalDist(tuple(mass))


def last_pref_mean_exact(n: int, p) -> Fraction:
    """``sum_j j Q_{n,p}(j)``, with the sum over ``j`` swapped inside the
    shuffle-term sums so each term is weighted by a small integer."""
    if n < 1:
        raise ValueError("n must be positive")
    p = Fraction(p)
    a, b = p.numerator, p.denominator
    D = b * (n + 1) ** (n - 1)
    hi = lo = 0
    for s, t in enumerate(_shuffle_terms(n)):
        hi += t * (n * (n + 1) - (n - s) * (n - s + 1)) // 2  # j = n-s+1 .. n
        lo += t * (n - s - 1) * (n - s) // 2  # j = 1 .. n-s-1
    total = (2 * D // (n + 1)) * n * (n + 1) // 2 - a * hi - (b - a) * lo
    return Fraction(total, D)


def last_pref_mean_asymptotic(n: int, p: float) -> float:
    return (n + 1) / 2 - (2 * p - 1) * (math.sqrt(2 * math.pi) / 4 * math.sqrt(n) - 7 / 6)


def convexity_decompose(n: int, p) -> tuple[RationalDist, RationalDist, RationalDist]:
    """Return ``(Q_0, Q_1, Q_p)``, checking ``Q_p = p Q_1 + (1-p) Q_0`` and
    the mirror relation ``Q_1(j) = Q_0(n+1-j)``."""
    p = Fraction(p)
    q0, q1, qp = (last_pref_distribution(n, x) for x in (Fraction(0), Fraction(1), p))
    mix = tuple(p * a + (1 - p) * b for a, b in zip(q1.mass, q0.mass))
    if mix != qp.mass:
        raise IdentityFailure("convex combination", qp.mass, mix)
    if q1.mass != q0.mass[::-1]:
        raise IdentityFailure("mirror symmetry", q1.mass, q0.mass[::-1])
    return q0, q1, qp


@dataclass(frozen=True)
class TVReport:
    n: int
    p: Fraction
    tv: Fraction  # ||Q_p - U||
    tv_classical: Fraction  # ||Q_1 - U||
    tv_reversed: Fraction  # ||Q_0 - U||

    @property
    def lower(self) -> Fraction:
        return abs(2 * self.p - 1) * self.tv_classical

    @property
    def upper(self) -> Fraction:
        return self.tv_classical

    @property
    def ok(self) -> bool:
        return self.lower <= self.tv <= self.upper and self.tv_classical == self.tv_reversed

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": frac_str(self.p),
            "tv": frac_str(self.tv),
            "tv_float": float(self.tv),
            "lower": frac_str(self.lower),
            "upper": frac_str(self.upper),
            "lower_float": float(self.lower),
            "upper_float": float(self.upper),
            "holds": self.ok,
        }


def tv_bounds_check(n: int, p) -> TVReport:
    """Distances of ``Q_p``, ``Q_1`` and ``Q_0`` from uniform on ``1..n``."""
    q0, q1, qp = convexity_decompose(n, p)
    u = RationalDist.uniform(n)
    return TVReport(n, Fraction(p), tv_distance(qp, u), tv_distance(q1, u), tv_distance(q0, u))


def tv_half_bounds(n: int) -> tuple[Fraction, Fraction]:
    """Lower and upper bounds on ``||Q_{n,1/2} - U||``:
    ``n^(n-2) / (4 (n+1)^(n-1)) - 1/(n(n+1))`` and ``1/(n+1)``."""
    lower = rpow(n, n - 2) / (4 * (n + 1) ** (n - 1)) - Fraction(1, n * (n + 1))
    return lower, Fraction(1, n + 1)


def tv_test_function_lb(n: int, p) -> Fraction:
    """Half the gap in ``E f`` between uniform and ``Q_p`` for ``f(j) = j/n``;
    a lower bound on the total variation distance whenever it is positive."""
    return (Fraction(n + 1, 2 * n) - last_pref_mean_exact(n, p) / n) / 2


# -- Poisson tail --------------------------------------------------------------


@dataclass(frozen=True)
class EdgeworthTerms:
    n: int
    sigma: float = 1.0
    mu3: float = 1.0
    phi0: float = 0.5
    d0: float = 0.5  # continuity correction D(0)

    @property
    def correction(self) -> float:
        return (self.mu3 / (6 * self.sigma**3) + self.d0 / self.sigma) / math.sqrt(2 * math.pi * self.n)

    @property
    def value(self) -> float:
        return self.phi0 + self.correction


class PoissonCheck(NamedTuple):
    exact_prob: mpmath.mpf
    edgeworth: float
    residual: float


def poisson_cdf_check(n: int, prec: int = 128) -> PoissonCheck:
    """``P(X_1 + ... + X_n <= n)`` for iid Poisson(1), exactly summed at
    ``prec`` bits, against its one-term Edgeworth approximation."""
    with mpmath.workprec(prec):
        nn = mpmath.mpf(n)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        for s in range(1, n + 1):
            term = term * nn / s
            total += term
        exact = total * mpmath.exp(-nn)
    edge = EdgeworthTerms(n).value
    return PoissonCheck(exact, edge, float(exact) - edge)

