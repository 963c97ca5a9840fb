"""Exact parking probabilities as polynomials in ``p``, and the exhaustive
enumeration oracles built on them.

Every coin branch of a preference vector is explored.  A branch with ``h``
heads and ``t`` tails carries weight ``p**h * (1-p)**t``; per-branch weights
are tallied as integer counts keyed by ``(h, t)`` and turned into a
:class:`~parkstat.poly.Poly` only at the end, so accumulation over millions
of branches stays in plain integer arithmetic.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional

from ._parallel import fan_out
from .errors import CoinsExhausted, IdentityFailure, SizeLimit
from .poly import Poly
from .protocol import (
    Coin,
    ParkingResult,
    PreferenceVector,
    park_deterministic,
    seek,
)

MAX_CARS = 20
MAX_VECTORS = 10**7
MAX_VACANCY_VECTORS = 10**6
ENV_CAP = "PARKSTAT_MAX_ENUM"


def enumeration_cap(default: int) -> int:
    """Vector-count cap, overridable through ``PARKSTAT_MAX_ENUM``."""
    raw = os.environ.get(ENV_CAP)
    return int(raw) if raw else default


def _check_cap(count: int, default: int, what: str) -> None:
    cap = enumeration_cap(default)
    if count > cap:
        raise SizeLimit(f"{what}: {count} vectors exceeds cap {cap}")


# -- branch exploration ---------------------------------------------------


def leaves(prefs: tuple[int, ...], spots: int, circular: bool) -> list[tuple[int, int, int, int, bool]]:
    """All coin branches of a run, as ``(heads, tails, occupied_mask,
    n_unlucky, success)`` tuples."""
    m = len(prefs)
    out = []

    def rec(i, occ, h, t, unl, ok):
        while i < m:
            a = prefs[i]
            bit = 1 << (a - 1)
            if not occ & bit:
                occ |= bit
                i += 1
                continue
            for forward in (True, False):
                s = seek(occ, spots, circular, a, forward)
                nocc = occ if s is None else occ | (1 << (s - 1))
                rec(i + 1, nocc, h + forward, t + (not forward), unl + 1, ok and s is not None)
            return
        out.append((h, t, occ, unl, ok))

    rec(0, 0, 0, 0, 0, True)
    return out


def coin_branches(alpha: PreferenceVector) -> Iterator[tuple[tuple[Coin, ...], ParkingResult]]:
    """Every reachable coin sequence with its result, replayed through
    :func:`park_deterministic`.  Slow; meant for auditing."""
    pending: list[tuple[Coin, ...]] = [()]
    while pending:
        coins = pending.pop()
        try:
            res = park_deterministic(alpha, coins)
        except CoinsExhausted:
            pending.append(coins + (Coin.HEADS,))
            pending.append(coins + (Coin.TAILS,))
            continue
        yield coins, res


def _check_cars(m: int, max_cars: Optional[int]) -> None:
    cap = MAX_CARS if max_cars is None else max_cars
    if m > cap:
        raise SizeLimit(f"{m} cars exceeds branching cap {cap}")


def park_probability(alpha: PreferenceVector, max_cars: Optional[int] = None) -> Poly:
    """Probability that every car in ``alpha`` parks, as an exact polynomial in ``p``.

    >>> str(park_probability(PreferenceVector.linear((2, 2, 1))))
    '2p - p^2'
    """
    _check_cars(alpha.m, max_cars)
    counts: Counter = Counter()
    for h, t, _, _, ok in leaves(alpha.prefs, alpha.street.spots, alpha.street.circular):
        if ok:
            counts[h, t] += 1
    return Poly.from_branch_counts(counts)


def vacancy_probability(alpha: PreferenceVector) -> dict[int, Poly]:
    """Probability that each spot is left vacant, keyed by spot."""
    _check_cars(alpha.m, None)
    spots = alpha.street.spots
    counts = {s: Counter() for s in range(1, spots + 1)}
    for h, t, occ, _, _ in leaves(alpha.prefs, spots, alpha.street.circular):
        for s in range(1, spots + 1):
            if not occ >> (s - 1) & 1:
                counts[s][h, t] += 1
    return {s: Poly.from_branch_counts(c) for s, c in counts.items()}


# -- whole-space enumerations ---------------------------------------------


def _mass_job(args) -> Counter:
    n, m, first = args
    acc: Counter = Counter()
    for rest in product(range(1, n + 1), repeat=m - 1):
        for h, t, _, _, ok in leaves((first,) + rest, n, False):
            if ok:
                acc[h, t] += 1
    return acc


def total_pf_mass(n: int, m: Optional[int] = None, workers: int = 1) -> Poly:
    """Sum of :func:`park_probability` over every vector in ``[n]^m``.

    The vector space is split on the first preference; partial tallies are
    merged exactly.
    """
    m = n if m is None else m
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    _check_cap(n**m, MAX_VECTORS, "total_pf_mass")
    total: Counter = Counter()
    for part in fan_out(_mass_job, [(n, m, a) for a in range(1, n + 1)], workers):
        total.update(part)
    return Poly.from_branch_counts(total)


def _last_pref_job(args) -> dict[int, Counter]:
    n, first = args
    acc = {j: Counter() for j in range(1, n + 1)}
    for rest in product(range(1, n + 1), repeat=n - 1):
        prefs = (first,) + rest
        tally = acc[prefs[-1]]
        for h, t, _, _, ok in leaves(prefs, n, False):
            if ok:
                tally[h, t] += 1
    return acc


def last_pref_distribution_bruteforce(n: int, workers: int = 1) -> dict[int, tuple[Poly, Poly]]:
    """For each last preference ``j``, the pair (parking mass with ``a_n = j``,
    total parking mass).  Their ratio is ``P(a_n = j | parks)``."""
    _check_cap(n**n, MAX_VECTORS, "last_pref_distribution_bruteforce")
    merged = {j: Counter() for j in range(1, n + 1)}
    for part in fan_out(_last_pref_job, [(n, a) for a in range(1, n + 1)], workers):
        for j, c in part.items():
            merged[j].update(c)
    nums = {j: Poly.from_branch_counts(c) for j, c in merged.items()}
    den = sum(nums.values(), Poly())
    return {j: (num, den) for j, num in nums.items()}


def conditional_last_pref(n: int, p: Fraction, workers: int = 1) -> tuple[Fraction, ...]:
    """Brute-force ``P(a_n = j | parks)`` for ``j = 1..n`` at a rational ``p``."""
    table = last_pref_distribution_bruteforce(n, workers)
    p = Fraction(p)
    return tuple(num(p) / den(p) for num, den in (table[j] for j in range(1, n + 1)))


@dataclass(frozen=True)
class VacancyTable:
    """Expected vacancy counts on the ``n + 1``-spot circle, indexed by
    leading preference ``a`` and spot ``i`` (both 1-based)."""

    n: int
    entries: tuple[tuple[Poly, ...], ...]

    @property
    def size(self) -> int:
        return self.n + 1

    def entry(self, a: int, i: int) -> Poly:
        return self.entries[a - 1][i - 1]

    def row_sum(self, a: int) -> Poly:
        return sum(self.entries[a - 1], Poly())

    def col_sum(self, i: int) -> Poly:
        return sum((row[i - 1] for row in self.entries), Poly())

    def check(self) -> None:
        """Raise :class:`IdentityFailure` unless the table is circulant with a
        zero diagonal and all line sums equal ``(n+1)^(n-1)``."""
        k = self.size
        target = Poly.const((self.n + 1) ** (self.n - 1))
        for a in range(1, k + 1):
            if self.entry(a, a) != Poly():
                raise IdentityFailure(f"diagonal entry ({a},{a}) nonzero", self.entry(a, a), Poly())
            for i in range(1, k + 1):
                shifted = self.entry(a % k + 1, i % k + 1)
                if self.entry(a, i) != shifted:
                    raise IdentityFailure(f"not circulant at ({a},{i})", self.entry(a, i), shifted)
            if self.row_sum(a) != target:
                raise IdentityFailure(f"row {a} sum", self.row_sum(a), target)
            if self.col_sum(a) != target:
                raise IdentityFailure(f"column {a} sum", self.col_sum(a), target)

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[e.to_json() for e in row] for row in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "VacancyTable":
        return cls(obj["n"], tuple(tuple(Poly.from_json(e) for e in row) for row in obj["entries"]))

    def csv_rows(self):
        yield ("a", "i", "degree", "numerator", "denominator")
        for a, row in enumerate(self.entries, start=1):
            for i, e in enumerate(row, start=1):
                for d, num, den in e.csv_rows():
                    yield (a, i, d, num, den)

    @classmethod
    def from_csv_rows(cls, rows) -> "VacancyTable":
        rows = list(rows)[1:]
        k = max(int(r[0]) for r in rows)
        coeffs: dict[tuple[int, int], dict[int, Fraction]] = {}
        for a, i, d, num, den in rows:
            coeffs.setdefault((int(a), int(i)), {})[int(d)] = Fraction(int(num), int(den))

        def poly(a, i):
            c = coeffs.get((a, i), {})
            return Poly(c.get(d, 0) for d in range(max(c) + 1)) if c else Poly()

        return cls(k - 1, tuple(tuple(poly(a, i) for i in range(1, k + 1)) for a in range(1, k + 1)))


def _vacancy_job(args) -> Counter:
    n, first = args
    k = n + 1
    acc: Counter = Counter()
    for rest in product(range(1, k + 1), repeat=n - 1):
        for h, t, occ, _, _ in leaves((first,) + rest, k, True):
            free = ~occ & ((1 << k) - 1)
            acc[free.bit_length(), h, t] += 1
    return acc


def vacancy_table(n: int, workers: int = 1) -> VacancyTable:
    """Per leading preference ``a`` and spot ``i``, the expected number of
    vectors in ``[n+1]^n`` starting with ``a`` that leave ``i`` vacant."""
    k = n + 1
    _check_cap(k**n, MAX_VACANCY_VECTORS, "vacancy_table")
    rows = []
    for part in fan_out(_vacancy_job, [(n, a) for a in range(1, k + 1)], workers):
        per_spot = {i: Counter() for i in range(1, k + 1)}
        for (i, h, t), c in part.items():
            per_spot[i][h, t] += c
        rows.append(tuple(Poly.from_branch_counts(per_spot[i]) for i in range(1, k + 1)))
    return VacancyTable(n, tuple(rows))


def expected_pf_count(n: int, m: Optional[int] = None) -> int:
    """Closed form ``(n+1-m)(n+1)^(m-1)`` for the total parking mass."""
    m = n if m is None else m
    return (n + 1 - m) * (n + 1) ** (m - 1)

