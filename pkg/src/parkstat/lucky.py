"""Lucky and unlucky cars: expected counts of preference vectors by number
of unlucky cars, their generating polynomials, the weighted Pascal triangle,
and enumeration oracles for all of them.

A car is unlucky when its preferred spot is already taken on arrival.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Optional

from ._parallel import fan_out
from .exactprob import MAX_VECTORS, _check_cap, leaves
from .poly import Poly
from .protocol import classical_is_pf


@dataclass(frozen=True)
class TriangleTable:
    """Ragged table of nonnegative integers, one tuple per row."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for r in rows:
            for v in r:
                if not isinstance(v, int) or v < 0:
                    raise ValueError(f"entry {v!r} is not a nonnegative integer")

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def __len__(self):
        return len(self.rows)

    def to_json(self) -> str:
        return json.dumps([list(r) for r in self.rows])

    @classmethod
    def from_json(cls, text: str) -> "TriangleTable":
        return cls(tuple(tuple(r) for r in json.loads(text)))

    def to_csv(self) -> str:
        width = max(len(r) for r in self.rows)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i"] + [f"k{k}" for k in range(width)])
        for i, r in enumerate(self.rows):
            w.writerow([i] + list(r) + [""] * (width - len(r)))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TriangleTable":
        rows = list(csv.reader(io.StringIO(text)))[1:]
        return cls(tuple(tuple(int(v) for v in r[1:] if v != "") for r in rows))


def _elementary_symmetric(weights) -> list[Fraction]:
    e = [Fraction(1)]
    for w in weights:
        e = [a + w * b for a, b in zip(e + [Fraction(0)], [Fraction(0)] + e)]
    return e


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"expected an integer, got {x}")
    return x.numerator


def _unlucky_row(n: int, spots: int) -> list[int]:
    # car i (2..n) faces i-1 taken spots and spots-(i-1) free ones
    weights = [Fraction(i - 1, spots - (i - 1)) for i in range(2, n + 1)]
    return [_as_int(factorial(n) * e) for e in _elementary_symmetric(weights)]


def unlucky_expected_circular(n: int, k: Optional[int] = None):
    """Expected number of vectors in ``[n+1]^n`` (first car at spot 1) with
    ``k`` unlucky cars; the whole row ``k = 0..n-1`` when ``k`` is None."""
    row = _unlucky_row(n, n + 1)
    return row if k is None else row[k]


def unlucky_expected_linear(n: int, k: Optional[int] = None):
    """Expected number of vectors in ``[n]^n`` with ``k`` unlucky cars,
    counting the ``n`` choices of the first car."""
    row = _unlucky_row(n, n)
    return row if k is None else row[k]


def q_generating_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of ``prod_{k=2..n} [(n+1-k) q + k]``, lowest degree first."""
    coeffs = [1]
    for k in range(2, n + 1):
        a, b = n + 1 - k, k  # a q + b
        coeffs = [b * x + a * y for x, y in zip(coeffs + [0], [0] + coeffs)]
    return tuple(coeffs)


def pascal_rows(n: int, weights) -> list[tuple[int, ...]]:
    """Rows ``0..n`` of the two-weight recurrence
    ``E(i,k) = w_lucky(i) E(i-1,k) + w_unlucky(i) E(i-1,k-1)``, anchored at
    row 1 = ``(1, 0)``.  ``weights(i)`` returns ``(w_lucky, w_unlucky)``."""
    rows = [(0,), (1, 0)]
    for i in range(2, n + 1):
        prev = rows[-1]
        lucky_w, unlucky_w = weights(i)

        def at(k):
            return prev[k] if 0 <= k < len(prev) else 0

        rows.append(tuple(lucky_w * at(k) + unlucky_w * at(k - 1) for k in range(i + 1)))
    return rows[: n + 1]


def weighted_pascal(n: int) -> TriangleTable:
    """Rows ``i = 0..n`` of ``E_n(i, k)`` for ``k = 0..i``.

    Row 0 is the display value ``(0,)``; the recurrence starts from row 1.
    """
    return TriangleTable(tuple(pascal_rows(n, lambda i: ((n + 1) - (i - 1), i - 1))))


def a220884_rows(max_i: int) -> TriangleTable:
    """OEIS A220884 as a left-aligned triangle, rows ``0..max_i``."""
    rows = [(1,)]
    for i in range(1, max_i + 1):
        rows.append(q_generating_polynomial(i) + (0,))
    return TriangleTable(tuple(rows))


def classical_lucky_generating(n: int) -> tuple[int, ...]:
    """Coefficients of ``q * prod_{i=1..n-1} [i + (n-i+1) q]``."""
    coeffs = [0, 1]
    for i in range(1, n):
        a, b = n - i + 1, i  # a q + b
        coeffs = [b * x + a * y for x, y in zip(coeffs + [0], [0] + coeffs)]
    return tuple(coeffs)


def classical_lucky_enumerated(n: int) -> tuple[int, ...]:
    """Count parking functions of length ``n`` by their number of lucky cars,
    parking each with forward-only search."""
    _check_cap(n**n, MAX_VECTORS, "classical_lucky_enumerated")
    counts = [0] * (n + 1)
    for alpha in product(range(1, n + 1), repeat=n):
        if not classical_is_pf(alpha):
            continue
        occ = 0
        lucky = 0
        for a in alpha:
            s = a
            if not occ >> (s - 1) & 1:
                lucky += 1
            while occ >> (s - 1) & 1:
                s += 1
            occ |= 1 << (s - 1)
        counts[lucky] += 1
    return tuple(counts)


def poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _unlucky_job(args) -> Counter:
    i, spots, first, free_len = args
    acc: Counter = Counter()
    for rest in product(range(1, spots + 1), repeat=free_len):
        for h, t, _, unl, _ in leaves(first + rest, spots, True):
            acc[unl, h, t] += 1
    return acc


def unlucky_distribution_bruteforce(
    n: int, i: int, fixed_first: bool = True, spots: Optional[int] = None, workers: int = 1
) -> dict[int, Poly]:
    """Expected count, as a polynomial in ``p``, of length-``i`` preference
    vectors on a circle of ``spots`` spots (default ``n + 1``) with exactly
    ``k`` unlucky cars, for ``k = 0..i``.  Every coin branch is explored.

    With ``fixed_first`` the first preference is pinned to spot 1.
    """
    spots = n + 1 if spots is None else spots
    if not 1 <= i <= spots:
        raise ValueError("need 1 <= i <= spots")
    free = i - 1 if fixed_first else i
    _check_cap(spots**free, MAX_VECTORS, "unlucky_distribution_bruteforce")
    if fixed_first:
        jobs = [(i, spots, (1,), free)]
    else:
        jobs = [(i, spots, (a,), free - 1) for a in range(1, spots + 1)]
    total: Counter = Counter()
    for part in fan_out(_unlucky_job, jobs, workers):
        total.update(part)
    per_k = {k: Counter() for k in range(i + 1)}
    for (k, h, t), c in total.items():
        per_k[k][h, t] += c
    return {k: Poly.from_branch_counts(c) for k, c in per_k.items()}
