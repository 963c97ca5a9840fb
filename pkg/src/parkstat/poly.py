"""Dense univariate polynomials in the forward probability ``p`` with exact
rational coefficients.

``coeffs[d]`` multiplies ``p**d``.  Trailing zeros are stripped, so the zero
polynomial has an empty coefficient tuple and equality is structural.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Union

Scalar = Union[int, Fraction]

CSV_HEADER = ("degree", "numerator", "denominator")


def frac_str(x: Fraction) -> str:
    """Render a rational as ``num/den`` (denominator always present)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def p(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def one_minus_p(cls) -> "Poly":
        return cls((1, -1))

    @classmethod
    def from_branch_counts(cls, counts) -> "Poly":
        """Sum ``count * p**h * (1-p)**t`` over a mapping ``{(h, t): count}``."""
        acc: dict[int, int] = {}
        for (h, t), c in counts.items():
            if not c:
                continue
            for d, v in enumerate(_monomial(h, t)):
                if v:
                    acc[d] = acc.get(d, 0) + c * v
        if not acc:
            return cls()
        return cls(acc.get(d, 0) for d in range(max(acc) + 1))

    # -- algebra ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        """Evaluate by Horner's rule; works for Fraction, float or mpf."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else type(x)(c.numerator) / c.denominator)
        return acc

    def reflect(self) -> "Poly":
        """Return the polynomial ``q(p) = self(1 - p)``."""
        out = Poly()
        base = Poly.one_minus_p()
        power = Poly.const(1)
        for c in self.coeffs:
            out = out + power * c
            power = power * base
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[frac_str(c) for c in self.coeffs]!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if d == 0:
                body = _fmt_mag(mag)
            else:
                var = "p" if d == 1 else f"p^{d}"
                if mag == 1:
                    body = var
                elif mag.denominator == 1:
                    body = f"{mag.numerator}{var}"
                else:
                    body = f"({mag}){var}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"coeffs": [frac_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "Poly":
        return cls(Fraction(s) for s in obj["coeffs"])

    def csv_rows(self) -> list[tuple[int, int, int]]:
        return [(d, c.numerator, c.denominator) for d, c in enumerate(self.coeffs)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(self.csv_rows())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Poly":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            return cls()
        width = max(int(r["degree"]) for r in rows) + 1
        cs = [Fraction(0)] * width
        for r in rows:
            cs[int(r["degree"])] = Fraction(int(r["numerator"]), int(r["denominator"]))
        return cls(cs)


def _fmt_mag(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _coerce(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return NotImplemented


@lru_cache(maxsize=None)
def _monomial(h: int, t: int) -> tuple[int, ...]:
    # integer coefficients of p**h * (1-p)**t
    out = [0] * (h + t + 1)
    for k in range(t + 1):
        out[h + k] = comb(t, k) * (-1) ** k
    return tuple(out)
