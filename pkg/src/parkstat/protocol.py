"""The coin-flip parking protocol, run deterministically against an explicit
sequence of coin outcomes.

Spots are numbered from 1.  A car whose preferred spot is free parks there.
Otherwise it flips exactly one coin: heads commits it to the forward
(increasing-index, clockwise) direction, tails to the backward one.  It then
takes the first free spot in that direction.  On a linear street it exits if
it runs off either end; on a circular street it wraps around.

Occupancy is carried as an int bitmask (bit ``s - 1`` set when spot ``s`` is
taken); :func:`seek` is the single movement rule shared by the exact
enumerators and the reference simulator.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import CoinsExhausted

EXITED = None  # assignment marker for a car that left the street


class StreetKind(enum.Enum):
    LINEAR = "linear"
    CIRCULAR = "circular"


class Coin(enum.Enum):
    HEADS = "H"
    TAILS = "T"

    @property
    def forward(self) -> bool:
        return self is Coin.HEADS

    def flipped(self) -> "Coin":
        return Coin.TAILS if self is Coin.HEADS else Coin.HEADS

    @classmethod
    def parse(cls, x) -> "Coin":
        if isinstance(x, Coin):
            return x
        if isinstance(x, bool):
            return cls.HEADS if x else cls.TAILS
        s = str(x).strip().upper()
        if s in ("H", "HEADS"):
            return cls.HEADS
        if s in ("T", "TAILS"):
            return cls.TAILS
        raise ValueError(f"not a coin outcome: {x!r}")


HEADS, TAILS = Coin.HEADS, Coin.TAILS


@dataclass(frozen=True)
class Street:
    kind: StreetKind
    spots: int

    def __post_init__(self):
        if self.spots < 1:
            raise ValueError("a street needs at least one spot")

    @property
    def circular(self) -> bool:
        return self.kind is StreetKind.CIRCULAR


@dataclass(frozen=True)
class PreferenceVector:
    prefs: tuple[int, ...]
    street: Street

    def __post_init__(self):
        object.__setattr__(self, "prefs", tuple(int(a) for a in self.prefs))
        m, spots = len(self.prefs), self.street.spots
        if m < 1:
            raise ValueError("need at least one car")
        if m > spots:
            raise ValueError(f"{m} cars cannot fit on {spots} spots")
        for a in self.prefs:
            if not 1 <= a <= spots:
                raise ValueError(f"preference {a} outside 1..{spots}")

    @classmethod
    def linear(cls, prefs: Sequence[int], n: Optional[int] = None) -> "PreferenceVector":
        """Preferences on a one-way street with ``n`` spots (default: one per car)."""
        return cls(tuple(prefs), Street(StreetKind.LINEAR, len(prefs) if n is None else n))

    @classmethod
    def circular(cls, prefs: Sequence[int], spots: Optional[int] = None) -> "PreferenceVector":
        """Preferences on a circle, by default with one more spot than cars."""
        return cls(tuple(prefs), Street(StreetKind.CIRCULAR, len(prefs) + 1 if spots is None else spots))

    @property
    def m(self) -> int:
        return len(self.prefs)

    def mirrored(self) -> "PreferenceVector":
        """Reflect every preference ``a -> spots + 1 - a``."""
        s = self.street.spots
        return PreferenceVector(tuple(s + 1 - a for a in self.prefs), self.street)


@dataclass(frozen=True)
class ParkingResult:
    assignment: tuple[Optional[int], ...]
    occupied: frozenset[int]
    vacant: frozenset[int]
    unlucky: frozenset[int]  # 1-based car indices
    flips_used: int
    success: bool
    coins: tuple[Coin, ...] = ()  # the flips actually consumed, in order


def seek(occupied: int, spots: int, circular: bool, start: int, forward: bool) -> Optional[int]:
    """First free spot strictly past ``start`` in the committed direction.

    Returns None when a linear street is exhausted.  On a circle the caller
    guarantees a vacancy exists.
    """
    step = 1 if forward else -1
    s = start + step
    if circular:
        for _ in range(spots):
            if s > spots:
                s = 1
            elif s < 1:
                s = spots
            if not occupied >> (s - 1) & 1:
                return s
            s += step
        raise RuntimeError("no vacancy on circular street")
    while 1 <= s <= spots:
        if not occupied >> (s - 1) & 1:
            return s
        s += step
    return None


def park_lazy(alpha: PreferenceVector, flip: Callable[[int], Coin]) -> ParkingResult:
    """Run the protocol, asking ``flip(car)`` for a coin whenever car ``car``
    (1-based) finds its spot taken."""
    spots, circular = alpha.street.spots, alpha.street.circular
    occ = 0
    assignment: list[Optional[int]] = []
    unlucky = []
    used: list[Coin] = []
    for car, a in enumerate(alpha.prefs, start=1):
        if not occ >> (a - 1) & 1:
            spot: Optional[int] = a
        else:
            unlucky.append(car)
            coin = Coin.parse(flip(car))
            used.append(coin)
            spot = seek(occ, spots, circular, a, coin.forward)
        assignment.append(spot)
        if spot is not None:
            occ |= 1 << (spot - 1)
    occupied = frozenset(s for s in range(1, spots + 1) if occ >> (s - 1) & 1)
    return ParkingResult(
        assignment=tuple(assignment),
        occupied=occupied,
        vacant=frozenset(range(1, spots + 1)) - occupied,
        unlucky=frozenset(unlucky),
        flips_used=len(used),
        success=all(s is not None for s in assignment),
        coins=tuple(used),
    )


def park_deterministic(alpha: PreferenceVector, coins: Iterable = ()) -> ParkingResult:
    """Park ``alpha`` consuming one entry of ``coins`` per unlucky car.

    Extra coins are ignored; running out raises :class:`CoinsExhausted`.
    """
    it = iter(coins)

    def flip(car):
        try:
            return next(it)
        except StopIteration:
            raise CoinsExhausted(f"car {car} is unlucky but no coin flips remain") from None

    return park_lazy(alpha, flip)


def classical_is_pf(alpha) -> bool:
    """Pigeonhole test: at least ``i`` cars prefer a spot ``<= i`` for every ``i``."""
    prefs = alpha.prefs if isinstance(alpha, PreferenceVector) else tuple(alpha)
    n = len(prefs)
    counts = [0] * (n + 2)
    for a in prefs:
        if not 1 <= a <= n:
            return False
        counts[a] += 1
    running = 0
    for i in range(1, n + 1):
        running += counts[i]
        if running < i:
            return False
    return True
