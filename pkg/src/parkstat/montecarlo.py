"""Seeded Monte Carlo for the coin-flip protocol.

Random numbers follow a counter-based contract, so a trial's outcome depends
only on ``(seed, trial index)`` and never on how trials are split across
threads:

* ``key(seed, t) = mix64(mix64(seed) + (t + 1) * GAMMA)``
* ``draw(seed, t, c) = mix64(key(seed, t) + (c + 1) * GAMMA)``, turned into a
  uniform ``[0, 1)`` double from its top 53 bits.

Car ``i`` (0-based) takes its preference from counter ``2i`` and, only if it
turns out to be unlucky, its coin from counter ``2i + 1`` (heads iff the
uniform is below ``p``).  ``mix64`` is the SplitMix64 finalizer; all
arithmetic is modulo 2**64.

The bulk path is a numba kernel; :func:`simulate_trial` replays one trial
through :func:`parkstat.protocol.park_lazy` for auditing.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .formulas import RationalDist, last_pref_distribution
from .protocol import Coin, ParkingResult, PreferenceVector, Street, StreetKind, park_lazy

try:
    import numba
    from numba import njit, prange
except ImportError:  # pragma: no cover
    numba = None
else:
    warnings.filterwarnings("ignore", message="The TBB threading layer", category=numba.NumbaWarning)

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
BLOCK = 1 << 18


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def trial_key(seed: int, trial: int) -> int:
    return mix64(mix64(seed) + (trial + 1) * GAMMA)


def draw_uniform(key: int, counter: int) -> float:
    return (mix64(key + (counter + 1) * GAMMA) >> 11) * 2.0**-53


def derive_seed(seed: int, index: int) -> int:
    """Seed for the ``index``-th point of a sweep."""
    return mix64(mix64(seed) ^ (index + 1))


@dataclass(frozen=True)
class SimConfig:
    n: int
    p: float
    samples: int
    seed: int = 0
    m: Optional[int] = None
    street: str = "linear"

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.street not in ("linear", "circular"):
            raise ValueError(f"unknown street kind {self.street!r}")
        if not 1 <= self.cars <= self.spots:
            raise ValueError("need 1 <= m <= spots")

    @property
    def cars(self) -> int:
        return self.n if self.m is None else self.m

    @property
    def spots(self) -> int:
        return self.n + 1 if self.street == "circular" else self.n

    def with_(self, **kw) -> "SimConfig":
        d = asdict(self)
        d.update(kw)
        return SimConfig(**d)


@dataclass(frozen=True)
class SimReport:
    config: SimConfig
    trials: int
    successes: int
    histogram: tuple[int, ...] = field(repr=False)  # counts of the last preference over successes

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def success_rate_se(self) -> float:
        r = self.success_rate
        return math.sqrt(r * (1 - r) / self.trials)

    @property
    def conditional_mean(self) -> float:
        if not self.successes:
            return math.nan
        return sum(j * c for j, c in enumerate(self.histogram, start=1)) / self.successes

    @property
    def standard_error(self) -> float:
        """Standard error of :attr:`conditional_mean` (sample standard deviation)."""
        s = self.successes
        if s < 2:
            return math.nan
        s1 = sum(j * c for j, c in enumerate(self.histogram, start=1))
        s2 = sum(j * j * c for j, c in enumerate(self.histogram, start=1))
        var = Fraction(s * s2 - s1 * s1, s * (s - 1))
        return math.sqrt(var / s)

    def frequencies(self) -> np.ndarray:
        h = np.asarray(self.histogram, dtype=float)
        return h / self.successes if self.successes else h

    def to_json(self) -> dict:
        return {
            "config": asdict(self.config),
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "success_rate_se": self.success_rate_se,
            "conditional_mean": self.conditional_mean,
            "standard_error": self.standard_error,
            "histogram": list(self.histogram),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SimReport":
        return cls(SimConfig(**obj["config"]), obj["trials"], obj["successes"], tuple(obj["histogram"]))

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("n", "m", "p", "seed", "trials", "successes", "success_rate", "cond_mean", "std_err"))
        c = self.config
        w.writerow((c.n, c.cars, repr(c.p), c.seed, self.trials, self.successes,
                    repr(self.success_rate), repr(self.conditional_mean), repr(self.standard_error)))
        return buf.getvalue()

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("j", "count", "frequency"))
        freq = self.frequencies()
        for j, cnt in enumerate(self.histogram, start=1):
            w.writerow((j, cnt, repr(float(freq[j - 1]))))
        return buf.getvalue()


def sweep_csv(reports: Sequence[SimReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("p", "success_rate", "cond_mean", "std_err"))
    for r in reports:
        w.writerow((repr(r.config.p), repr(r.success_rate), repr(r.conditional_mean), repr(r.standard_error)))
    return buf.getvalue()


# -- reference path -------------------------------------------------------------


def simulate_trial(cfg: SimConfig, trial: int) -> tuple[PreferenceVector, ParkingResult]:
    """Replay one trial through the protocol kernel.

    The consumed coins are reified in ``result.coins``, so
    ``park_deterministic(alpha, result.coins)`` reproduces the result.
    """
    key = trial_key(cfg.seed, trial)
    spots = cfg.spots
    prefs = tuple(min(int(draw_uniform(key, 2 * i) * spots), spots - 1) + 1 for i in range(cfg.cars))
    kind = StreetKind.CIRCULAR if cfg.street == "circular" else StreetKind.LINEAR
    alpha = PreferenceVector(prefs, Street(kind, spots))

    def flip(car):
        return Coin.HEADS if draw_uniform(key, 2 * (car - 1) + 1) < cfg.p else Coin.TAILS

    return alpha, park_lazy(alpha, flip)


def _run_python(cfg: SimConfig, start: int, count: int):
    success = np.zeros(count, dtype=np.bool_)
    last = np.zeros(count, dtype=np.int64)
    for k in range(count):
        alpha, res = simulate_trial(cfg, start + k)
        success[k] = res.success
        last[k] = alpha.prefs[-1]
    return success, last


# -- numba kernel ---------------------------------------------------------------

if numba is not None:
    _U = np.uint64

    @njit(cache=True, inline="always")
    def _nb_mix64(z):
        z = (z ^ (z >> _U(30))) * _U(_M1)
        z = (z ^ (z >> _U(27))) * _U(_M2)
        return z ^ (z >> _U(31))

    @njit(cache=True, inline="always")
    def _nb_uniform(key, counter):
        x = _nb_mix64(key + _U(counter + 1) * _U(GAMMA))
        return (x >> _U(11)) * (1.0 / 9007199254740992.0)

    @njit(cache=True)
    def _nb_trial(key, spots, m, p, circular, occ):
        occ[:] = 0
        ok = True
        last = 0
        for i in range(m):
            a = int(_nb_uniform(key, 2 * i) * spots)
            if a > spots - 1:
                a = spots - 1
            a += 1
            last = a
            if occ[a - 1] == 0:
                occ[a - 1] = 1
                continue
            step = 1 if _nb_uniform(key, 2 * i + 1) < p else -1
            s = a + step
            placed = 0
            for _ in range(spots):
                if circular:
                    if s > spots:
                        s = 1
                    elif s < 1:
                        s = spots
                elif s < 1 or s > spots:
                    break
                if occ[s - 1] == 0:
                    placed = s
                    break
                s += step
            if placed == 0:
                ok = False
            else:
                occ[placed - 1] = 1
        return ok, last

    @njit(parallel=True, cache=True)
    def _nb_block(base, start, count, spots, m, p, circular, success, last):
        for k in prange(count):
            occ = np.zeros(spots, dtype=np.uint8)
            key = _nb_mix64(base + _U(start + k + 1) * _U(GAMMA))
            ok, a = _nb_trial(key, spots, m, p, circular, occ)
            success[k] = ok
            last[k] = a


def _run_numba(cfg: SimConfig, start: int, count: int):
    success = np.zeros(count, dtype=np.bool_)
    last = np.zeros(count, dtype=np.int64)
    _nb_block(np.uint64(mix64(cfg.seed)), start, count, cfg.spots, cfg.cars, float(cfg.p),
              cfg.street == "circular", success, last)
    return success, last


def set_threads(threads: Optional[int]) -> None:
    if numba is None or threads is None:
        return
    numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))


def run_simulation(cfg: SimConfig, threads: Optional[int] = None, backend: str = "auto") -> SimReport:
    """Run ``cfg.samples`` independent trials and tally successes and the
    last car's preference among successful trials."""
    if backend == "auto":
        backend = "numba" if numba is not None else "python"
    runner = _run_numba if backend == "numba" else _run_python
    set_threads(threads)
    successes = 0
    hist = np.zeros(cfg.spots + 1, dtype=np.int64)
    for start in range(0, cfg.samples, BLOCK):
        count = min(BLOCK, cfg.samples - start)
        ok, last = runner(cfg, start, count)
        successes += int(ok.sum())
        hist += np.bincount(last[ok], minlength=cfg.spots + 1)
    return SimReport(cfg, cfg.samples, successes, tuple(int(c) for c in hist[1:]))


def sweep_p(cfg_base: SimConfig, p_grid: Sequence[float], threads: Optional[int] = None) -> list[SimReport]:
    """One report per grid value; point ``k`` uses seed ``derive_seed(seed, k)``."""
    if not len(p_grid):
        raise ValueError("empty p grid")
    return [
        run_simulation(cfg_base.with_(p=float(p), seed=derive_seed(cfg_base.seed, k)), threads)
        for k, p in enumerate(p_grid)
    ]


@dataclass(frozen=True)
class HistogramComparison:
    empirical: np.ndarray
    exact: RationalDist
    tv_gap: float
    report: SimReport


def histogram_vs_exact(cfg: SimConfig, threads: Optional[int] = None) -> HistogramComparison:
    """Empirical law of the last preference among parking runs vs the exact law."""
    if cfg.street != "linear" or cfg.cars != cfg.n:
        raise ValueError("comparison needs n cars on a linear street of n spots")
    report = run_simulation(cfg, threads)
    exact = last_pref_distribution(cfg.n, Fraction(cfg.p))
    emp = report.frequencies()
    gap = 0.5 * float(np.abs(emp - np.asarray(exact.floats())).sum()) if report.successes else math.nan
    return HistogramComparison(emp, exact, gap, report)
