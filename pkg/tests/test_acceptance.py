"""Acceptance gate: one test per criterion, each timed against its budget.

A per-criterion PASS/FAIL line is printed in the terminal summary.
"""

import math
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from math import comb, factorial

import pytest

from oracles import GOLDEN_N3, GOLDEN_A220884, GOLDEN_PASCAL4
from parkstat.exactprob import conditional_last_pref, expected_pf_count, park_probability, total_pf_mass
from parkstat.formulas import (
    AbelParams,
    RationalDist,
    abel_closed_form,
    abel_sum,
    last_pref_distribution,
    last_pref_distribution_half,
    last_pref_mean_asymptotic,
    last_pref_mean_exact,
    tv_bounds_check,
    tv_distance,
    tv_half_bounds,
)
from parkstat.lucky import (
    a220884_rows,
    classical_lucky_enumerated,
    classical_lucky_generating,
    poly_eval,
    q_generating_polynomial,
    unlucky_distribution_bruteforce,
    unlucky_expected_circular,
    weighted_pascal,
)
from parkstat.montecarlo import SimConfig, histogram_vs_exact
from parkstat.poly import Poly
from parkstat.protocol import PreferenceVector

F = Fraction
GRID = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]


@contextmanager
def budget(seconds):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < seconds, f"took {elapsed:.1f} s, budget {seconds} s"


@pytest.mark.criterion(1, "golden parking probabilities, all 27 vectors of [3]^3")
def test_criterion_01_golden_n3():
    with budget(1):
        for alpha, want in GOLDEN_N3.items():
            assert park_probability(PreferenceVector.linear(alpha)) == want
        assert len(GOLDEN_N3) == 27


@pytest.mark.criterion(2, "p-invariance of total parking mass, n <= 6")
def test_criterion_02_p_invariance():
    with budget(30):
        for n in range(1, 7):
            assert total_pf_mass(n, n) == Poly.const((n + 1) ** (n - 1))


@pytest.mark.criterion(3, "total mass with m cars, 1 <= m <= n <= 6")
def test_criterion_03_m_cars():
    with budget(60):
        for n in range(1, 7):
            for m in range(1, n + 1):
                assert total_pf_mass(n, m) == Poly.const((n + 1 - m) * (n + 1) ** (m - 1))
                assert expected_pf_count(n, m) == (n + 1 - m) * (n + 1) ** (m - 1)


@pytest.mark.criterion(4, "last-preference law equals enumeration, n <= 6")
def test_criterion_04_last_pref_oracle():
    with budget(60):
        for n in range(1, 7):
            for p in GRID:
                assert last_pref_distribution(n, p).mass == conditional_last_pref(n, p)


@pytest.mark.criterion(5, "mean last preference: exact at 1/2, asymptotic within 0.05 at n=1000")
def test_criterion_05_mean():
    with budget(60):
        for n in range(1, 1001):
            assert last_pref_mean_exact(n, F(1, 2)) == F(n + 1, 2)
        for p in (0, 1):
            gap = abs(float(last_pref_mean_exact(1000, p)) - last_pref_mean_asymptotic(1000, p))
            assert gap <= 0.05


@pytest.mark.criterion(6, "Theta(1/n) bounds at p = 1/2")
def test_criterion_06_half_bounds():
    with budget(30):
        for n in (10, 50, 100, 200):
            tv = tv_distance(last_pref_distribution_half(n), RationalDist.uniform(n))
            assert tv == tv_distance(last_pref_distribution(n, F(1, 2)), RationalDist.uniform(n))
            lower, upper = tv_half_bounds(n)
            assert tv <= F(1, n + 1)
            assert tv >= F(n ** (n - 2), 4 * (n + 1) ** (n - 1)) - F(1, n * (n + 1))
            assert (lower, upper) == (F(n ** (n - 2), 4 * (n + 1) ** (n - 1)) - F(1, n * (n + 1)), F(1, n + 1))


@pytest.mark.criterion(7, "sandwich bounds and 1/sqrt(n) regime for p != 1/2")
def test_criterion_07_sandwich():
    scaled = []
    for n in (10, 50, 100, 200):
        for p in (F(1, 4), F(3, 4)):
            rep = tv_bounds_check(n, p)
            assert abs(2 * p - 1) * rep.tv_classical <= rep.tv <= rep.tv_classical
            assert rep.tv_classical == rep.tv_reversed
        tv = tv_bounds_check(n, F(3, 4)).tv
        assert 0.05 <= math.sqrt(n) * float(tv) <= 1.0
        scaled.append(n * tv)
        # the asymptotic constant only as an order-of-magnitude envelope
        envelope = math.sqrt(2 * math.pi) / 8 * 0.5 / math.sqrt(n)
        assert 0.1 <= float(tv) / envelope <= 10
    assert all(a < b for a, b in zip(scaled, scaled[1:]))


def _A(n, x, y, p, q):
    return abel_sum(n, AbelParams(x, y, p, q))


@pytest.mark.criterion(8, "Abel identities and recurrences")
def test_criterion_08_abel():
    with budget(5):
        for n in range(0, 13):
            for kind in ("-1,-1", "-1,0", "-1,1", "0,0"):
                pe, qe = map(int, kind.split(","))
                assert _A(n, 1, 1, pe, qe) == abel_closed_form(kind, n, 1, 1)
        rng = random.Random(20241016)
        for _ in range(20):
            x = F(rng.randint(1, 12), rng.randint(1, 6))
            y = F(rng.randint(1, 12), rng.randint(1, 6))
            for n in range(1, 9):
                for p, q in ((-1, -1), (-1, 0), (0, 0)):
                    lhs = _A(n, x, y, p, q)
                    assert lhs == _A(n, y, x, q, p)
                    assert lhs == _A(n - 1, x, y + 1, p, q + 1) + _A(n - 1, x + 1, y, p + 1, q)
                    assert lhs == sum(
                        comb(n, s) * factorial(s) * (x + s) * _A(n - s, x + s, y, p - 1, q) for s in range(n + 1)
                    )


@pytest.mark.criterion(9, "unlucky counts, generating polynomial and A220884")
def test_criterion_09_unlucky():
    with budget(60):
        assert [list(r) for r in a220884_rows(5).rows] == GOLDEN_A220884
        for n in range(1, 11):
            assert list(q_generating_polynomial(n)) == unlucky_expected_circular(n)
        for n in range(1, 6):
            brute = unlucky_distribution_bruteforce(n, n)
            assert all(v.is_constant for v in brute.values())
            assert [brute[k].constant_term for k in range(n)] == unlucky_expected_circular(n)


@pytest.mark.criterion(10, "weighted Pascal triangle")
def test_criterion_10_pascal():
    with budget(60):
        t = weighted_pascal(4)
        assert [list(r) for r in t.rows] == GOLDEN_PASCAL4 and t[3][1] == 11
        for n in range(1, 9):
            assert list(weighted_pascal(n)[n][:n]) == unlucky_expected_circular(n)
        for n in range(1, 6):
            t = weighted_pascal(n)
            for i in range(1, n + 1):
                brute = unlucky_distribution_bruteforce(n, i)
                assert [brute[k] for k in range(i + 1)] == [Poly.const(v) for v in t[i]]


@pytest.mark.criterion(11, "classical lucky-car generating function")
def test_criterion_11_classical():
    with budget(30):
        for n in range(1, 7):
            g = classical_lucky_generating(n)
            assert g == classical_lucky_enumerated(n)
            assert poly_eval(g, 1) == (n + 1) ** (n - 1)


@pytest.mark.criterion(12, "Monte Carlo at n=100, 100000 samples per p")
def test_criterion_12_monte_carlo():
    target = 101**99 / 100**100
    problems = []
    t0 = time.perf_counter()
    for k, p in enumerate(GRID):
        cmp = histogram_vs_exact(SimConfig(100, float(p), 100_000, seed=1000 + k))
        rep = cmp.report
        if abs(rep.success_rate - target) > 4 * rep.success_rate_se:
            problems.append(f"p={p}: success rate {rep.success_rate:.5f} vs {target:.5f}")
        exact_mean = float(last_pref_mean_exact(100, p))
        if abs(rep.conditional_mean - exact_mean) > 4 * rep.standard_error:
            problems.append(f"p={p}: mean {rep.conditional_mean:.3f} vs {exact_mean:.3f}")
        if not cmp.tv_gap < 0.05:
            problems.append(f"p={p}: histogram gap {cmp.tv_gap:.4f} over {rep.successes} parked runs")
    elapsed = time.perf_counter() - t0
    if elapsed >= 120:
        problems.append(f"took {elapsed:.1f} s")
    assert not problems, "; ".join(problems)


@pytest.mark.criterion(13, "simulate output independent of thread count")
def test_criterion_13_determinism():
    env = dict(os.environ, NUMBA_NUM_THREADS="4")

    def simulate(threads):
        cmd = [sys.executable, "-m", "parkstat", "simulate", "--n", "100", "--p", "0.5",
               "--samples", "100000", "--seed", "7", "--threads", str(threads)]
        return subprocess.run(cmd, env=env, capture_output=True, check=True).stdout

    first = simulate(1)
    assert first.startswith(b"n,m,p,seed,trials")
    assert simulate(1) == first
    assert simulate(2) == first
    assert simulate(4) == first
