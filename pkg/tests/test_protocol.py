from itertools import product

import pytest
from hypothesis import given, strategies as st

from parkstat.errors import CoinsExhausted
from parkstat.protocol import (
    EXITED,
    HEADS,
    TAILS,
    Coin,
    PreferenceVector,
    classical_is_pf,
    park_deterministic,
)


def test_heads_branch_of_122():
    r = park_deterministic(PreferenceVector.linear((1, 2, 2)), [HEADS])
    assert r.assignment == (1, 2, 3)
    assert r.success and r.unlucky == {3}


def test_permutation_needs_no_coins():
    r = park_deterministic(PreferenceVector.linear((1, 2, 3)), ())
    assert r.success and r.unlucky == frozenset() and r.flips_used == 0


def test_221_tails_then_heads():
    r = park_deterministic(PreferenceVector.linear((2, 2, 1)), [TAILS, HEADS])
    assert r.assignment == (2, 1, 3)
    assert r.success and r.flips_used == 2


def test_222_heads_heads_exits():
    r = park_deterministic(PreferenceVector.linear((2, 2, 2)), "HH")
    assert r.assignment == (2, 3, EXITED)
    assert not r.success
    assert r.vacant == {1}


def test_221_tails_tails_exits_backward():
    r = park_deterministic(PreferenceVector.linear((2, 2, 1)), "TT")
    assert r.assignment == (2, 1, EXITED)


def test_coins_exhausted():
    with pytest.raises(CoinsExhausted):
        park_deterministic(PreferenceVector.linear((1, 1)), ())


def test_unused_coins_ignored():
    assert park_deterministic(PreferenceVector.linear((1, 2)), "HTH").flips_used == 0


def test_circular_wraps_clockwise():
    r = park_deterministic(PreferenceVector.circular((3, 3)), [HEADS])
    assert r.assignment == (3, 1)
    r = park_deterministic(PreferenceVector.circular((1, 1)), [TAILS])
    assert r.assignment == (1, 3)


@pytest.mark.parametrize("n", range(1, 7))
def test_all_ones_parks_and_all_n_does_not(n):
    assert classical_is_pf((1,) * n)
    assert classical_is_pf((n,) * n) == (n == 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_permutations_are_parking_functions(n):
    from itertools import permutations

    assert all(classical_is_pf(a) for a in permutations(range(1, n + 1)))


@pytest.mark.parametrize("n", range(1, 7))
def test_pigeonhole_matches_forward_only_parking(n):
    heads = [HEADS] * n
    for a in product(range(1, n + 1), repeat=n):
        assert classical_is_pf(a) == park_deterministic(PreferenceVector.linear(a), heads).success


def test_validation():
    with pytest.raises(ValueError):
        PreferenceVector.linear((0, 1))
    with pytest.raises(ValueError):
        PreferenceVector.linear((1, 1, 1), n=2)
    with pytest.raises(ValueError):
        PreferenceVector.circular((5, 1))


@st.composite
def runs(draw, circular=False):
    n = draw(st.integers(1, 7))
    m = draw(st.integers(1, n))
    spots = n + 1 if circular else n
    prefs = draw(st.lists(st.integers(1, spots), min_size=m, max_size=m))
    coins = draw(st.lists(st.sampled_from([HEADS, TAILS]), min_size=m, max_size=m))
    alpha = PreferenceVector.circular(prefs, spots) if circular else PreferenceVector.linear(prefs, n)
    return alpha, coins


def _check_no_jump(alpha, coins, res):
    spots, circ = alpha.street.spots, alpha.street.circular
    taken = set()
    it = iter(coins)
    for car, (a, s) in enumerate(zip(alpha.prefs, res.assignment), start=1):
        if car in res.unlucky:
            step = 1 if next(it) is HEADS else -1
            x = a + step
            while True:
                if circ:
                    x = (x - 1) % spots + 1
                if s is not None and x == s:
                    break
                if not 1 <= x <= spots:
                    assert s is None
                    break
                assert x in taken  # everything passed over was occupied
                x += step
        if s is not None:
            taken.add(s)


@given(st.one_of(runs(), runs(circular=True)))
def test_result_invariants(run):
    alpha, coins = run
    res = park_deterministic(alpha, coins)
    assert res == park_deterministic(alpha, coins)
    parked = [s for s in res.assignment if s is not None]
    assert len(parked) == len(set(parked))
    assert res.success == (EXITED not in res.assignment)
    assert 1 not in res.unlucky
    assert res.flips_used == len(res.unlucky)
    assert res.occupied | res.vacant == set(range(1, alpha.street.spots + 1))
    if alpha.street.circular:
        assert res.success
    _check_no_jump(alpha, coins, res)


@given(runs())
def test_reflection_symmetry(run):
    alpha, coins = run
    res = park_deterministic(alpha, coins)
    mirror = park_deterministic(alpha.mirrored(), [c.flipped() for c in coins])
    n = alpha.street.spots
    assert mirror.assignment == tuple(None if s is None else n + 1 - s for s in res.assignment)
    assert mirror.unlucky == res.unlucky


def test_coin_parse():
    assert Coin.parse("h") is HEADS and Coin.parse(False) is TAILS
    with pytest.raises(ValueError):
        Coin.parse("x")
