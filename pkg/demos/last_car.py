"""
Where does the last car want to park?
=====================================

Given that everybody parks, the last car's preference is uniform only when
the coin is fair.  Away from p = 1/2 it tilts, and the tilt shrinks like
1/sqrt(n) rather than 1/n.
"""

import math
from fractions import Fraction

from parkstat import (
    RationalDist,
    last_pref_distribution,
    last_pref_mean_asymptotic,
    last_pref_mean_exact,
    tv_distance,
)

n = 8
for p in (Fraction(0), Fraction(1, 2), Fraction(1)):
    q = last_pref_distribution(n, p)
    print(f"p = {p}:", " ".join(f"{x:.4f}" for x in q.floats()))

# exact means against the large-n expansion
print("\n   n   p   exact mean   asymptotic")
for n in (10, 100, 1000):
    for p in (0, 1):
        exact = float(last_pref_mean_exact(n, p))
        print(f"{n:>4} {p:>3}   {exact:10.4f}   {last_pref_mean_asymptotic(n, p):10.4f}")

# distance to uniform: n*TV stays below 1 at p = 1/2, sqrt(n)*TV levels off at p = 3/4
print("\n   n    n*TV(1/2)   sqrt(n)*TV(3/4)")
for n in (25, 50, 100, 200):
    u = RationalDist.uniform(n)
    half = tv_distance(last_pref_distribution(n, Fraction(1, 2)), u)
    tilted = tv_distance(last_pref_distribution(n, Fraction(3, 4)), u)
    print(f"{n:>4}   {n * float(half):9.4f}   {math.sqrt(n) * float(tilted):9.4f}")
