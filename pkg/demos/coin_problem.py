"""
The coin problem on a three-spot street
=======================================

Every car that finds its spot taken flips a coin: heads sends it forward,
tails sends it back.  Here we list the parking probability of every
preference vector in [3]^3 and watch the total stay at 16 for any p.
"""

from fractions import Fraction
from itertools import product

from parkstat import Poly, PreferenceVector, park_probability

# one polynomial in p per vector
polys = {a: park_probability(PreferenceVector.linear(a)) for a in product(range(1, 4), repeat=3)}
for alpha, poly in polys.items():
    print("".join(map(str, alpha)), poly)

# (1,2,2) and (2,2,1) hold the same multiset yet park with different odds
print("\n122 ->", polys[1, 2, 2], "   221 ->", polys[2, 2, 1])

# summed over all 27 vectors the dependence on p cancels
total = sum(polys.values(), Poly())
print("\ntotal:", total)
for p in (Fraction(0), Fraction(1, 3), Fraction(1)):
    print(f"  at p = {p}: {total(p)}")
