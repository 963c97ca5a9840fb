"""
Unlucky cars on the circle
==========================

On a circle with n+1 spots every car parks.  Counting vectors by how many
cars found their spot taken gives numbers that do not depend on p, and they
are the coefficients of a simple product polynomial.
"""

from parkstat import (
    a220884_rows,
    q_generating_polynomial,
    unlucky_distribution_bruteforce,
    unlucky_expected_circular,
    weighted_pascal,
)

for n in range(1, 7):
    print(n, unlucky_expected_circular(n), q_generating_polynomial(n))

# brute force over every coin branch; each count comes out constant in p
brute = unlucky_distribution_bruteforce(4, 4)
print("\nenumerated, n = 4:", [str(brute[k]) for k in range(5)])

print("\nA220884")
print(a220884_rows(6).to_csv())

print("weighted Pascal triangle, n = 4")
for i, row in enumerate(weighted_pascal(4).rows):
    print(i, row)
