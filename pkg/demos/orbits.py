"""
Iterating the map of a periodic quiver
======================================

Each m-periodic quiver gives a birational map: mutate at nodes 1..m, then
rotate the cluster. Orbits can be computed exactly, in big floats, or in
machine floats.
"""

from fractions import Fraction

from quiverdyn.catalog import FamilySpec, family_map
from quiverdyn.dynamics import iterate_orbit

phi = family_map(FamilySpec("A", (1, 5, 3, 2)))

# exact rationals: numbers grow very fast, so a digit budget stops the run
orbit = iterate_orbit(phi, (1, 1, 1, 1), steps=6, budget_digits=200)
print(orbit.to_csv())

# the same orbit in 256-bit floats keeps going
big = iterate_orbit(phi, (1, 1, 1, 1), steps=6, mode="bigfloat", precision=256)
print(big.to_csv(digits=12))

# a slower-growing example: three nodes with unit weights, from a rational start
d3 = family_map(FamilySpec("D3", (1, 1, 1)))
print(iterate_orbit(d3, (Fraction(1, 2), 2, 3), steps=4).to_csv())
