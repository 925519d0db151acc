"""
Reduction with an invariant Poisson bracket
===========================================

A log-canonical bracket {x_i, x_j} = c_ij x_i x_j that the map preserves
has monomial Casimirs x^k for k in ker C. The map acts on Casimir values,
which gives a reduced map that is exact over the rationals.
"""

import random

from quiverdyn.catalog import FamilySpec, family_map, known_bracket, known_casimirs
from quiverdyn.exact import random_positive_rationals
from quiverdyn.poisson import casimir_basis, find_invariant_structures, poisson_map_check, poisson_reduce

spec = FamilySpec("A", (1, 5, 3, 2))
phi = family_map(spec)
C = known_bracket("iii", spec.params)

rng = random.Random(1)
print("Poisson map:", poisson_map_check(C, phi, [random_positive_rationals(rng, 4) for _ in range(5)]).ok)
print("Casimir exponents:", casimir_basis(C).exponent_vectors)

# iterate the reduced map on the Casimir values
y = (1, 1)
for _ in range(3):
    y = poisson_reduce(C, phi, y, casimirs=known_casimirs("iii"))
    print(y)

# the bracket can also be found from scratch by exact linear algebra
solution = find_invariant_structures(phi, 4, seed=0)
print("dimension:", solution.dimension, "contains C:", solution.contains(C))

# the five-node map admits no such bracket
print(find_invariant_structures(family_map(FamilySpec("C5", (1, 2))), 5, seed=0).dimension)
