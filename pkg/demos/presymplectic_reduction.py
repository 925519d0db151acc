"""
Reduction through the log presymplectic form
============================================

The quiver matrix B defines a closed 2-form in log coordinates that the
iteration map preserves. When B is singular, splitting it into Darboux
pairs gives monomial coordinates on which the map descends.
"""

import random

import mpmath

from quiverdyn.catalog import FamilySpec, family_map, make_family, reference_reduced_map
from quiverdyn.exact import random_positive_rationals
from quiverdyn.presymplectic import (
    cartan_reduce,
    check_symplectic_reduced,
    make_reduced_map,
    pullback_check,
    reduced_map_eval,
)

spec = FamilySpec("D3", (2, 1, 3))
B = make_family(spec)
phi = family_map(spec, monomial=True)

# exact check that the map pulls the form back to itself
rng = random.Random(0)
pts = [random_positive_rationals(rng, 3) for _ in range(10)]
print("form preserved:", pullback_check(phi, B, pts).ok)

# two monomial coordinates y1, y2 carry the whole form
chart = cartan_reduce(B)
print(chart.exponents)

# evaluate the reduced map and compare with its closed form
handle = make_reduced_map(phi, chart=chart)
y = (3, 5)
with mpmath.workprec(256):
    via_chart = reduced_map_eval(handle, y)
    closed_form = reference_reduced_map("i", spec.params)(y)
    for a, b in zip(via_chart, closed_form):
        print(mpmath.nstr(a, 30), mpmath.nstr(b, 30))

# the five-node example reduces to a symplectic map in four variables
ref = reference_reduced_map("ii", (1, 2))
print(check_symplectic_reduced(ref, [random_positive_rationals(rng, 4) for _ in range(5)]).ok)
