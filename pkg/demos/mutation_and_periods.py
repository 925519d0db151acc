"""
Mutating quivers and finding their period
=========================================

A quiver is stored as a skew-symmetric integer matrix. Mutation at a node
flips the arrows through that node and adds composite arrows.
"""

from quiverdyn.catalog import FamilySpec, make_family
from quiverdyn.quiver import find_period, mutate_matrix, mutate_sequence, sigma_conjugate

# the four-node family with weights (r, s, t, p) = (1, 5, 3, 2)
B = make_family(FamilySpec("A", (1, 5, 3, 2)))
print(B)

# mutating twice at the same node gives the quiver back
assert mutate_matrix(mutate_matrix(B, 1), 1) == B

# after mutating at nodes 1 and 2 the quiver equals a relabelled copy of itself
after = mutate_sequence(B, [1, 2])
print(after)
print("matches the rotation by 2:", after == sigma_conjugate(B, 2))

# find_period searches m = 1..n for the first m with this property
for family, params in [("A", (1, 5, 3, 2)), ("A", (2, 3, 2, 3)), ("B6", (1, 2, 3, 1)), ("C5", (1, 2)), ("D3", (1, 2, 3))]:
    report = find_period(make_family(FamilySpec(family, params)))
    print(f"{family}{params}: period {report.period}")
