"""
The Laurent phenomenon, checked symbolically
============================================

Cluster variables are computed as Laurent polynomials in the initial
variables. Every exchange relation needs an exact division; a remainder
would be reported as a failure.
"""

from quiverdyn.catalog import FamilySpec, make_family
from quiverdyn.laurent import SymbolicSeed, laurent_check, mutate_seed

B = make_family(FamilySpec("D3", (1, 1, 1)))
seed = mutate_seed(SymbolicSeed.initial(B), 1)
print("new variable at node 1:", seed.cluster[0])

report = laurent_check(B, [1, 2, 3], depth=4)
print(report.status)
for step in report.steps:
    print(f"  step {step.step:2d}  node {step.node}  {step.terms:5d} terms")

# shift=2 moves the sequence (1, 2) forward by the period on every pass,
# which follows the iteration of the 2-periodic quiver
A = make_family(FamilySpec("A", (1, 2, 1, 1)))
print(laurent_check(A, [1, 2], depth=3, shift=2).to_json())
