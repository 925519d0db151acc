import random
import warnings
from fractions import Fraction as F

import pytest

from quiverdyn.catalog import FamilySpec, family_map, make_family, known_bracket, known_casimirs
from quiverdyn.errors import FiberMismatch, InvarianceViolation, NonUnimodularLift
from quiverdyn.exact import RationalMatrix, random_positive_rationals
from quiverdyn.poisson import (
    CasimirLift,
    LogCanonicalBracket,
    casimir_basis,
    find_invariant_structures,
    poisson_map_check,
    poisson_reduce,
)

A_PARAMS = (1, 5, 3, 2)
C_III = [[0, 1, -2, 3], [-1, 0, 3, -5], [2, -3, 0, 1], [-3, 5, -1, 0]]


def points(n, count=5, seed=1):
    rng = random.Random(seed)
    return [random_positive_rationals(rng, n) for _ in range(count)]


def test_bracket_values():
    br = LogCanonicalBracket(C_III)
    x = (F(2), F(3), F(5), F(7))
    assert br.bracket(1, 2, x) == 6
    assert br.bracket(2, 1, x) == -6
    assert br.monomial_bracket(1, (3, 2, 1, 0), x) == 0


def test_non_skew_bracket_rejected():
    with pytest.raises(ValueError):
        LogCanonicalBracket([[0, 1], [1, 0]])


def test_known_bracket_instance():
    assert known_bracket("iii", A_PARAMS).tolist() == C_III


def test_family_a_is_poisson():
    phi = family_map(FamilySpec("A", A_PARAMS))
    assert poisson_map_check(C_III, phi, points(4)).ok


def test_zero_bracket_always_preserved():
    phi = family_map(FamilySpec("C5", (1, 2)))
    assert poisson_map_check(RationalMatrix.zeros(5, 5), phi, points(5)).ok


def test_quiver_matrix_is_not_invariant_for_five_nodes():
    spec = FamilySpec("C5", (1, 2))
    rep = poisson_map_check(make_family(spec).tolist(), family_map(spec), points(5))
    assert not rep.ok
    assert rep.witness == points(5)[0]


def test_solver_finds_known_bracket():
    sol = find_invariant_structures(family_map(FamilySpec("A", A_PARAMS)), 4, seed=3)
    assert sol.dimension >= 1
    assert sol.contains(C_III)
    assert not sol.contains([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])


def test_solver_is_deterministic():
    phi = family_map(FamilySpec("A", (2, 1, 1, 3)))
    a = find_invariant_structures(phi, 4, seed=9)
    b = find_invariant_structures(phi, 4, seed=9)
    assert a.basis == b.basis
    assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize("params", [(1, 2), (2, 3)])
def test_solver_five_nodes_only_zero(params):
    sol = find_invariant_structures(family_map(FamilySpec("C5", params)), 5, seed=7)
    assert sol.dimension == 0
    assert sol.contains(RationalMatrix.zeros(5, 5))


def test_identity_preserves_every_bracket():
    sol = find_invariant_structures(lambda x: tuple(x), 4, seed=0)
    assert sol.dimension == 6


def test_casimirs_example_iii():
    assert list(casimir_basis(C_III).exponent_vectors) == [(3, 2, 1, 0), (-5, -3, 0, 1)]


def test_nondegenerate_bracket_has_no_casimirs():
    assert len(casimir_basis([[0, 1], [-1, 0]])) == 0


def test_casimirs_commute_with_everything():
    C = known_bracket("iv")
    br = LogCanonicalBracket(C)
    x = points(6, 1)[0]
    for k in casimir_basis(C).exponent_vectors:
        assert all(br.monomial_bracket(i, k, x) == 0 for i in range(1, 7))


def test_reduce_example_iii_spot_value():
    phi = family_map(FamilySpec("A", A_PARAMS))
    assert poisson_reduce(C_III, phi, (1, 1), casimirs=known_casimirs("iii")) == (3, 2)


def test_reduce_with_default_casimirs_is_exact():
    phi = family_map(FamilySpec("A", A_PARAMS))
    out = poisson_reduce(C_III, phi, (F(2), F(1, 3)))
    assert all(isinstance(v, F) for v in out)


def test_reduce_rejects_non_invariant_bracket():
    phi = family_map(FamilySpec("A", A_PARAMS))
    degenerate = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    with pytest.raises((InvarianceViolation, FiberMismatch)):
        poisson_reduce(degenerate, phi, (F(2), F(3)))


def test_reduce_rejects_non_kernel_vector():
    phi = family_map(FamilySpec("A", A_PARAMS))
    with pytest.raises(ValueError):
        poisson_reduce(C_III, phi, (1, 1), casimirs=[(1, 0, 0, 0), (0, 1, 0, 0)])


def test_lift_is_a_section():
    lift = CasimirLift.build(known_casimirs("iv"))
    assert lift.exact
    y = (F(2), F(3, 5), F(7), F(1, 4))
    assert lift.project(lift.lift(y)) == y
    assert lift.project(lift.lift(y, shift=2)) == y


def test_non_unimodular_lift_warns():
    C = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = poisson_reduce(C, lambda x: tuple(x), (F(4),), casimirs=[(2, 2, 0)], check=False)
    assert any(issubclass(w.category, NonUnimodularLift) for w in caught)
    assert abs(out[0] - 4) < 1e-60
