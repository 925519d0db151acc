import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverdyn.catalog import FamilySpec, make_family
from quiverdyn.errors import NonLaurentResult
from quiverdyn.laurent import LaurentPoly, SymbolicSeed, laurent_check, mutate_seed
from quiverdyn.quiver import QuiverMatrix

X = [LaurentPoly.variable(i, 3) for i in (1, 2, 3)]
ONE = LaurentPoly.constant(1, 3)


def test_arithmetic_and_evaluation():
    x1, x2, x3 = X
    p = (x1 + x2) * (x1 - x2)
    assert p == x1 ** 2 - x2 ** 2
    q = x1 ** -2 * x3
    assert q.is_monomial()
    assert q.evaluate((2, 5, 3)) == F(3, 4)
    assert (-x1) ** -3 == LaurentPoly.monomial((-3, 0, 0), -1)
    assert p.min_exponents() == (0, 0, 0)


def test_negative_power_of_polynomial_rejected():
    with pytest.raises((NonLaurentResult, ValueError)):
        (X[0] + X[1]) ** -1


def test_exact_division():
    x1, x2, x3 = X
    num = (x2 * x3 + ONE) * (x1 + x3 ** 2)
    assert num / (x1 + x3 ** 2) == x2 * x3 + ONE
    assert (x2 + ONE) / x1 == (x2 + ONE) * x1 ** -1


def test_division_with_remainder_raises():
    x1, x2, _ = X
    with pytest.raises(NonLaurentResult):
        (x1 ** 2 + ONE) / (x1 + x2)


poly_terms = st.dictionaries(
    st.tuples(*[st.integers(-2, 2)] * 3), st.integers(-5, 5).filter(bool), min_size=1, max_size=4
)


@settings(max_examples=80, deadline=None)
@given(poly_terms, poly_terms)
def test_product_divides_back(a, b):
    p, q = LaurentPoly(3, a), LaurentPoly(3, b)
    assert (p * q) / q == p
    pt = (F(2), F(3, 5), F(7, 4))
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)


def test_family_a_first_mutation():
    r, s, t, p = 2, 1, 3, 4
    seed = mutate_seed(SymbolicSeed.initial(make_family(FamilySpec("A", (r, s, t, p)))), 1)
    x1, x2, x3, x4 = (LaurentPoly.variable(i, 4) for i in (1, 2, 3, 4))
    expected = (x2 ** r * x3 ** s * x4 ** t + LaurentPoly.constant(1, 4)) * x1 ** -1
    assert seed.cluster[0] == expected


def test_d3_first_mutation_has_two_terms():
    seed = mutate_seed(SymbolicSeed.initial(make_family(FamilySpec("D3", (1, 1, 1)))), 1)
    x1, x2, x3 = X
    assert seed.cluster[0] == (x2 * x3 + ONE) * x1 ** -1
    assert len(seed.cluster[0]) == 2


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_mutate_seed_twice_restores(k):
    seed = SymbolicSeed.initial(make_family(FamilySpec("A", (1, 2, 1, 1))))
    assert mutate_seed(mutate_seed(seed, k), k) == seed


def test_symbolic_agrees_with_numeric_exchange():
    B = make_family(FamilySpec("D3", (1, 2, 1)))
    seed = SymbolicSeed.initial(B)
    pt = (F(2), F(3), F(5, 7))
    vals = list(pt)
    for k in (1, 2, 3, 1):
        row = seed.matrix.row(k)
        pos = neg = F(1)
        for b, v in zip(row, vals):
            if b > 0:
                pos *= v ** b
            elif b < 0:
                neg *= v ** -b
        vals[k - 1] = (pos + neg) / vals[k - 1]
        seed = mutate_seed(seed, k)
        assert seed.evaluate(pt) == tuple(vals)


def test_depth_one_is_laurent():
    rep = laurent_check(QuiverMatrix([[0, 2], [-2, 0]]), [1, 2], 1)
    assert rep.ok and len(rep.steps) == 2


def test_laurent_d3_depth_four():
    rep = laurent_check(make_family(FamilySpec("D3", (1, 1, 1))), [1, 2, 3], 4)
    assert rep.status == "laurent"
    assert [s.node for s in rep.steps] == [1, 2, 3] * 4


def test_budget_stops_run():
    rep = laurent_check(make_family(FamilySpec("D3", (1, 1, 1))), [1, 2, 3], 4, term_budget=5)
    assert rep.status == "budget"
    assert not rep
    assert json.loads(rep.to_json())["status"] == "budget"


def test_bad_depth():
    with pytest.raises(ValueError):
        laurent_check(QuiverMatrix([[0, 1], [-1, 0]]), [1], 0)


def test_shifted_passes_follow_the_iteration():
    B = make_family(FamilySpec("A", (1, 2, 1, 1)))
    rep = laurent_check(B, [1, 2], 3, shift=2)
    assert rep.ok
    assert [s.node for s in rep.steps] == [1, 2, 3, 4, 1, 2]
    assert [s.terms for s in rep.steps][:4] == [2, 3, 8, 21]
