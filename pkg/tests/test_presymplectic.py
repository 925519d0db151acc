import random
from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverdyn.catalog import FamilySpec, family_map, make_family, known_chart, reference_reduced_map
from quiverdyn.errors import FiberMismatch, NotReducible, RankZero
from quiverdyn.exact import RationalMatrix, random_positive_rationals
from quiverdyn.presymplectic import (
    MonomialChart,
    canonical_form,
    cartan_reduce,
    check_symplectic_reduced,
    log_jacobian,
    make_reduced_map,
    pullback_check,
    reduced_map_eval,
)
from quiverdyn.quiver import QuiverMatrix, sigma_conjugate


def points(n, count=5, seed=0):
    rng = random.Random(seed)
    return [random_positive_rationals(rng, n) for _ in range(count)]


def test_log_jacobian_against_sympy():
    spec = FamilySpec("D3", (2, 1, 3))
    phi = family_map(spec)
    xs = sympy.symbols("x1:4", positive=True)
    img = phi(list(xs))
    pt = (F(3, 2), F(2), F(5, 7))
    L = log_jacobian(phi, pt)
    subs = {s: sympy.Rational(v.numerator, v.denominator) for s, v in zip(xs, pt)}
    for a in range(3):
        for b in range(3):
            expected = (xs[b] / img[a] * sympy.diff(img[a], xs[b])).subs(subs)
            assert L[a, b] == F(str(sympy.nsimplify(expected)))


@pytest.mark.parametrize(
    "family, params, monomial",
    [("A", (1, 5, 3, 2), False), ("B6", (1, 2, 3, 1), False), ("C5", (2, 1), False), ("D3", (1, 2, 3), True)],
)
def test_pullback_holds(family, params, monomial):
    spec = FamilySpec(family, params)
    B = make_family(spec)
    assert pullback_check(family_map(spec, monomial), B, points(B.n)).ok


def test_permutation_map_preserves_invariant_form():
    B = QuiverMatrix([[0, 1, 0, -2], [-1, 0, 2, 0], [0, -2, 0, 1], [2, 0, -1, 0]])
    assert sigma_conjugate(B, 2) == B
    shift_two = lambda x: (x[2], x[3], x[0], x[1])
    assert pullback_check(shift_two, B, points(4)).ok


def test_pullback_negative_control_gives_witness():
    spec = FamilySpec("A", (1, 5, 3, 2))
    B = make_family(spec).tolist()
    B[0][1] += 1
    B[1][0] -= 1
    rep = pullback_check(family_map(spec), RationalMatrix.from_rows(B), points(4))
    assert not rep.ok
    assert rep.witness == points(4)[0]


def test_chart_for_three_nodes():
    r, s, t = 3, 2, 5
    chart = cartan_reduce(make_family(FamilySpec("D3", (r, s, t))))
    assert chart.exponents.tolist() == [[0, 1, F(s, r)], [-r, 0, t]]


@pytest.mark.parametrize("s", [2, 3, 4])
def test_chart_for_five_nodes_matches_reference(s):
    chart = cartan_reduce(make_family(FamilySpec("C5", (1, s))))
    assert chart.exponents == known_chart("ii", (1, s))


def test_two_by_two_chart():
    B = [[0, 1], [-1, 0]]
    assert cartan_reduce(B, merge_elementary=False).exponents.tolist() == [[0, 1], [-1, 0]]
    merged = cartan_reduce(B)
    assert merged.exponents.tolist() == [[1, 0], [0, 1]]
    assert merged.reconstruct().tolist() == B


def test_zero_form_has_no_chart():
    with pytest.raises(RankZero):
        cartan_reduce([[0, 0], [0, 0]])


@st.composite
def low_rank_skew(draw):
    # sum of k < n/2 random wedges, so the rank is at most 2k < n
    n = draw(st.integers(3, 7))
    k = draw(st.integers(1, (n - 1) // 2))
    vec = st.lists(st.integers(-3, 3), min_size=n, max_size=n)
    M = [[0] * n for _ in range(n)]
    for _ in range(k):
        u, w = draw(vec), draw(vec)
        for i in range(n):
            for j in range(n):
                M[i][j] += u[i] * w[j] - w[i] * u[j]
    return M


@settings(max_examples=150, deadline=None)
@given(low_rank_skew(), st.booleans())
def test_chart_reconstructs_form(M, merge):
    B = RationalMatrix.from_rows(M)
    if B.is_zero():
        return
    chart = cartan_reduce(B, merge_elementary=merge)
    assert chart.reconstruct() == B
    assert 2 * chart.half_rank == sympy.Matrix(M).rank()


def test_reduced_map_fixed_point():
    spec = FamilySpec("D3", (1, 1, 1))
    handle = make_reduced_map(family_map(spec, monomial=True), make_family(spec))
    assert reduced_map_eval(handle, (1, 1)) == (1, 1)


def test_reduced_map_matches_closed_form_example_i():
    spec = FamilySpec("D3", (2, 1, 3))
    handle = make_reduced_map(family_map(spec, monomial=True), make_family(spec))
    ref = reference_reduced_map("i", spec.params)
    with mpmath.workprec(256):
        for y in points(2, 3):
            got = reduced_map_eval(handle, y)
            want = ref(y)
            for g, w in zip(got, want):
                assert abs(g - w) / abs(w) < mpmath.mpf(2) ** -200


def test_wrong_chart_trips_fibre_guard():
    spec = FamilySpec("D3", (1, 2, 3))
    bad = MonomialChart(RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0]]), 1)
    handle = make_reduced_map(family_map(spec, monomial=True), chart=bad)
    with pytest.raises(FiberMismatch) as err:
        reduced_map_eval(handle, (F(2), F(3)))
    assert err.value.witness == (2, 3)


def test_full_rank_is_not_reducible():
    spec = FamilySpec("A", (1, 2, 3, 4))
    with pytest.raises(NotReducible):
        make_reduced_map(family_map(spec), make_family(spec))


def test_canonical_form():
    assert canonical_form(4).tolist() == [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
    with pytest.raises(ValueError):
        canonical_form(3)


@pytest.mark.parametrize("method", ["jet", "fd"])
def test_reduced_symplecticity(method):
    ref = reference_reduced_map("ii", (1, 2))
    assert check_symplectic_reduced(ref, points(4, 3), method=method).ok
    assert check_symplectic_reduced(lambda y: list(y), points(2, 3), method=method).ok


def test_squaring_is_not_symplectic():
    rep = check_symplectic_reduced(lambda y: (y[0] ** 2, y[1]), points(2, 3))
    assert not rep.ok
    assert rep.witness == points(2, 3)[0]


def test_exact_symplectic_check_for_integer_exponents():
    ref = reference_reduced_map("i", (1, 2, 1))
    assert ref.integer_exponents
    rep = check_symplectic_reduced(ref, points(2, 3), exact=True)
    assert rep.ok and all(r == 0 for r in rep.residuals)
