import random
from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverdyn.exact import (
    Jet,
    RationalMatrix,
    eval_with_jacobian,
    jet_exp,
    jet_log,
    primitive,
    random_positive_rationals,
    rank_kernel,
    rpow,
    rref,
    solve_linear,
)


def test_matrix_basics():
    A = RationalMatrix.from_rows([[1, 2], [3, 4]])
    assert A[1, 0] == 3
    assert A.T.tolist() == [[1, 3], [2, 4]]
    assert (A @ RationalMatrix.identity(2)) == A
    assert A @ [1, 1] == (3, 7)
    assert A.det() == -2
    assert (A - A).is_zero()
    assert RationalMatrix.from_rows([[0, 1], [-1, 0]]).is_skew()
    assert not A.is_skew()
    assert A.scale(F(1, 2))[0, 1] == 1


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        RationalMatrix.from_rows([[1, 2], [3]])


@pytest.mark.parametrize(
    "rows, rank, basis",
    [
        ([[0, 1, -2, 3], [-1, 0, 3, -5], [2, -3, 0, 1], [-3, 5, -1, 0]], 2, [(3, 2, 1, 0), (-5, -3, 0, 1)]),
        ([[0, 0, 0]] * 3, 0, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
        ([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], 2, [(0, 0, 1)]),
        ([[2, 4]], 1, [(-2, 1)]),
    ],
)
def test_rank_kernel_examples(rows, rank, basis):
    assert rank_kernel(RationalMatrix.from_rows(rows)) == (rank, basis)


def test_rank_kernel_empty():
    assert rank_kernel(RationalMatrix.zeros(0, 0)) == (0, [])


def test_primitive():
    assert primitive([F(1, 2), F(-3, 4)]) == (2, -3)
    assert primitive([0, -6, 9]) == (0, -2, 3)
    assert primitive([0, 0]) == (0, 0)


@pytest.mark.parametrize(
    "A, b, x",
    [
        ([[1, 0], [0, 1]], [F(3, 7), -2], (F(3, 7), -2)),
        ([[1, 1]], [2], (2, 0)),
        ([[0, 1, 1], [-1, 0, 1]], [0, 0], (0, 0, 0)),
    ],
)
def test_solve_linear(A, b, x):
    assert solve_linear(RationalMatrix.from_rows(A), b) == x


def test_solve_linear_inconsistent():
    assert solve_linear(RationalMatrix.from_rows([[1, 1], [1, 1]]), [1, 2]) is None


def test_rref_pivot_rule():
    rows, pivots = rref(RationalMatrix.from_rows([[0, 2, 4], [1, 1, 1]]))
    assert pivots == [0, 1]
    assert rows == [[1, 0, -1], [0, 1, 2]]


small_int = st.integers(-4, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_nullity_and_kernel(rows, cols, data):
    M = RationalMatrix.from_rows(
        [[data.draw(small_int) for _ in range(cols)] for _ in range(rows)]
    )
    rank, basis = rank_kernel(M)
    assert rank + len(basis) == cols
    assert rank == sympy.Matrix(M.tolist()).rank()
    for v in basis:
        assert all(e == 0 for e in M @ list(v))
        nz = [e for e in v if e]
        assert nz[-1] > 0


def test_identity_jacobian():
    x = (F(2), F(5, 3), F(7, 11))
    vals, J = eval_with_jacobian(lambda v: list(v), x)
    assert vals == x
    assert J == RationalMatrix.identity(3)


def test_hand_jacobian():
    vals, J = eval_with_jacobian(lambda v: (v[0] * v[1], v[0] / v[1]), (2, 3))
    assert vals == (6, F(2, 3))
    assert J.tolist() == [[3, 2], [F(1, 3), F(-2, 9)]]


def test_jacobian_matches_sympy():
    a, b, c = sympy.symbols("a b c", positive=True)
    exprs = [(a ** 2 * b + 1) / c, b ** -3 * c + a, (a + b + c) / (a * b)]

    def f(v):
        x, y, z = v
        return ((x ** 2 * y + 1) / z, y ** -3 * z + x, (x + y + z) / (x * y))

    pt = (F(3, 2), F(2, 5), F(7))
    vals, J = eval_with_jacobian(f, pt)
    subs = dict(zip((a, b, c), (sympy.Rational(3, 2), sympy.Rational(2, 5), 7)))
    for i, e in enumerate(exprs):
        assert vals[i] == F(str(e.subs(subs)))
        for j, s in enumerate((a, b, c)):
            assert J[i, j] == F(str(sympy.diff(e, s).subs(subs)))


def test_first_order_taylor_residual():
    # (f(x + h e) - f(x)) / h - J e must be O(h) for exact rational h
    def f(v):
        return (v[0] ** 3 / v[1] + v[1],)

    x = (F(2), F(3))
    _, J = eval_with_jacobian(f, x)
    for h in (F(1, 10 ** 3), F(1, 10 ** 6)):
        diff = (f((x[0] + h, x[1]))[0] - f(x)[0]) / h - J[0, 0]
        assert abs(diff) < 20 * h


def test_real_powers_need_bigfloat():
    with mpmath.workprec(128):
        j = Jet.variable(mpmath.mpf(4), 0, 1, zero=mpmath.mpf(0), one=mpmath.mpf(1))
        r = j ** F(1, 2)
        assert abs(r.value - 2) < mpmath.mpf(2) ** -120
        assert abs(r.partials[0] - mpmath.mpf(1) / 4) < mpmath.mpf(2) ** -120
        e = jet_log(jet_exp(j))
        assert abs(e.value - 4) < mpmath.mpf(2) ** -120


def test_rpow_exact_for_integers():
    assert rpow(F(2, 3), F(-2)) == F(9, 4)
    assert isinstance(rpow(F(2), F(1, 2)), mpmath.mpf)


def test_jet_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        eval_with_jacobian(lambda v: (1 / (v[0] - 1),), (1,))


def test_random_points_seeded():
    a = random_positive_rationals(random.Random(3), 5)
    b = random_positive_rationals(random.Random(3), 5)
    assert a == b and all(v > 0 for v in a)
