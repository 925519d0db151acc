"""Exact rational linear algebra and forward-mode jets.

Rationals are :class:`fractions.Fraction` throughout (always reduced, positive
denominator). Matrices are small and dense, so everything here is plain
Gaussian elimination over ``Fraction``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence

import mpmath

__all__ = [
    "RationalMatrix",
    "rref",
    "rank_kernel",
    "solve_linear",
    "primitive",
    "Jet",
    "rpow",
    "jet_exp",
    "jet_log",
    "eval_with_jacobian",
    "random_positive_rationals",
]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to an exact rational")


@dataclass(frozen=True)
class RationalMatrix:
    """Dense immutable matrix of Fractions, stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "RationalMatrix":
        rows = [[_frac(v) for v in row] for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(v for r in rows for v in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            cols = [other.column(j) for j in range(other.cols)]
            return RationalMatrix.from_rows(
                [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)],
                other.cols,
            )
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * b for a, b in zip(self.row(i), vec)) for i in range(self.rows))

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "RationalMatrix":
        c = _frac(c)
        return RationalMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_skew(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == -self[j, i] for i in range(self.rows) for j in range(i, self.cols)
        )

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries)

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        a = self.tolist()
        n = self.rows
        d = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                d = -d
            d *= a[c][c]
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] / a[c][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return d

    def __str__(self) -> str:
        cells = [[str(v) for v in self.row(i)] for i in range(self.rows)]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


def _as_matrix(M) -> RationalMatrix:
    return M if isinstance(M, RationalMatrix) else RationalMatrix.from_rows(M)


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot rule: scan columns left to right, take the earliest row at or below
    the current one with a nonzero entry.
    """
    M = _as_matrix(M)
    a = M.tolist()
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        if r == M.rows:
            break
        p = next((i for i in range(r, M.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(M.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, keeping its direction."""
    vec = [_frac(v) for v in vec]
    if not any(vec):
        return tuple(0 for _ in vec)
    lcm = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * lcm) for v in vec]
    g = math.gcd(*ints)
    return tuple(i // g for i in ints)


def rank_kernel(M) -> tuple[int, list[tuple[int, ...]]]:
    """Exact rank and a primitive integer basis of the right kernel.

    One basis vector per free column ``f`` of the RREF, in increasing ``f``;
    its last nonzero entry sits at ``f`` and is positive.
    """
    M = _as_matrix(M)
    if M.cols == 0:
        return 0, []
    a, pivots = rref(M)
    basis = []
    for f in range(M.cols):
        if f in pivots:
            continue
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for row, p in enumerate(pivots):
            v[p] = -a[row][f]
        basis.append(primitive(v))
    return len(pivots), basis


def solve_linear(A, b: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of ``A x = b`` with free variables zero, or None."""
    A = _as_matrix(A)
    b = [_frac(v) for v in b]
    if len(b) != A.rows:
        raise ValueError("right-hand side has wrong length")
    aug = [list(A.row(i)) + [b[i]] for i in range(A.rows)]
    a, pivots = rref(RationalMatrix.from_rows(aug, A.cols + 1)) if A.rows else ([], [])
    if A.cols in pivots:
        return None
    x = [Fraction(0)] * A.cols
    for row, p in enumerate(pivots):
        x[p] = a[row][A.cols]
    return tuple(x)


# --------------------------------------------------------------------------
# jets


def _is_int_exponent(e) -> bool:
    if isinstance(e, int):
        return True
    if isinstance(e, Fraction):
        return e.denominator == 1
    return False


def rpow(base, e):
    """``base ** e`` that stays exact for integer ``e``.

    Non-integer exponents on exact values are evaluated in mpmath at the
    current working precision.
    """
    if _is_int_exponent(e):
        return base ** int(e)
    if isinstance(base, Jet):
        return base ** e
    if isinstance(e, Fraction):
        e = mpmath.mpf(e.numerator) / e.denominator
    if isinstance(base, Fraction):
        base = mpmath.mpf(base.numerator) / base.denominator
    return base ** e


class Jet:
    """Value plus first partials with respect to a fixed set of coordinates.

    The scalar type is whatever the seeds carry: Fractions give exact
    Jacobians, ``mpmath.mpf`` values allow real powers, ``exp`` and ``log``.
    """

    __slots__ = ("value", "partials")

    def __init__(self, value, partials):
        self.value = value
        self.partials = tuple(partials)

    @classmethod
    def variable(cls, value, index: int, dim: int, zero=Fraction(0), one=Fraction(1)) -> "Jet":
        return cls(value, (one if i == index else zero for i in range(dim)))

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            if len(other.partials) != len(self.partials):
                raise ValueError("jets of different dimension")
            return other
        return Jet(other, (0 * p for p in self.partials))

    def __add__(self, other):
        o = self._lift(other)
        return Jet(self.value + o.value, (a + b for a, b in zip(self.partials, o.partials)))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.value, (-a for a in self.partials))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.value * other, (a * other for a in self.partials))
        return Jet(
            self.value * other.value,
            (a * other.value + self.value * b for a, b in zip(self.partials, other.partials)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            if other == 0:
                raise ZeroDivisionError("jet division by zero")
            return Jet(self.value / other, (a / other for a in self.partials))
        if other.value == 0:
            raise ZeroDivisionError("jet division by a jet with zero value")
        q = self.value / other.value
        return Jet(q, ((a - q * b) / other.value for a, b in zip(self.partials, other.partials)))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, e):
        if _is_int_exponent(e):
            e = int(e)
            if e == 0:
                return Jet(self.value ** 0, (0 * a for a in self.partials))
            if e < 0 and self.value == 0:
                raise ZeroDivisionError("negative power of zero")
            v = self.value ** (e - 1) if e != 1 else self.value ** 0
            c = e * v
            return Jet(v * self.value, (c * a for a in self.partials))
        if isinstance(e, Fraction):
            e = mpmath.mpf(e.numerator) / e.denominator
        val = self.value
        if isinstance(val, Fraction):
            val = mpmath.mpf(val.numerator) / val.denominator
        v = val ** (e - 1)
        return Jet(v * val, (e * v * a for a in self.partials))

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.value == other.value and self.partials == other.partials
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"Jet({self.value!r}, {list(self.partials)!r})"


def jet_exp(u):
    if not isinstance(u, Jet):
        return mpmath.exp(u)
    v = mpmath.exp(u.value)
    return Jet(v, (v * a for a in u.partials))


def jet_log(u):
    if not isinstance(u, Jet):
        return mpmath.log(u)
    return Jet(mpmath.log(u.value), (a / u.value for a in u.partials))


def eval_with_jacobian(
    f: Callable[[Sequence[Jet]], Sequence], x: Sequence
) -> tuple[tuple[Fraction, ...], RationalMatrix]:
    """Exact value and Jacobian of ``f`` at ``x`` by jet propagation.

    ``f`` takes a sequence of coordinates and returns a sequence, using only
    ``+ - * /`` and integer powers. Raises ZeroDivisionError when a
    denominator vanishes at ``x``.
    """
    x = [_frac(v) for v in x]
    n = len(x)
    seeds = [Jet.variable(v, i, n) for i, v in enumerate(x)]
    out = f(seeds)
    values, rows = [], []
    for o in out:
        if isinstance(o, Jet):
            values.append(_frac(o.value))
            rows.append([_frac(p) for p in o.partials])
        else:
            values.append(_frac(o))
            rows.append([Fraction(0)] * n)
    return tuple(values), RationalMatrix.from_rows(rows, n)


def random_positive_rationals(rng: random.Random, n: int, bound: int = 10) -> tuple[Fraction, ...]:
    """Point with coordinates p/q, 1 <= p, q <= bound."""
    return tuple(Fraction(rng.randint(1, bound), rng.randint(1, bound)) for _ in range(n))
