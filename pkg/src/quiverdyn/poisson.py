"""Log-canonical Poisson brackets {x_i, x_j} = c_ij x_i x_j.

Invariance is certified pointwise in exact arithmetic: both sides of the
Poisson-map identity are rational functions, so agreement at many random
rational points is strong evidence but not a proof.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath

from .errors import FiberMismatch, InvarianceViolation, NonUnimodularLift
from .exact import (
    RationalMatrix,
    eval_with_jacobian,
    primitive,
    random_positive_rationals,
    rank_kernel,
    rref,
    solve_linear,
)
from .report import VerificationReport

__all__ = [
    "LogCanonicalBracket",
    "CasimirSet",
    "InvarianceSolution",
    "poisson_map_check",
    "find_invariant_structures",
    "casimir_basis",
    "poisson_reduce",
    "CasimirLift",
]


@dataclass(frozen=True)
class LogCanonicalBracket:
    c: RationalMatrix

    def __init__(self, c):
        if not isinstance(c, RationalMatrix):
            c = RationalMatrix.from_rows(c)
        if not c.is_skew():
            raise ValueError("bracket coefficient matrix must be skew-symmetric")
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.c.rows

    def bracket(self, i: int, j: int, x: Sequence) -> Fraction:
        """{x_i, x_j} at ``x``, indices 1-based."""
        return self.c[i - 1, j - 1] * Fraction(x[i - 1]) * Fraction(x[j - 1])

    def monomial_bracket(self, i: int, k: Sequence[int], x: Sequence) -> Fraction:
        """{x_i, x^k} = x^k x_i (C k)_i."""
        xk = Fraction(1)
        for xa, ka in zip(x, k):
            xk *= Fraction(xa) ** ka
        ck = self.c @ [Fraction(v) for v in k]
        return xk * Fraction(x[i - 1]) * ck[i - 1]


def _as_bracket(C) -> LogCanonicalBracket:
    return C if isinstance(C, LogCanonicalBracket) else LogCanonicalBracket(C)


def poisson_map_check(C, phi: Callable, points: Iterable[Sequence]) -> VerificationReport:
    """Exact test that phi preserves the bracket at each point.

    For every i < j: sum_ab dphi_i/dx_a dphi_j/dx_b c_ab x_a x_b = c_ij phi_i phi_j.
    """
    C = _as_bracket(C).c
    report = VerificationReport("poisson-map", True)
    for x in points:
        x = [Fraction(v) for v in x]
        vals, J = eval_with_jacobian(phi, x)
        n = len(x)
        P = [[C[a, b] * x[a] * x[b] for b in range(n)] for a in range(n)]
        worst = Fraction(0)
        for i in range(n):
            Ji = J.row(i)
            JiP = [sum(Ji[a] * P[a][b] for a in range(n)) for b in range(n)]
            for j in range(i + 1, n):
                lhs = sum(JiP[b] * J[j, b] for b in range(n))
                worst = max(worst, abs(lhs - C[i, j] * vals[i] * vals[j]))
        report.residuals.append(worst)
        report.points += 1
        if worst and report.ok:
            report.ok = False
            report.witness = tuple(x)
    return report


# --------------------------------------------------------------------------
# invariant structures


def _pairs(n):
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


def _skew_from_vector(vec, n) -> RationalMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), v in zip(_pairs(n), vec):
        rows[a][b] = Fraction(v)
        rows[b][a] = -Fraction(v)
    return RationalMatrix.from_rows(rows, n)


def _invariance_rows(phi, x):
    """Linear equations in the unknowns c_ab (a < b) from one point."""
    vals, J = eval_with_jacobian(phi, x)
    n = len(x)
    pairs = _pairs(n)
    eqs = []
    for i, j in pairs:
        row = []
        for a, b in pairs:
            coeff = (J[i, a] * J[j, b] - J[i, b] * J[j, a]) * x[a] * x[b]
            if (a, b) == (i, j):
                coeff -= vals[i] * vals[j]
            row.append(coeff)
        eqs.append(row)
    return eqs


@dataclass
class InvarianceSolution:
    """Basis of every log-canonical bracket invariant under a map."""

    basis: list
    sample_points_used: int
    verification_points: int
    seed: int
    n: int = 0

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, C) -> bool:
        """Exact membership of C in the span of the basis."""
        C = _as_bracket(C).c
        target = [C[a, b] for a, b in _pairs(C.rows)]
        if not self.basis:
            return not any(target)
        A = RationalMatrix.from_rows(
            [[M[a, b] for M in self.basis] for a, b in _pairs(C.rows)], len(self.basis)
        )
        return solve_linear(A, target) is not None

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "basis": [[[str(v) for v in r] for r in M.tolist()] for M in self.basis],
            "sample_points_used": self.sample_points_used,
            "verification_points": self.verification_points,
            "seed": self.seed,
            "caveat": "invariance certified at finitely many random rational points",
        }


def find_invariant_structures(
    phi: Callable,
    n: int,
    sample_count: int | None = None,
    verify_count: int = 20,
    seed: int = 0,
    max_rounds: int = 5,
) -> InvarianceSolution:
    """All skew C for which phi is a Poisson map, by exact linear algebra.

    The invariance condition is linear in the c_ab. Equations from
    ``sample_count`` seeded random points (default n^2) are solved exactly;
    each basis element is then re-checked at ``verify_count`` fresh points.
    Any failing verification point joins the system and the solve repeats.
    """
    if sample_count is None:
        sample_count = n * n
    if sample_count < 3:
        raise ValueError("sample_count must be at least 3")
    rng = random.Random(seed)
    pts = [random_positive_rationals(rng, n) for _ in range(sample_count)]
    eqs = [row for x in pts for row in _invariance_rows(phi, x)]
    for _ in range(max_rounds):
        _, kernel = rank_kernel(RationalMatrix.from_rows(eqs, len(_pairs(n)))) if eqs else (0, [])
        basis = [_skew_from_vector(primitive(v), n) for v in kernel]
        fresh = [random_positive_rationals(rng, n) for _ in range(verify_count)]
        failing = [x for x in fresh if not all(poisson_map_check(M, phi, [x]) for M in basis)]
        if not failing:
            return InvarianceSolution(basis, len(pts), verify_count, seed, n)
        pts += failing
        eqs += [row for x in failing for row in _invariance_rows(phi, x)]
    raise RuntimeError("invariance solve did not stabilise")


# --------------------------------------------------------------------------
# Casimirs and reduction


@dataclass(frozen=True)
class CasimirSet:
    exponent_vectors: tuple

    def __len__(self) -> int:
        return len(self.exponent_vectors)

    def project(self, x: Sequence) -> tuple:
        out = []
        for k in self.exponent_vectors:
            v = Fraction(1)
            for xa, ka in zip(x, k):
                if ka:
                    v *= Fraction(xa) ** ka
            out.append(v)
        return tuple(out)


def casimir_basis(C) -> CasimirSet:
    """Primitive integer basis of ker C: x^k is a Casimir iff C k = 0."""
    _, kernel = rank_kernel(_as_bracket(C).c)
    return CasimirSet(tuple(kernel))


def _unimodular_columns(K: list[tuple[int, ...]]) -> tuple[int, ...] | None:
    """First column set (pivot columns first, then lexicographic) where K is unimodular."""
    k, n = len(K), len(K[0])
    _, pivots = rref(K)
    candidates = [tuple(pivots)] + [c for c in itertools.combinations(range(n), k) if c != tuple(pivots)]
    for cols in candidates:
        sub = RationalMatrix.from_rows([[row[c] for c in cols] for row in K], k)
        if abs(sub.det()) == 1:
            return cols
    return None


@dataclass(frozen=True)
class CasimirLift:
    """Section of the Casimir projection x -> (x^k_1, ..., x^k_r).

    ``exponents[a][i]`` gives x_a = prod_i y_i ** exponents[a][i]; coordinates
    outside ``columns`` are 1. Integer exponents whenever the chosen column
    block is unimodular.
    """

    vectors: tuple
    columns: tuple
    exponents: tuple
    exact: bool
    kernel: tuple

    @classmethod
    def build(cls, vectors: Sequence[Sequence[int]]) -> "CasimirLift":
        K = [tuple(int(v) for v in k) for k in vectors]
        n = len(K[0])
        cols = _unimodular_columns(K)
        exact = cols is not None
        if cols is None:
            cols = tuple(rref(K)[1])
        sub = RationalMatrix.from_rows([[row[c] for c in cols] for row in K], len(K))
        inv_cols = [solve_linear(sub, [int(i == j) for i in range(len(K))]) for j in range(len(K))]
        exps = [[Fraction(0)] * len(K) for _ in range(n)]
        for pos, c in enumerate(cols):
            for j in range(len(K)):
                exps[c][j] = inv_cols[j][pos]
        # fibre directions: kernel of the Casimir exponent matrix
        _, ker = rank_kernel(K)
        return cls(tuple(K), tuple(cols), tuple(tuple(r) for r in exps), exact, tuple(ker))

    def lift(self, y: Sequence, shift: int = 0):
        if self.exact:
            y = [Fraction(v) for v in y]
            one = Fraction(1)
        else:
            y = [mpmath.mpf(Fraction(v).numerator) / Fraction(v).denominator for v in y]
            one = mpmath.mpf(1)
        x = []
        for row in self.exponents:
            acc = one
            for yi, e in zip(y, row):
                if e:
                    acc = acc * (yi ** int(e) if e.denominator == 1 else yi ** (mpmath.mpf(e.numerator) / e.denominator))
            x.append(acc)
        if shift:
            for idx, kvec in enumerate(self.kernel):
                t = Fraction(shift + idx + 2, shift + idx + 1)
                x = [xa * t ** ka if ka else xa for xa, ka in zip(x, kvec)]
        return x

    def project(self, x: Sequence) -> tuple:
        out = []
        for k in self.vectors:
            acc = x[0] ** 0
            for xa, ka in zip(x, k):
                if ka:
                    acc = acc * xa ** ka
            out.append(acc)
        return tuple(out)


def poisson_reduce(
    C,
    phi: Callable,
    y: Sequence,
    casimirs: Sequence[Sequence[int]] | None = None,
    check: bool = True,
    precision: int = 256,
    guard_bits: int = 16,
) -> tuple:
    """Reduced map on Casimir values: lift y, apply phi, read off the Casimirs.

    ``casimirs`` defaults to :func:`casimir_basis`. The lift is exact when
    some block of Casimir exponent columns is unimodular; otherwise a
    NonUnimodularLift warning is issued and mpmath is used. A second lift
    moved along the fibre must give the same answer (FiberMismatch if not).
    With ``check``, phi is verified to be a Poisson map for C at both lifts.
    """
    if casimirs is None:
        casimirs = casimir_basis(C).exponent_vectors
    if not casimirs:
        raise ValueError("bracket has no Casimirs; nothing to reduce")
    K = [tuple(k) for k in casimirs]
    Cm = _as_bracket(C).c
    for k in K:
        if any(Cm @ [Fraction(v) for v in k]):
            raise ValueError(f"{k} is not in the kernel of C")
    lifter = CasimirLift.build(K)
    if any(Fraction(v) <= 0 for v in y):
        raise ValueError("Casimir values must be strictly positive")
    if not lifter.exact:
        warnings.warn(NonUnimodularLift("no unimodular column block; lifting in big floats"), stacklevel=2)
        with mpmath.workprec(precision):
            x1, x2 = lifter.lift(y), lifter.lift(y, shift=1)
            out1 = lifter.project(phi(x1))
            out2 = lifter.project(phi(x2))
            tol = mpmath.mpf(2) ** (-precision + guard_bits)
            bad = any(abs(a - b) > tol * abs(b) for a, b in zip(out1, out2))
        if bad:
            raise FiberMismatch("Casimir images differ along the fibre", witness=tuple(y))
        return out1
    x1, x2 = lifter.lift(y), lifter.lift(y, shift=1)
    if check:
        rep = poisson_map_check(Cm, phi, [x1, x2])
        if not rep:
            raise InvarianceViolation("map is not a Poisson map for C", witness=rep.witness)
    out1 = lifter.project(phi(x1))
    out2 = lifter.project(phi(x2))
    if out1 != out2:
        raise FiberMismatch("Casimir images differ along the fibre", witness=tuple(y))
    return out1
