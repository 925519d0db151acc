"""Log presymplectic form, Cartan splitting and the reduced symplectic map.

Invariance of the form is checked exactly over the rationals. The reduced
map generally involves rational exponents, so it is evaluated in mpmath.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath

from .dynamics import IterationMap
from .errors import FiberMismatch, NotReducible, RankZero
from .exact import Jet, RationalMatrix, eval_with_jacobian, rank_kernel, rpow, rref, solve_linear
from .quiver import QuiverMatrix, as_quiver
from .report import VerificationReport

__all__ = [
    "log_jacobian",
    "pullback_check",
    "MonomialChart",
    "cartan_reduce",
    "ReducedMapHandle",
    "make_reduced_map",
    "reduced_map_eval",
    "canonical_form",
    "check_symplectic_reduced",
]


def _mpf(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def log_jacobian(phi: Callable, x: Sequence) -> RationalMatrix:
    """Exact Jacobian of phi in log coordinates: L[a][b] = x_b / phi_a * dphi_a/dx_b."""
    values, J = eval_with_jacobian(phi, x)
    x = [Fraction(v) for v in x]
    return RationalMatrix.from_rows(
        [[J[a, b] * x[b] / values[a] for b in range(J.cols)] for a in range(J.rows)]
    )


def _as_rational(B) -> RationalMatrix:
    if isinstance(B, RationalMatrix):
        return B
    if isinstance(B, QuiverMatrix):
        return RationalMatrix.from_rows(B.b, B.n)
    return RationalMatrix.from_rows(B)


def pullback_check(phi: IterationMap, B, points: Iterable[Sequence]) -> VerificationReport:
    """Exact test of phi^* omega = omega, i.e. L^T B L = B at every point."""
    Bm = _as_rational(B)
    report = VerificationReport("pullback", True)
    for x in points:
        L = log_jacobian(phi, x)
        defect = L.T @ Bm @ L - Bm
        res = max((abs(v) for v in defect.entries), default=Fraction(0))
        report.residuals.append(res)
        report.points += 1
        if res and report.ok:
            report.ok = False
            report.witness = tuple(Fraction(v) for v in x)
    return report


# --------------------------------------------------------------------------
# Darboux charts


def _wedge(u: Sequence[Fraction], w: Sequence[Fraction]) -> list[list[Fraction]]:
    return [[a * b - c * d for b, d in zip(w, u)] for a, c in zip(u, w)]


@dataclass(frozen=True)
class MonomialChart:
    """Reduced variables y_j = prod_i x_i ** U[j][i].

    Rows come in pairs (u_{2l-1}, u_{2l}) so that
    sum_l (u_{2l-1} u_{2l}^T - u_{2l} u_{2l-1}^T) = B.
    """

    exponents: RationalMatrix
    half_rank: int

    def __post_init__(self):
        if self.exponents.rows != 2 * self.half_rank:
            raise ValueError("chart needs 2k rows")

    @property
    def dim(self) -> int:
        return self.exponents.cols

    def reconstruct(self) -> RationalMatrix:
        n = self.dim
        total = [[Fraction(0)] * n for _ in range(n)]
        for l in range(self.half_rank):
            w = _wedge(self.exponents.row(2 * l), self.exponents.row(2 * l + 1))
            total = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(total, w)]
        return RationalMatrix.from_rows(total, n)

    def is_integral(self) -> bool:
        return self.exponents.is_integral()

    def project(self, x: Sequence):
        """pi(x); exact for Fraction input when every exponent is an integer."""
        out = []
        for j in range(self.exponents.rows):
            acc = None
            for xa, e in zip(x, self.exponents.row(j)):
                if e:
                    f = rpow(xa, e)
                    acc = f if acc is None else acc * f
            out.append(acc if acc is not None else x[0] ** 0)
        return tuple(out)

    def to_dict(self) -> dict:
        return {"half_rank": self.half_rank, "exponents": [[str(v) for v in r] for r in self.exponents.tolist()]}


def cartan_reduce(B, merge_elementary: bool = True) -> MonomialChart:
    """Split the constant 2-form B into k Darboux pairs.

    At each step take the lexicographically first (i, j), i < j, with a
    nonzero entry of the remaining form W, emit u = (row i of W) / W_ij and
    w = row j of W, and subtract u ^ w. This zeroes rows i and j, so the rank
    drops by two per step.

    When the remaining form restricted to rows i, j is a single term
    W_ij dv_i ^ dv_j and ``merge_elementary`` is set, the pair is written
    as (W_ij e_i, e_j) instead, keeping the coefficient on v_i.
    """
    Bm = _as_rational(B)
    if not Bm.is_skew():
        raise ValueError("form matrix must be skew-symmetric")
    if Bm.is_zero():
        raise RankZero("the zero form has no Darboux pairs")
    n = Bm.cols
    W = Bm.tolist()
    rows = []
    for _ in range(n // 2 + 1):
        pivot = next(((i, j) for i in range(n) for j in range(i + 1, n) if W[i][j] != 0), None)
        if pivot is None:
            break
        i, j = pivot
        wij = W[i][j]
        isolated = all(W[i][c] == 0 for c in range(n) if c != j) and all(W[j][c] == 0 for c in range(n) if c != i)
        if merge_elementary and isolated:
            u = [wij if c == i else Fraction(0) for c in range(n)]
            w = [Fraction(int(c == j)) for c in range(n)]
        else:
            u = [v / wij for v in W[i]]
            w = list(W[j])
        rows += [u, w]
        wedge = _wedge(u, w)
        W = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(W, wedge)]
    else:
        raise ArithmeticError("splitting did not terminate; rank failed to drop")
    return MonomialChart(RationalMatrix.from_rows(rows, n), len(rows) // 2)


# --------------------------------------------------------------------------
# reduced map


@dataclass(frozen=True)
class ReducedMapHandle:
    """phi pushed down through a monomial chart.

    ``section`` (n x 2k) lifts reduced log-coordinates: log x = section @ log y,
    which sets the non-pivot coordinates of x to 1. ``kernel`` spans the
    fibre directions used by the lift-independence guard.
    """

    chart: MonomialChart
    upstream: Callable
    section: RationalMatrix
    pivots: tuple
    kernel: tuple
    precision: int = 256
    guard_bits: int = 16

    @property
    def tolerance(self):
        return mpmath.mpf(2) ** (-self.precision + self.guard_bits)

    def lift(self, y: Sequence, shift: int = 0):
        """A point over ``y``; ``shift`` > 0 moves it along the fibre."""
        one = y[0] ** 0
        x = []
        for a in range(self.section.rows):
            acc = one
            for yj, e in zip(y, self.section.row(a)):
                if e:
                    acc = acc * rpow(yj, e)
            x.append(acc)
        if shift:
            for idx, kvec in enumerate(self.kernel):
                t = Fraction(shift + idx + 2, shift + idx + 1)
                x = [xa * rpow(t, ka) if ka else xa for xa, ka in zip(x, kvec)]
        return x

    def apply(self, y: Sequence, shift: int = 0):
        return self.chart.project(self.upstream(self.lift(y, shift)))

    def __call__(self, y: Sequence):
        return self.apply(y)


def make_reduced_map(
    phi: Callable,
    B=None,
    chart: MonomialChart | None = None,
    precision: int = 256,
    guard_bits: int = 16,
) -> ReducedMapHandle:
    """Handle for the reduced map of phi, chart from :func:`cartan_reduce` unless given."""
    if chart is None:
        if B is None:
            raise ValueError("need either B or a chart")
        chart = cartan_reduce(B)
    U = chart.exponents
    if 2 * chart.half_rank >= U.cols:
        raise NotReducible("form has maximal rank; nothing to reduce")
    rank, kernel = rank_kernel(U)
    if rank != U.rows:
        raise ValueError("chart rows are linearly dependent")
    cols = []
    for j in range(U.rows):
        e = [int(i == j) for i in range(U.rows)]
        cols.append(solve_linear(U, e))
    section = RationalMatrix.from_rows([[cols[j][a] for j in range(U.rows)] for a in range(U.cols)], U.rows)

    _, pivots = rref(U)
    return ReducedMapHandle(chart, phi, section, tuple(pivots), tuple(kernel), precision, guard_bits)


def _rel_diff(a, b):
    scale = max(abs(b), mpmath.mpf(2) ** -1000)
    return abs(a - b) / scale


def reduced_map_eval(handle: ReducedMapHandle, y: Sequence, check_fiber: bool = True) -> tuple:
    """Reduced map at a positive point, in mpmath at the handle's precision.

    A second lift displaced along the fibre must give the same image up to
    the handle's tolerance, otherwise FiberMismatch is raised.
    """
    with mpmath.workprec(handle.precision):
        ym = [_mpf(v) for v in y]
        if any(v <= 0 for v in ym):
            raise ValueError("reduced points must be strictly positive")
        out = handle.apply(ym)
        if check_fiber and handle.kernel:
            other = handle.apply(ym, shift=1)
            worst = max(_rel_diff(a, b) for a, b in zip(other, out))
            if worst > handle.tolerance:
                raise FiberMismatch(
                    f"lifts disagree by relative {mpmath.nstr(worst, 5)} > tolerance", witness=tuple(y)
                )
        return tuple(+v for v in out)


# --------------------------------------------------------------------------
# symplecticity of reduced maps


def canonical_form(dim: int) -> RationalMatrix:
    """Matrix of the canonical log symplectic form on ``dim`` (even) variables."""
    if dim % 2:
        raise ValueError("canonical form needs an even dimension")
    rows = [[0] * dim for _ in range(dim)]
    for l in range(0, dim, 2):
        rows[l][l + 1] = 1
        rows[l + 1][l] = -1
    return RationalMatrix.from_rows(rows, dim)


def _log_jacobian_jet(f, y, exact):
    n = len(y)
    if exact:
        seeds = [Jet.variable(Fraction(v), i, n) for i, v in enumerate(y)]
    else:
        zero, one = mpmath.mpf(0), mpmath.mpf(1)
        seeds = [Jet.variable(_mpf(v), i, n, zero, one) for i, v in enumerate(y)]
    out = f(seeds)
    L = []
    for o in out:
        if not isinstance(o, Jet):
            L.append([0 * s.value for s in seeds])
            continue
        L.append([o.partials[b] * seeds[b].value / o.value for b in range(n)])
    return L


def _log_jacobian_fd(f, y, h):
    n = len(y)
    base = [_mpf(v) for v in y]
    cols = []
    for b in range(n):
        up = list(base)
        dn = list(base)
        up[b] = base[b] * mpmath.exp(h)
        dn[b] = base[b] * mpmath.exp(-h)
        fu, fd = f(up), f(dn)
        cols.append([(mpmath.log(p) - mpmath.log(q)) / (2 * h) for p, q in zip(fu, fd)])
    return [[cols[b][a] for b in range(n)] for a in range(len(cols[0]))]


def check_symplectic_reduced(
    f: Callable,
    points: Iterable[Sequence],
    precision: int = 256,
    tol=None,
    method: str = "jet",
    exact: bool = False,
) -> VerificationReport:
    """Test L^T Omega0 L = Omega0 for the log-Jacobian L of a reduced map.

    ``method="jet"`` propagates jets through ``f`` (exact if ``exact`` and
    every exponent is an integer); ``method="fd"`` uses central differences
    in log space with step 2^(-precision/3). Default tolerance is
    2^(-precision/2) for differences and 2^(-precision+16) for jets.
    """
    report = VerificationReport("reduced-symplectic", True, exact=exact)
    with mpmath.workprec(precision):
        if tol is None:
            tol = mpmath.mpf(2) ** (-(precision // 2) if method == "fd" else -precision + 16)
        report.tolerance = 0 if exact else tol
        for y in points:
            if method == "jet":
                L = _log_jacobian_jet(f, y, exact)
            elif method == "fd":
                L = _log_jacobian_fd(f, y, mpmath.mpf(2) ** (-(precision // 3)))
            else:
                raise ValueError(f"unknown method {method!r}")
            dim = len(L)
            O = canonical_form(dim).tolist()
            worst = 0
            for i in range(dim):
                for j in range(dim):
                    s = sum(L[a][i] * O[a][c] * L[c][j] for a in range(dim) for c in range(dim) if O[a][c])
                    worst = max(worst, abs(s - O[i][j]))
            report.residuals.append(worst)
            report.points += 1
            bad = worst != 0 if exact else worst > tol
            if bad and report.ok:
                report.ok = False
                report.witness = tuple(y)
    return report
