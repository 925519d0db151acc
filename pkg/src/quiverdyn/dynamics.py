"""Iteration maps of periodic quivers and their orbits."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import NotPeriodic
from .quiver import QuiverMatrix, as_quiver, check_period, find_period, mutate_matrix

__all__ = [
    "ExchangeRow",
    "IterationMap",
    "Orbit",
    "build_system",
    "monomial_map",
    "evaluate_map",
    "iterate_orbit",
]


def _product(factors):
    out = None
    for f in factors:
        out = f if out is None else out * f
    return out


@dataclass(frozen=True)
class ExchangeRow:
    """One exchange relation ``x_new * x_k = numerator``.

    With ``constant_term`` the numerator is the usual binomial: product over
    positive entries plus product over negative ones, an empty product
    counting as 1. Without it only the nonempty product is kept, which drops
    the ``+1`` of a sign-definite row.
    """

    row: tuple
    constant_term: bool = True

    def numerator(self, x: Sequence):
        pos = _product(x[j] ** b for j, b in enumerate(self.row) if b > 0)
        neg = _product(x[j] ** -b for j, b in enumerate(self.row) if b < 0)
        if self.constant_term:
            return (1 if pos is None else pos) + (1 if neg is None else neg)
        if pos is not None and neg is not None:
            raise ValueError("monomial relation needs a sign-definite row")
        mono = pos if pos is not None else neg
        return 1 if mono is None else mono


@dataclass(frozen=True)
class IterationMap:
    """``sigma^m o mu_m o ... o mu_1`` acting on clusters of length ``n``.

    Calling the map works for any coordinate type with ``* / **`` (Fractions,
    jets, mpmath floats, floats, Laurent polynomials).
    """

    n: int
    m: int
    rows: tuple
    monomial_only: bool = False

    def __post_init__(self):
        if not 1 <= self.m <= self.n or len(self.rows) != self.m:
            raise ValueError("need 1 <= m <= n and one exchange row per mutation")

    def __call__(self, x: Sequence):
        if len(x) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(x)}")
        c = list(x)
        for k, rel in enumerate(self.rows):
            c[k] = rel.numerator(c) / c[k]
        return tuple(c[self.m:] + c[:self.m])

    def exponent_matrix(self) -> list[list[int]]:
        """Integer matrix M with log(phi(x)) = M log(x); monomial maps only."""
        if not self.monomial_only:
            raise ValueError("exponent matrix exists only for monomial maps")
        n = self.n
        logs = [[int(i == j) for j in range(n)] for i in range(n)]
        for k, rel in enumerate(self.rows):
            signs = [b for b in rel.row if b]
            use_pos = not signs or signs[0] > 0
            new = [0] * n
            for j, b in enumerate(rel.row):
                if (b > 0 and use_pos) or (b < 0 and not use_pos):
                    w = abs(b)
                    new = [a + w * c for a, c in zip(new, logs[j])]
            logs[k] = [a - c for a, c in zip(new, logs[k])]
        return logs[self.m:] + logs[:self.m]


def _exchange_rows(B: QuiverMatrix, m: int) -> list[tuple]:
    rows = []
    cur = B
    for k in range(1, m + 1):
        rows.append(cur.row(k))
        cur = mutate_matrix(cur, k)
    return rows


def build_system(B, m: int | None = None) -> IterationMap:
    """Iteration map of an m-periodic quiver (m found by search when omitted)."""
    B = as_quiver(B)
    if m is None:
        m = find_period(B).period
        if m is None:
            raise NotPeriodic("quiver is not m-periodic for any m <= n")
    elif not check_period(B, m):
        raise NotPeriodic(f"quiver does not satisfy the {m}-periodicity condition")
    return IterationMap(B.n, m, tuple(ExchangeRow(r) for r in _exchange_rows(B, m)))


def monomial_map(B, m: int | None = None) -> IterationMap:
    """Monomial variant: the same relations with the ``+1`` dropped.

    Every exchange row must be sign-definite.
    """
    B = as_quiver(B)
    if m is None:
        m = find_period(B).period or B.n
    rows = _exchange_rows(B, m)
    for k, r in enumerate(rows, 1):
        if any(b > 0 for b in r) and any(b < 0 for b in r):
            raise ValueError(f"exchange row {k} has mixed signs; no monomial variant")
    return IterationMap(B.n, m, tuple(ExchangeRow(r, constant_term=False) for r in rows), monomial_only=True)


def evaluate_map(phi: IterationMap, x: Sequence) -> tuple[Fraction, ...]:
    """Exact image of a positive rational point."""
    x = tuple(Fraction(v) for v in x)
    if any(v <= 0 for v in x):
        raise ValueError("iteration maps are evaluated on strictly positive points")
    y = phi(x)
    if any(v <= 0 for v in y):
        raise ArithmeticError("positivity violated: image has a non-positive coordinate")
    return tuple(Fraction(v) for v in y)


# --------------------------------------------------------------------------
# orbits

_LOG10_2 = math.log10(2)


def _digits(q: Fraction) -> int:
    return int(max(abs(q.numerator).bit_length(), q.denominator.bit_length()) * _LOG10_2) + 1


@dataclass
class Orbit:
    points: list
    mode: str
    steps: int
    status: str = "ok"  # "ok" | "budget" | "nonfinite"
    message: str = ""
    precision: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_csv(self, digits: int = 17) -> str:
        n = len(self.points[0]) if self.points else 0
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(n)])
        for p in self.points:
            if self.mode == "exact":
                w.writerow([f"{v.numerator}/{v.denominator}" for v in p])
            elif self.mode == "bigfloat":
                w.writerow([mpmath.nstr(v, digits) for v in p])
            else:
                w.writerow([f"{v:.{digits}g}" for v in p])
        if not self.ok:
            buf.write(f"# {self.status}: {self.message}\n")
        return buf.getvalue()


def iterate_orbit(
    phi: IterationMap,
    x0: Sequence,
    steps: int,
    mode: str = "exact",
    precision: int = 256,
    budget_digits: int = 10 ** 5,
) -> Orbit:
    """Orbit ``x0, phi(x0), ..., phi^steps(x0)``.

    ``mode`` is ``"exact"`` (Fractions), ``"bigfloat"`` (mpmath at
    ``precision`` bits) or ``"fast"`` (machine floats). Runs that exceed the
    digit budget or leave the finite floats stop early; the orbit then holds
    every good iterate and says why it stopped.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if mode == "exact":
        pt = tuple(Fraction(v) for v in x0)
    elif mode == "bigfloat":
        with mpmath.workprec(precision):
            pt = tuple(mpmath.mpf(Fraction(v).numerator) / Fraction(v).denominator for v in x0)
    elif mode == "fast":
        pt = tuple(float(Fraction(v)) for v in x0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if any(v <= 0 for v in pt):
        raise ValueError("initial point must be strictly positive")
    orbit = Orbit([pt], mode, 0, precision=precision if mode == "bigfloat" else None)
    for i in range(1, steps + 1):
        try:
            if mode == "exact":
                nxt = evaluate_map(phi, pt)
                big = max(_digits(v) for v in nxt)
                if big > budget_digits:
                    orbit.status = "budget"
                    orbit.message = f"iterate {i} needs {big} digits (budget {budget_digits})"
                    break
            elif mode == "bigfloat":
                with mpmath.workprec(precision):
                    nxt = phi(pt)
                if not all(mpmath.isfinite(v) and v > 0 for v in nxt):
                    raise OverflowError("non-finite or non-positive value")
            else:
                nxt = phi(pt)
                if not all(math.isfinite(v) and v > 0 for v in nxt):
                    raise OverflowError("non-finite or non-positive value")
        except (OverflowError, ZeroDivisionError) as exc:
            orbit.status = "nonfinite"
            orbit.message = f"iterate {i}: {exc}"
            break
        orbit.points.append(nxt)
        orbit.steps = i
        pt = nxt
    return orbit
