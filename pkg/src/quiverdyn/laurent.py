"""Laurent polynomials over the integers and symbolic cluster mutation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded, NonLaurentResult
from .quiver import QuiverMatrix, _check_node, as_quiver, mutate_matrix

__all__ = ["LaurentPoly", "SymbolicSeed", "mutate_seed", "laurent_check", "LaurentReport", "StepRecord"]


def _add(e, f):
    return tuple(a + b for a, b in zip(e, f))


def _sub(e, f):
    return tuple(a - b for a, b in zip(e, f))


class LaurentPoly:
    """Sparse Laurent polynomial in ``nvars`` variables with integer coefficients.

    ``terms`` maps exponent tuples (negative entries allowed) to nonzero ints.
    Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != nvars:
                raise ValueError("exponent length does not match variable count")
            if c:
                self.terms[e] = int(c)

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def variable(cls, i: int, nvars: int) -> "LaurentPoly":
        """The variable x_i, ``i`` 1-based."""
        return cls._raw(nvars, {tuple(int(j == i - 1) for j in range(nvars)): 1})

    @classmethod
    def constant(cls, c: int, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {(0,) * nvars: int(c)} if c else {})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls(len(exponents), {tuple(exponents): coeff})

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError("Laurent polynomials in different rings")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add(e1, e2)
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentPoly._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise NonLaurentResult("negative power of a non-monomial")
            ((e, c),) = self.terms.items()
            if abs(c) != 1:
                raise NonLaurentResult("negative power of a monomial with coefficient != +-1")
            return LaurentPoly._raw(self.nvars, {tuple(n * v for v in e): c if n % 2 else 1})
        result = LaurentPoly.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        return self.exact_div(other)

    def exact_div(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient in the Laurent ring; NonLaurentResult if none exists."""
        divisor = self._coerce(divisor)
        if not divisor.terms:
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if not self.terms:
            return self
        if divisor.is_monomial():
            ((ed, cd),) = divisor.terms.items()
            out = {}
            for e, c in self.terms.items():
                q, r = divmod(c, cd)
                if r:
                    raise NonLaurentResult(f"coefficient {c} not divisible by {cd}")
                out[_sub(e, ed)] = q
            return LaurentPoly._raw(self.nvars, out)
        # clear monomial factors; then exact division in Z[x] by lex-leading terms
        sa, sd = self.min_exponents(), divisor.min_exponents()
        d = {_sub(e, sd): c for e, c in divisor.terms.items()}
        rem = {_sub(e, sa): c for e, c in self.terms.items()}
        lead = max(d)
        lead_c = d[lead]
        quot = {}
        while rem:
            lt = max(rem)
            shift = _sub(lt, lead)
            if min(shift) < 0:
                raise NonLaurentResult("division leaves a remainder")
            q, r = divmod(rem[lt], lead_c)
            if r:
                raise NonLaurentResult("division leaves a non-integral remainder")
            quot[shift] = q
            for e, c in d.items():
                t = _add(e, shift)
                v = rem.get(t, 0) - q * c
                if v:
                    rem[t] = v
                else:
                    del rem[t]
        offset = _sub(sa, sd)
        return LaurentPoly._raw(self.nvars, {_add(e, offset): c for e, c in quot.items()})

    # -- inspection ---------------------------------------------------------

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def min_exponents(self) -> tuple[int, ...]:
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def __len__(self) -> int:
        return len(self.terms)

    def max_coeff_digits(self) -> int:
        return max((len(str(abs(c))) for c in self.terms.values()), default=0)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    t *= Fraction(x) ** k
            total += t
        return total

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other, self.nvars)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" if k > 0 else f"x{i + 1}^({k})"
                for i, k in enumerate(e)
                if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


@dataclass(frozen=True)
class SymbolicSeed:
    matrix: QuiverMatrix
    cluster: tuple

    def __post_init__(self):
        if len(self.cluster) != self.matrix.n:
            raise ValueError("cluster length must equal the node count")

    @classmethod
    def initial(cls, B) -> "SymbolicSeed":
        B = as_quiver(B)
        return cls(B, tuple(LaurentPoly.variable(i + 1, B.n) for i in range(B.n)))

    def evaluate(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(p.evaluate(point) for p in self.cluster)


def exchange_numerator(row: Sequence[int], cluster: Sequence[LaurentPoly]) -> LaurentPoly:
    nv = cluster[0].nvars
    pos = LaurentPoly.constant(1, nv)
    neg = LaurentPoly.constant(1, nv)
    for b, x in zip(row, cluster):
        if b > 0:
            pos = pos * x ** b
        elif b < 0:
            neg = neg * x ** (-b)
    return pos + neg


def mutate_seed(seed: SymbolicSeed, k: int) -> SymbolicSeed:
    """Exchange relation at node ``k`` (1-based), division done exactly."""
    B = seed.matrix
    _check_node(B, k)
    new = exchange_numerator(B.row(k), seed.cluster).exact_div(seed.cluster[k - 1])
    cluster = list(seed.cluster)
    cluster[k - 1] = new
    return SymbolicSeed(mutate_matrix(B, k), tuple(cluster))


@dataclass(frozen=True)
class StepRecord:
    step: int
    node: int
    terms: int
    max_coeff_digits: int


@dataclass
class LaurentReport:
    status: str  # "laurent" | "non-laurent" | "budget"
    steps: list = field(default_factory=list)
    message: str = ""
    seed: SymbolicSeed | None = None

    @property
    def ok(self) -> bool:
        return self.status == "laurent"

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "message": self.message,
            "steps": [vars(s) for s in self.steps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def laurent_check(
    B, node_sequence: Iterable[int], depth: int, term_budget: int = 10 ** 6, shift: int = 0
) -> LaurentReport:
    """Mutate the initial seed along ``node_sequence`` repeated ``depth`` times.

    Pass ``j`` (from 0) mutates at each node advanced cyclically by
    ``j * shift``; ``shift = m`` follows the iteration of an m-periodic
    quiver, ``shift = 0`` repeats the sequence literally.

    Failures (remainder in an exchange division, or a cluster variable larger
    than ``term_budget`` terms) end the run and are recorded in the report.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    B = as_quiver(B)
    nodes = list(node_sequence)
    for k in nodes:
        _check_node(B, k)
    seed = SymbolicSeed.initial(B)
    report = LaurentReport("laurent", seed=seed)
    step = 0
    for j in range(depth):
        for k in nodes:
            k = (k - 1 + j * shift) % B.n + 1
            step += 1
            try:
                num = exchange_numerator(seed.matrix.row(k), seed.cluster)
                if len(num) > term_budget:
                    raise BudgetExceeded(f"numerator has {len(num)} terms")
                seed = mutate_seed(seed, k)
            except NonLaurentResult as exc:
                report.status, report.message = "non-laurent", f"step {step} (node {k}): {exc}"
                return report
            except BudgetExceeded as exc:
                report.status, report.message = "budget", f"step {step} (node {k}): {exc}"
                return report
            x = seed.cluster[k - 1]
            report.steps.append(StepRecord(step, k, len(x), x.max_coeff_digits()))
            report.seed = seed
            if len(x) > term_budget:
                report.status, report.message = "budget", f"step {step} (node {k}): {len(x)} terms"
                return report
    return report
