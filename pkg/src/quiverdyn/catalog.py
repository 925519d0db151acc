"""The four quiver families A, B6, C5, D3 and their reference reductions.

Reference reduced maps are plain callables on the reduced variables. They use
only ``+ - * /`` and :func:`~quiverdyn.exact.rpow`, so they evaluate exactly
on Fractions when all exponents are integers, in mpmath otherwise, and accept
jets for Jacobians.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .dynamics import IterationMap, build_system, monomial_map
from .errors import InvalidParams
from .exact import RationalMatrix, rpow
from .quiver import QuiverMatrix

__all__ = [
    "FamilySpec",
    "FAMILIES",
    "make_family",
    "family_period",
    "family_map",
    "known_bracket",
    "known_casimirs",
    "known_chart",
    "ReferenceReducedMap",
    "reference_reduced_map",
]

FAMILIES = {"A": 4, "B6": 4, "C5": 2, "D3": 3}


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple

    def __post_init__(self):
        fam = self.family.upper()
        if fam not in FAMILIES:
            raise InvalidParams(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        object.__setattr__(self, "family", fam)
        params = tuple(self.params)
        if len(params) != FAMILIES[fam]:
            raise InvalidParams(f"family {fam} takes {FAMILIES[fam]} parameters, got {len(params)}")
        if any(isinstance(p, bool) or not isinstance(p, int) or p < 1 for p in params):
            raise InvalidParams(f"family {fam} parameters must be positive integers, got {params}")
        if fam == "C5" and params[0] == params[1]:
            raise InvalidParams("family C5 requires r != s")
        object.__setattr__(self, "params", params)

    @classmethod
    def parse(cls, family: str, params: str | Sequence[int]) -> "FamilySpec":
        if isinstance(params, str):
            try:
                params = tuple(int(p) for p in params.split(","))
            except ValueError:
                raise InvalidParams(f"cannot parse parameters {params!r}") from None
        return cls(family, tuple(params))


def make_family(spec: FamilySpec) -> QuiverMatrix:
    fam, p = spec.family, spec.params
    if fam == "A":
        r, s, t, q = p
        return QuiverMatrix([[0, r, s, t], [-r, 0, t, q], [-s, -t, 0, r], [-t, -q, -r, 0]])
    if fam == "B6":
        r, s, t, q = p
        return QuiverMatrix([
            [0, -r, s, -q, s, -t],
            [r, 0, -t - r * s, s, -q - r * s, s],
            [-s, t + r * s, 0, -r - s * (t - q), s, -q],
            [q, -s, r + s * (t - q), 0, -t - r * s, s],
            [-s, q + r * s, -s, t + r * s, 0, -r],
            [t, -s, q, -s, r, 0],
        ])
    if fam == "C5":
        r, s = p
        # entry (4,2) is r-1, the value forced by skew-symmetry
        return QuiverMatrix([
            [0, -r, 1, 1, -s],
            [r, 0, -r - s, 1 - r, 1],
            [-1, r + s, 0, -r - s, 1],
            [-1, r - 1, r + s, 0, -r],
            [s, -1, -1, r, 0],
        ])
    r, s, t = p
    return QuiverMatrix([[0, r, s], [-r, 0, t], [-s, -t, 0]])


def family_period(spec: FamilySpec) -> int:
    """Period of the family's quiver at these parameters."""
    p = spec.params
    if spec.family == "A":
        return 1 if (p[0], p[1]) == (p[2], p[3]) else 2
    if spec.family == "B6":
        return 1 if p[0] == p[2] else 2
    if spec.family == "C5":
        return 2
    return 1 if p[0] == p[1] == p[2] else 3


def family_map(spec: FamilySpec, monomial: bool = False) -> IterationMap:
    """Iteration map used for the family in the examples.

    D3 always uses the three-mutation map, which is what the worked examples
    reduce even in the 1-periodic case r = s = t.
    """
    B = make_family(spec)
    m = 3 if spec.family == "D3" else family_period(spec)
    if monomial:
        return monomial_map(B, m)
    return build_system(B, m)


# --------------------------------------------------------------------------
# known brackets, Casimirs and charts


def known_bracket(example: str, params: Sequence[int] = ()) -> RationalMatrix:
    """Coefficient matrix C of the invariant log-canonical bracket.

    ``"iii"`` takes family A parameters (r, s, t, p); ``"iv"`` is constant.
    """
    if example == "iii":
        r, s, t, p = params
        return RationalMatrix.from_rows([[0, r, -p, t], [-r, 0, t, -s], [p, -t, 0, r], [-t, s, -r, 0]])
    if example == "iv":
        return RationalMatrix.from_rows([
            [0, 1, 0, -1, 0, 1],
            [-1, 0, 1, 0, -1, 0],
            [0, -1, 0, 1, 0, -1],
            [1, 0, -1, 0, 1, 0],
            [0, 1, 0, -1, 0, 1],
            [-1, 0, 1, 0, -1, 0],
        ])
    raise InvalidParams(f"no known bracket for example {example!r}")


def known_casimirs(example: str) -> list[tuple[int, ...]]:
    """Casimir exponent vectors in the order of the reference reduced variables."""
    if example == "iii":
        return [(-5, -3, 0, 1), (3, 2, 1, 0)]
    if example == "iv":
        return [(-1, 0, 0, 0, 1, 0), (0, -1, 0, 0, 0, 1), (0, 1, 0, 1, 0, 0), (0, 0, 1, 0, 1, 0)]
    raise InvalidParams(f"no known Casimirs for example {example!r}")


def known_chart(example: str, params: Sequence[int]) -> RationalMatrix:
    """Exponent matrix of the reference Darboux chart.

    ``"i"``: D3 parameters (r, s, t). ``"ii"``: C5 parameters with r = 1.
    """
    if example == "i":
        r, s, t = params
        return RationalMatrix.from_rows([[0, 1, Fraction(s, r)], [-r, 0, t]])
    if example == "ii":
        r, s = params
        if r != 1 or s == 1:
            raise InvalidParams("example ii is defined for r = 1, s != 1")
        c = s * s + s - 2
        return RationalMatrix.from_rows([
            [0, 1, -1, -1, s],
            [1, 0, -1 - s, 0, 1],
            [0, 0, -c, 0, 0],
            [0, 0, 0, 0, 1],
        ])
    raise InvalidParams(f"no known chart for example {example!r}")


# --------------------------------------------------------------------------
# reference reduced maps


@dataclass(frozen=True)
class ReferenceReducedMap:
    source: str
    params: tuple
    arity: int
    integer_exponents: bool
    formula: Callable

    def __call__(self, y: Sequence):
        if len(y) != self.arity:
            raise ValueError(f"example {self.source} map takes {self.arity} variables")
        return tuple(self.formula(y))


def _example_i(r, s, t, uncorrected):
    F = Fraction
    a = F(r ** 3 - r + r * s * s + r * r * s * t - s * t, r)
    # the alternative exponent has numerator s^2 + trs + r; composing the chart
    # with the map gives s^2 + trs + r^2 (they agree only at r = 1)
    b = F(s * s + t * r * s + (r if uncorrected else r * r), r * r)
    c = F(t * r * s + r * r * t * t - t * t - r * r)
    d = F(t * t * r + s * t - r, r)

    def formula(y):
        y1, y2 = y
        return (rpow(y1, a) * rpow(y2, b), rpow(y1, c) * rpow(y2, d))

    return formula, all(e.denominator == 1 for e in (a, b, c, d))


def _example_ii(s):
    c = s * s + s - 2

    def formula(y):
        y1, y2, y3, y4 = y
        u = 1 + y1 + y2
        return (
            u ** s / (y1 ** s * y2 ** (s - 1) * (1 + y1)) * y4 ** c,
            u / (y1 * y2),
            1 / y4 ** c,
            u / (y1 * y2) * rpow(y3, Fraction(1, c)) * y4 ** (1 + s),
        )

    return formula


def _example_iii(y):
    y1, y2 = y
    w = y1 ** 2 * y2 ** 3 * (1 + y1 ** 3 * y2 ** 5)
    return ((1 + w) / (y1 ** 3 * y2 ** 5), w)


def _example_iv(r, s, t):
    def formula(y):
        y1, y2, y3, y4 = y
        q = y2 ** t * y3 ** (r + t) + y4 ** s
        return (
            y1 * q / y4,
            (y1 ** r * y4 ** t * q ** r + y2 ** s * y3 ** s) / y3,
            y2 * y3,
            y1 * q,
        )

    return formula


def reference_reduced_map(example: str, params: Sequence[int] = (), uncorrected: bool = False) -> ReferenceReducedMap:
    """Closed-form reduced map of a worked example.

    ``"i"``: monomial D3 map, params (r, s, t). ``uncorrected=True`` returns the
    formula with the alternative y2 exponent in the first component, valid only
    for r = 1.
    ``"ii"``: C5 map, params (r, s) with r = 1, s != 1.
    ``"iii"``: family A at (1, 5, 3, 2).
    ``"iv"``: family B6 with p = r + t, params (r, s, t) or (r, s, t, p).
    """
    params = tuple(params)
    if any(isinstance(p, bool) or not isinstance(p, int) or p < 1 for p in params):
        raise InvalidParams("parameters must be positive integers")
    if example == "i":
        if len(params) != 3:
            raise InvalidParams("example i takes (r, s, t)")
        formula, integral = _example_i(*params, uncorrected)
        return ReferenceReducedMap("i", params, 2, integral, formula)
    if example == "ii":
        if len(params) != 2 or params[0] != 1 or params[1] == 1:
            raise InvalidParams("example ii is defined for (r, s) = (1, s) with s != 1")
        return ReferenceReducedMap("ii", params, 4, False, _example_ii(params[1]))
    if example == "iii":
        if params not in ((), (1, 5, 3, 2)):
            raise InvalidParams("example iii is defined for (r, s, t, p) = (1, 5, 3, 2)")
        return ReferenceReducedMap("iii", (1, 5, 3, 2), 2, True, _example_iii)
    if example == "iv":
        if len(params) == 4:
            r, s, t, p = params
            if p != r + t:
                raise InvalidParams("example iv requires p = r + t")
        elif len(params) == 3:
            r, s, t = params
        else:
            raise InvalidParams("example iv takes (r, s, t) or (r, s, t, p)")
        if r == t:
            raise InvalidParams("example iv requires r != t")
        return ReferenceReducedMap("iv", (r, s, t, r + t), 4, True, _example_iv(r, s, t))
    raise InvalidParams(f"unknown example {example!r}")
