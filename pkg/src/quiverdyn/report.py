"""Pointwise verification reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath


def _scalar_json(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 8)
    return v


@dataclass
class VerificationReport:
    """Outcome of checking an identity at a list of points.

    ``residuals[i]`` is the max-abs entry of the defect matrix at point i;
    ``witness`` is the first failing point, kept exactly.
    """

    check: str
    ok: bool
    residuals: list = field(default_factory=list)
    points: int = 0
    witness: tuple | None = None
    exact: bool = True
    tolerance: object = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "ok": self.ok,
            "points": self.points,
            "exact": self.exact,
            "tolerance": _scalar_json(self.tolerance),
            "residuals": [_scalar_json(r) for r in self.residuals],
            "witness": None if self.witness is None else [_scalar_json(v) for v in self.witness],
            "note": self.note,
        }
