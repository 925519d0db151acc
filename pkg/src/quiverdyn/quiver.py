"""Quivers as skew-symmetric integer matrices: mutation, rotation, periodicity.

Nodes are numbered from 1 in every public function (``k``, node lists, the
text format); storage is 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, InvalidQuiver

__all__ = [
    "QuiverMatrix",
    "PeriodReport",
    "mutate_matrix",
    "mutate_sequence",
    "sigma_conjugate",
    "check_period",
    "find_period",
    "quiver_from_document",
    "quiver_to_document",
    "load_quiver",
    "dump_quiver",
]


@dataclass(frozen=True)
class QuiverMatrix:
    """Skew-symmetric integer matrix; ``b[i][j] > 0`` counts arrows i -> j."""

    b: tuple

    def __init__(self, b: Iterable[Iterable[int]]):
        rows = []
        for row in b:
            r = []
            for v in row:
                if isinstance(v, bool) or int(v) != v:
                    raise InvalidQuiver(f"non-integer entry {v!r}")
                r.append(int(v))
            rows.append(tuple(r))
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise InvalidQuiver("exchange matrix must be square")
        for i in range(n):
            if rows[i][i] != 0:
                raise InvalidQuiver(f"loop at node {i + 1}")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise InvalidQuiver(f"not skew-symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "b", tuple(rows))

    @property
    def n(self) -> int:
        return len(self.b)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.b[i][j]

    def row(self, k: int) -> tuple[int, ...]:
        """Row of node ``k`` (1-based)."""
        _check_node(self, k)
        return self.b[k - 1]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.b]

    def mutate(self, k: int) -> "QuiverMatrix":
        return mutate_matrix(self, k)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.b)

    def __str__(self) -> str:
        w = max((len(str(v)) for r in self.b for v in r), default=1)
        return "\n".join("[" + " ".join(str(v).rjust(w) for v in r) + "]" for r in self.b)


def _check_node(B: QuiverMatrix, k: int) -> None:
    if not 1 <= k <= B.n:
        raise IndexOutOfRange(f"node {k} outside 1..{B.n}")


def mutate_matrix(B: QuiverMatrix, k: int) -> QuiverMatrix:
    """Matrix mutation at node ``k`` (1-based)."""
    _check_node(B, k)
    b = B.b
    c = k - 1
    n = B.n
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        bik = b[i][c]
        for j in range(n):
            if i == c or j == c:
                out[i][j] = -b[i][j]
            else:
                bkj = b[c][j]
                # |b_ik| b_kj + b_ik |b_kj| is always even
                out[i][j] = b[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2
    return QuiverMatrix(out)


def mutate_sequence(B: QuiverMatrix, nodes: Iterable[int]) -> QuiverMatrix:
    for k in nodes:
        B = mutate_matrix(B, k)
    return B


def sigma_conjugate(B: QuiverMatrix, m: int) -> QuiverMatrix:
    """``sigma^-m B sigma^m`` for the cyclic shift sigma: entry (i, j) becomes b[i-m][j-m]."""
    if m < 0:
        raise ValueError("m must be non-negative")
    n = B.n
    if n == 0:
        return B
    return QuiverMatrix([[B.b[(i - m) % n][(j - m) % n] for j in range(n)] for i in range(n)])


def check_period(B: QuiverMatrix, m: int) -> bool:
    """True iff mutating at nodes 1..m returns ``sigma^-m B sigma^m`` (no minimality)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > B.n:
        return False
    return mutate_sequence(B, range(1, m + 1)) == sigma_conjugate(B, m)


@dataclass(frozen=True)
class PeriodReport:
    period: int | None
    intermediate_matrices: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "intermediate_matrices": [q.tolist() for q in self.intermediate_matrices],
        }


def find_period(B: QuiverMatrix, m_max: int | None = None) -> PeriodReport:
    """Smallest m <= m_max with Q(m+1) = sigma^m Q(1).

    ``intermediate_matrices`` holds Q(1), ..., Q(m+1) for the period found, or
    every matrix computed when none is. Mutating at node m needs m <= n, so
    the search never goes past n.
    """
    if m_max is None:
        m_max = B.n
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    chain = [B]
    for m in range(1, min(m_max, B.n) + 1):
        chain.append(mutate_matrix(chain[-1], m))
        if chain[-1] == sigma_conjugate(B, m):
            return PeriodReport(m, tuple(chain))
    return PeriodReport(None, tuple(chain))


# --------------------------------------------------------------------------
# text format


def quiver_from_document(doc: dict) -> QuiverMatrix:
    """Build a quiver from ``{"n": .., "matrix": [[..]]}`` or ``{"n": .., "upper": [[i, j, w], ..]}``."""
    if not isinstance(doc, dict) or "n" not in doc:
        raise InvalidQuiver("quiver document needs an integer field 'n'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InvalidQuiver("'n' must be a non-negative integer")
    if ("matrix" in doc) == ("upper" in doc):
        raise InvalidQuiver("give exactly one of 'matrix' or 'upper'")
    if "matrix" in doc:
        m = doc["matrix"]
        if not isinstance(m, list) or len(m) != n or any(not isinstance(r, list) or len(r) != n for r in m):
            raise InvalidQuiver(f"'matrix' must be a {n}x{n} array")
        return QuiverMatrix(m)
    b = [[0] * n for _ in range(n)]
    seen = set()
    for entry in doc["upper"]:
        if not isinstance(entry, list) or len(entry) != 3 or not all(isinstance(v, int) for v in entry):
            raise InvalidQuiver(f"bad 'upper' entry {entry!r}")
        i, j, w = entry
        if not 1 <= i < j <= n:
            raise InvalidQuiver(f"'upper' entry needs 1 <= i < j <= n, got {entry!r}")
        if w == 0 or (i, j) in seen:
            raise InvalidQuiver(f"zero or repeated 'upper' entry {entry!r}")
        seen.add((i, j))
        b[i - 1][j - 1] = w
        b[j - 1][i - 1] = -w
    return QuiverMatrix(b)


def quiver_to_document(B: QuiverMatrix, form: str = "matrix") -> dict:
    if form == "matrix":
        return {"n": B.n, "matrix": B.tolist()}
    if form == "upper":
        return {
            "n": B.n,
            "upper": [[i + 1, j + 1, B.b[i][j]] for i in range(B.n) for j in range(i + 1, B.n) if B.b[i][j]],
        }
    raise ValueError(f"unknown quiver form {form!r}")


def load_quiver(text: str) -> QuiverMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidQuiver(f"malformed quiver document: {exc}") from None
    return quiver_from_document(doc)


def dump_quiver(B: QuiverMatrix, form: str = "matrix") -> str:
    return json.dumps(quiver_to_document(B, form))


def as_quiver(B) -> QuiverMatrix:
    return B if isinstance(B, QuiverMatrix) else QuiverMatrix(B)


def row_of(B: QuiverMatrix, nodes: Sequence[int], k: int) -> tuple[int, ...]:
    """Row ``k`` of the matrix obtained by mutating ``B`` along ``nodes``."""
    return mutate_sequence(B, nodes).row(k)
