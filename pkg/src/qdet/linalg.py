"""Exact dense linear algebra over integral domains with exact division.

Every routine accepts a :class:`~qdet.qmatrix.RingMatrix` or a plain list
of rows. Ring elements may be ints, Fractions, LaurentPoly or XPoly; the
ring's zero and one are derived from the entries themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from qdet.errors import InternalError, NonExactDivision, TooLarge
from qdet.exactring import LaurentPoly, exact_divide
from qdet.qmatrix import RingMatrix

__all__ = [
    "COFACTOR_LIMIT",
    "DEFAULT_SAMPLE_POINTS",
    "EliminationTrace",
    "adjugate",
    "adjugate_form",
    "det_bareiss",
    "det_cofactor",
    "det_rank_one_update",
    "grand_adjugate_sum",
    "rank_by_evaluation",
    "rank_rational",
]

COFACTOR_LIMIT = 8
DEFAULT_SAMPLE_POINTS = (Fraction(2), Fraction(3), Fraction(5, 2))


@dataclass
class EliminationTrace:
    pivots: list[tuple[int, int]] = field(default_factory=list)  # (row, column)
    swaps: int = 0
    denominators: list[Any] = field(default_factory=list)


def _rows(M) -> list[list[Any]]:
    rows = M.rows if isinstance(M, RingMatrix) else M
    out = [list(r) for r in rows]
    if any(len(r) != len(out) for r in out):
        raise ValueError("matrix must be square")
    return out


def _variable(M) -> str:
    return M.variable if isinstance(M, RingMatrix) else "q"


def _zero_one(sample: Any) -> tuple[Any, Any]:
    zero = sample * 0
    return zero, zero + 1


def _div(a, b):
    try:
        return exact_divide(a, b)
    except NonExactDivision as exc:
        raise InternalError(f"fraction-free step produced an inexact division: {exc}") from exc


def det_bareiss(M, *, with_trace: bool = False):
    """Determinant by fraction-free Bareiss elimination.

    Pivots are the first nonzero entry at or below the diagonal in the current
    column. Returns the ring zero for singular input.
    """
    A = _rows(M)
    n = len(A)
    trace = EliminationTrace()
    if n == 0:
        return (1, trace) if with_trace else 1
    zero, one = _zero_one(A[0][0])
    prev = one
    sign = 1
    for k in range(n - 1):
        p = next((i for i in range(k, n) if A[i][k]), None)
        if p is None:
            return (zero, trace) if with_trace else zero
        if p != k:
            A[k], A[p] = A[p], A[k]
            sign = -sign
            trace.swaps += 1
        trace.pivots.append((k, k))
        trace.denominators.append(prev)
        piv = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            lead = ri[k]
            for j in range(k + 1, n):
                v = piv * ri[j]
                if lead and rk[j]:
                    v = v - lead * rk[j]
                ri[j] = _div(v, prev) if v else zero
            ri[k] = zero
        prev = piv
    det = A[n - 1][n - 1]
    if sign < 0:
        det = -det
    return (det, trace) if with_trace else det


def det_cofactor(M):
    """Determinant by first-row cofactor expansion; O(n!) oracle for n <= 8."""
    A = _rows(M)
    n = len(A)
    if n > COFACTOR_LIMIT:
        raise TooLarge(f"cofactor expansion limited to n <= {COFACTOR_LIMIT}, got {n}")
    if n == 0:
        return 1
    return _cofactor(A)


def _cofactor(A: list[list[Any]]):
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    total = None
    for c, x in enumerate(A[0]):
        if not x:
            continue
        minor = [r[:c] + r[c + 1:] for r in A[1:]]
        term = x * _cofactor(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return A[0][0] * 0 if total is None else total


def _adjugate_elimination(A: list[list[Any]]):
    """Fraction-free Gauss-Jordan on [A | I]; returns adj(A) or None if singular.

    After full elimination the left block is d*I with d = det(P A), and the
    right block is d * A^-1 (P records the row swaps), so adj(A) = sign(P) * R.
    """
    n = len(A)
    zero, one = _zero_one(A[0][0])
    W = [list(A[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    prev = one
    sign = 1
    for k in range(n):
        p = next((i for i in range(k, n) if W[i][k]), None)
        if p is None:
            return None
        if p != k:
            W[k], W[p] = W[p], W[k]
            sign = -sign
        piv = W[k][k]
        rk = W[k]
        for i in range(n):
            if i == k:
                continue
            ri = W[i]
            lead = ri[k]
            for j in range(k + 1, 2 * n):
                v = piv * ri[j]
                if lead and rk[j]:
                    v = v - lead * rk[j]
                ri[j] = _div(v, prev) if v else zero
            ri[k] = zero
        prev = piv
    adj = [[x if sign > 0 else -x for x in W[i][n:]] for i in range(n)]
    return adj


def _adjugate_minors(A: list[list[Any]]):
    n = len(A)
    if n == 1:
        _, one = _zero_one(A[0][0])
        return [[one]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for idx, r in enumerate(A) if idx != i]
            c = det_bareiss(minor)
            adj[j][i] = -c if (i + j) % 2 else c
    return adj


def adjugate(M, method: str = "auto") -> RingMatrix:
    """Transposed cofactor matrix.

    ``method`` is "elimination" (fails on singular input), "minors" (n^2
    fraction-free minors) or "auto" (elimination, falling back to minors).
    """
    A = _rows(M)
    if not A:
        raise ValueError("adjugate of an empty matrix")
    adj = None
    if method in ("auto", "elimination"):
        adj = _adjugate_elimination(A)
        if adj is None and method == "elimination":
            raise ValueError("matrix is singular; elimination adjugate unavailable")
    if adj is None:
        if method not in ("auto", "minors"):
            raise ValueError(f"unknown adjugate method {method!r}")
        adj = _adjugate_minors(A)
    return RingMatrix(tuple(tuple(r) for r in adj), _variable(M))


def grand_adjugate_sum(M):
    """1^T adj(M) 1, the sum of all adjugate entries."""
    total = None
    for r in adjugate(M).rows:
        for x in r:
            total = x if total is None else total + x
    return total


def rank_rational(rows: Sequence[Sequence[Any]]) -> int:
    """Rank over Q by Gaussian elimination with Fractions."""
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return 0
    m, ncols = len(A), len(A[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        for i in range(r + 1, m):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r


def rank_by_evaluation(M, sample_points: Sequence = DEFAULT_SAMPLE_POINTS) -> int:
    """Max over sample points of the rank of M evaluated there.

    A lower bound for the rank over the rational function field, equal to it
    at generic points.
    """
    A = _rows(M)
    points = [Fraction(p) for p in sample_points]
    if len(points) < 3:
        raise ValueError("need at least 3 sample points")
    best = 0
    for pt in points:
        evaluated = [[LaurentPoly.coerce(x).eval(pt) if not isinstance(x, Fraction) else x
                      for x in r] for r in A]
        best = max(best, rank_rational(evaluated))
    return best


def det_rank_one_update(M, u: Sequence[Any], v: Sequence[Any]):
    """det(M) + v^T adj(M) u, which equals det(M + u v^T)."""
    A = _rows(M)
    n = len(A)
    if len(u) != n or len(v) != n:
        raise ValueError("vector length does not match the matrix")
    return det_bareiss(A) + adjugate_form(A, u, v)


def adjugate_form(M, u: Sequence[Any], v: Sequence[Any]):
    """v^T adj(M) u.

    Nonsingular M goes through the elimination adjugate. For singular M the
    bordered determinant det[[M, u], [v^T, 0]] = -v^T adj(M) u is used, which
    avoids the n^2 minors.
    """
    A = _rows(M)
    n = len(A)
    adj = _adjugate_elimination(A) if n else None
    if adj is None:
        zero = A[0][0] * 0 if n else 0
        bordered = [list(r) + [u[i]] for i, r in enumerate(A)] + [list(v) + [zero]]
        return -det_bareiss(bordered)
    total = A[0][0] * 0
    for i in range(n):
        if not v[i]:
            continue
        for j in range(n):
            if u[j] and adj[i][j]:
                total = total + v[i] * adj[i][j] * u[j]
    return total
