"""Builders for the structured q-integer matrices and their factors.

Indices j, k run over 1..n everywhere in this module. Matrices involving
fractional powers of q are built in the variable t = q^(1/n), so every
exponent stays an integer; ``variable`` on the result records which one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Sequence

from qdet.errors import BadSpec
from qdet.exactring import LaurentPoly, XPoly
from qdet.ntheory import ceil_div, floor_div

__all__ = [
    "MatrixKind",
    "MatrixSpec",
    "RingMatrix",
    "build",
    "build_diagonal_factors",
    "build_qinv_numerator",
    "ceil_exponents",
    "floor_exponents",
    "q_integer",
]


class MatrixKind(str, Enum):
    FLOOR_QINT = "floor-qint"
    CEIL_QINT = "ceil-qint"
    FLOOR_POWER = "floor-power"
    CEIL_POWER = "ceil-power"
    FLOOR_X = "floor-x"
    CEIL_X = "ceil-x"
    Q_FRACTIONAL = "q-fractional"
    Q_PRIME_FRACTIONAL = "q-prime-fractional"

    def __str__(self) -> str:
        return self.value


_T_KINDS = {
    MatrixKind.FLOOR_POWER,
    MatrixKind.CEIL_POWER,
    MatrixKind.Q_FRACTIONAL,
    MatrixKind.Q_PRIME_FRACTIONAL,
}


@dataclass(frozen=True)
class MatrixSpec:
    kind: MatrixKind
    a: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", MatrixKind(self.kind))
        if not isinstance(self.n, int) or self.n < 1 or self.n % 2 == 0:
            raise BadSpec(f"n must be odd and positive, got {self.n}")

    @property
    def variable(self) -> str:
        return "t" if self.kind in _T_KINDS else "q"


def _fmt(x, var: str) -> str:
    if isinstance(x, (LaurentPoly, XPoly)):
        return x.to_str(var)
    return str(x)


@dataclass(frozen=True, eq=False)
class RingMatrix:
    """Dense square matrix over an exact ring (LaurentPoly, XPoly, int, Fraction)."""

    rows: tuple[tuple[Any, ...], ...]
    variable: str = "q"
    spec: MatrixSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, int], Any], variable: str = "q",
                      spec: MatrixSpec | None = None) -> RingMatrix:
        """Matrix with entry fn(j, k), 1-based."""
        return cls(tuple(tuple(fn(j, k) for k in range(1, n + 1)) for j in range(1, n + 1)),
                   variable, spec)

    @classmethod
    def identity(cls, n: int, one: Any = 1, variable: str = "q") -> RingMatrix:
        zero = one * 0
        return cls.from_function(n, lambda j, k: one if j == k else zero, variable)

    @classmethod
    def diagonal(cls, entries: Sequence[Any], variable: str = "q") -> RingMatrix:
        zero = entries[0] * 0
        return cls.from_function(len(entries), lambda j, k: entries[j - 1] if j == k else zero,
                                 variable)

    # -- structure ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, j: int, k: int) -> Any:
        """1-based entry access."""
        return self.rows[j - 1][k - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def transpose(self) -> RingMatrix:
        return RingMatrix(tuple(zip(*self.rows)), self.variable)

    @property
    def T(self) -> RingMatrix:
        return self.transpose()

    def map(self, fn: Callable[[Any], Any], variable: str | None = None) -> RingMatrix:
        return RingMatrix(tuple(tuple(fn(x) for x in r) for r in self.rows),
                          self.variable if variable is None else variable)

    def __add__(self, other: RingMatrix) -> RingMatrix:
        return RingMatrix(tuple(tuple(x + y for x, y in zip(r, s))
                                for r, s in zip(self.rows, other.rows)), self.variable)

    def __sub__(self, other: RingMatrix) -> RingMatrix:
        return RingMatrix(tuple(tuple(x - y for x, y in zip(r, s))
                                for r, s in zip(self.rows, other.rows)), self.variable)

    def __neg__(self) -> RingMatrix:
        return self.map(lambda x: -x)

    def scale(self, c: Any) -> RingMatrix:
        return self.map(lambda x: x * c)

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = r[0] * c[0]
                for x, y in zip(r[1:], c[1:]):
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return RingMatrix(tuple(out), self.variable)

    def is_scalar(self) -> bool:
        """True when the matrix is c*I for some ring element c."""
        d = self.rows[0][0]
        return all((x == d) if i == j else not x
                   for i, r in enumerate(self.rows) for j, x in enumerate(r))

    # -- rendering ---------------------------------------------------------

    def to_text(self) -> str:
        cells = [[_fmt(x, self.variable) for x in r] for r in self.rows]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __str__(self) -> str:
        return self.to_text()

    def to_json(self) -> dict:
        return {
            "kind": None if self.spec is None else self.spec.kind.value,
            "a": None if self.spec is None else self.spec.a,
            "n": self.n,
            "variable": self.variable,
            "entries": [[_fmt(x, self.variable) for x in r] for r in self.rows],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> RingMatrix:
        """Rebuild a Laurent-entry matrix from its JSON form."""
        var = obj["variable"]
        spec = None
        if obj.get("kind") is not None:
            spec = MatrixSpec(MatrixKind(obj["kind"]), obj["a"], obj["n"])
        rows = tuple(tuple(LaurentPoly.parse(s, var) for s in r) for r in obj["entries"])
        return cls(rows, var, spec)


# ---------------------------------------------------------------------------
# entry formulas
# ---------------------------------------------------------------------------

def q_integer(m: int) -> LaurentPoly:
    """[m]_q = (1 - q^m)/(1 - q) as a Laurent polynomial."""
    if m > 0:
        return LaurentPoly([1] * m)
    if m == 0:
        return LaurentPoly()
    return LaurentPoly([-1] * (-m), m)


def floor_exponents(a: int, n: int) -> list[list[int]]:
    """[floor((a j - (a+1) k)/n)] for 1 <= j, k <= n."""
    return [[floor_div(a * j - (a + 1) * k, n) for k in range(1, n + 1)]
            for j in range(1, n + 1)]


def ceil_exponents(a: int, n: int) -> list[list[int]]:
    """[ceil(((a+1) j - a k)/n)] for 1 <= j, k <= n."""
    return [[ceil_div((a + 1) * j - a * k, n) for k in range(1, n + 1)]
            for j in range(1, n + 1)]


def build(spec: MatrixSpec) -> RingMatrix:
    kind, a, n = spec.kind, spec.a, spec.n
    t = LaurentPoly.monomial
    x = XPoly.x()
    if kind is MatrixKind.FLOOR_QINT:
        ex = floor_exponents(a, n)
        fn = lambda j, k: q_integer(ex[j - 1][k - 1])
    elif kind is MatrixKind.CEIL_QINT:
        ex = ceil_exponents(a, n)
        fn = lambda j, k: q_integer(ex[j - 1][k - 1])
    elif kind is MatrixKind.FLOOR_POWER:
        ex = floor_exponents(a, n)
        fn = lambda j, k: t(n * ex[j - 1][k - 1])
    elif kind is MatrixKind.CEIL_POWER:
        ex = ceil_exponents(a, n)
        fn = lambda j, k: t(n * ex[j - 1][k - 1])
    elif kind is MatrixKind.FLOOR_X:
        ex = floor_exponents(a, n)
        fn = lambda j, k: x + t(ex[j - 1][k - 1])
    elif kind is MatrixKind.CEIL_X:
        ex = ceil_exponents(a, n)
        fn = lambda j, k: x + t(ex[j - 1][k - 1])
    elif kind is MatrixKind.Q_FRACTIONAL:
        fn = lambda j, k: t(-((a * j - (a + 1) * k) % n))
    elif kind is MatrixKind.Q_PRIME_FRACTIONAL:
        fn = lambda j, k: t((a * k - (a + 1) * j) % n)
    else:  # pragma: no cover - enum is closed
        raise BadSpec(f"unknown kind {kind}")
    return RingMatrix.from_function(n, fn, spec.variable, spec)


def build_diagonal_factors(spec: MatrixSpec) -> tuple[RingMatrix, RingMatrix]:
    """Diagonal (left, right) factors of the power matrix, in t.

    FLOOR_POWER = B Q C with B = diag(t^(a j)), C = diag(t^(-(a+1) k));
    CEIL_POWER = B' Q' C' with B' = diag(t^((a+1) j)), C' = diag(t^(-a k)).
    """
    a, n = spec.a, spec.n
    t = LaurentPoly.monomial
    idx = range(1, n + 1)
    if spec.kind is MatrixKind.FLOOR_POWER:
        left = [t(a * j) for j in idx]
        right = [t(-(a + 1) * k) for k in idx]
    elif spec.kind is MatrixKind.CEIL_POWER:
        left = [t((a + 1) * j) for j in idx]
        right = [t(-a * k) for k in idx]
    else:
        raise BadSpec(f"diagonal factors exist only for power kinds, not {spec.kind}")
    return RingMatrix.diagonal(left, "t"), RingMatrix.diagonal(right, "t")


def build_qinv_numerator(a: int, n: int) -> RingMatrix:
    """F = [f(j, k)] in t, where Q^{-1} = F / (1 - t^-n) for coprime a(a+1), n.

    f(j, k) = [n | (a+1)j - ak] - t^-1 [n | (a+1)j - ak - 1].
    """
    MatrixSpec(MatrixKind.Q_FRACTIONAL, a, n)

    def f(j: int, k: int) -> LaurentPoly:
        r = (a + 1) * j - a * k
        val = LaurentPoly()
        if r % n == 0:
            val = val + 1
        if (r - 1) % n == 0:
            val = val - LaurentPoly.monomial(-1)
        return val

    return RingMatrix.from_function(n, f, "t")


def integer_matrix(exponents: list[list[int]], fn: Callable[[int], Any] = lambda m: m
                   ) -> RingMatrix:
    """Integer or rational matrix obtained by applying fn to an exponent table."""
    return RingMatrix(tuple(tuple(fn(m) for m in r) for r in exponents), "q")


def two_power(m: int) -> Fraction:
    return Fraction(2) ** m
