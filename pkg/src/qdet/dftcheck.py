"""Floating-point checks of the root-of-unity factorization.

The exact pipeline works in Z[t, 1/t] and never sees a root of unity. This
module checks the complex objects that only exist numerically: the DFT
inversion pair, the inverse of the Vandermonde matrix [zeta^(jk)], and the
factorization Q = U C V with an explicit diagonal C.
"""

from __future__ import annotations

import math
import time
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from qdet.errors import BadQ
from qdet.exactring import LaurentPoly
from qdet.linalg import det_bareiss
from qdet.qmatrix import MatrixKind, MatrixSpec, build
from qdet.reports import IdentityId, VerificationReport

__all__ = [
    "ResidualReport",
    "default_tolerance",
    "dft_roundtrip",
    "numeric_detq_check",
    "root_powers",
    "ucv_factorization_check",
    "vandermonde_inverse_check",
]

BASE_TOL = 1e-9
DET_REL_TOL = 1e-8


@dataclass
class ResidualReport:
    check: IdentityId
    n: int
    a: int
    q0: float | None
    residual: float
    tolerance: float
    passed: bool
    elapsed_ms: float = 0.0
    detail: str = ""

    def as_report(self) -> VerificationReport:
        lhs = f"residual={self.residual:.3e}"
        if self.q0 is not None:
            lhs += f" q0={self.q0:g}"
        return VerificationReport(self.check, self.a, self.n, lhs, f"<= {self.tolerance:.1e}",
                                  self.passed, self.elapsed_ms, numeric=True, detail=self.detail)


def default_tolerance(n: int, magnitude: float = 1.0) -> float:
    """1e-9 up to n = 15, growing linearly with n and with the entry scale."""
    return BASE_TOL * max(1.0, n / 15) * max(1.0, magnitude)


def root_powers(exponents, n: int) -> np.ndarray:
    """exp(2 pi i e / n) elementwise, reducing e mod n before scaling."""
    e = np.mod(np.asarray(exponents, dtype=np.int64), n)
    return np.exp(2j * np.pi * e / n)


def _idx(n: int) -> np.ndarray:
    return np.arange(1, n + 1)


def _residual(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if x.size else 0.0


def dft_roundtrip(b, tol: float | None = None) -> ResidualReport:
    """Forward sum a_m = sum_k b_k zeta^(km), then b'_m = (1/n) sum_k a_k zeta^(-km)."""
    start = time.perf_counter()
    b = np.asarray(b, dtype=complex)
    n = len(b)
    j = _idx(n)
    km = np.outer(j, j)
    a = root_powers(km, n) @ b
    back = root_powers(-km, n) @ a / n
    res = _residual(b - back)
    tol = default_tolerance(n, float(np.max(np.abs(b), initial=1.0))) if tol is None else tol
    return ResidualReport(IdentityId.DFT_ROUNDTRIP, n, 0, None, res, tol, bool(res <= tol),
                          (time.perf_counter() - start) * 1e3)


def vandermonde_inverse_check(n: int, tol: float | None = None) -> ResidualReport:
    """|| W (1/n) W* - I || for W = [zeta^(jk)]."""
    start = time.perf_counter()
    j = _idx(n)
    W = root_powers(np.outer(j, j), n)
    Wstar = root_powers(-np.outer(j, j), n)
    res = _residual(W @ Wstar / n - np.eye(n))
    tol = default_tolerance(n) if tol is None else tol
    return ResidualReport(IdentityId.VANDERMONDE_INV, n, 0, None, res, tol, bool(res <= tol),
                          (time.perf_counter() - start) * 1e3)


def _check_q0(q0) -> float:
    q = float(q0)
    if not q > 0 or q == 1 or not math.isfinite(q):
        raise BadQ(f"q0 must be a positive real different from 1, got {q0}")
    return q


def ucv_matrices(a: int, n: int, q0) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Numeric Q, U, diag(c), V for the fractional-part matrix at q = q0."""
    q = _check_q0(q0)
    MatrixSpec(MatrixKind.Q_FRACTIONAL, a, n)
    j = _idx(n)
    num = a * j[:, None] - (a + 1) * j[None, :]
    Q = q ** (-np.mod(num, n) / n)
    U = root_powers(a * np.outer(j, j), n)
    V = root_powers(-(a + 1) * np.outer(j, j), n)
    c = (1 - 1 / q) / (n * (1 - q ** (-1 / n) * root_powers(-j, n)))
    return Q, U, np.diag(c), V


def ucv_factorization_check(a: int, n: int, q0, tol: float | None = None) -> ResidualReport:
    """|| Q - U C V ||, plus vanishing of det U (det V) when gcd(a, n) > 1 (gcd(a+1, n) > 1).

    The determinant tests are relative to n^(n/2), the modulus of det of the
    full Vandermonde matrix.
    """
    start = time.perf_counter()
    Q, U, C, V = ucv_matrices(a, n, q0)
    res = _residual(Q - U @ C @ V)
    tol = default_tolerance(n) if tol is None else tol
    passed = bool(res <= tol)
    notes = []
    scale = float(n) ** (n / 2)
    for name, g, M in (("U", math.gcd(a, n), U), ("V", math.gcd(a + 1, n), V)):
        if g > 1:
            d = abs(np.linalg.det(M)) / scale
            notes.append(f"|det {name}|/n^(n/2)={d:.1e}")
            passed = passed and bool(d <= tol)
    return ResidualReport(IdentityId.UCV_FACTOR, n, a, float(q0), res, tol, passed,
                          (time.perf_counter() - start) * 1e3, "; ".join(notes))


def _eval_at_root(f: LaurentPoly, q0: Fraction, n: int) -> float:
    # The expanded determinant cancels heavily (binomial coefficients of
    # alternating sign), so it is evaluated with 50 significant digits.
    with mpmath.workdps(50):
        t = mpmath.root(mpmath.mpf(q0.numerator) / q0.denominator, n)
        return float(mpmath.fsum(c * t ** e for e, c in f.terms()))


@lru_cache(maxsize=64)
def _exact_detq(a: int, n: int) -> LaurentPoly:
    return det_bareiss(build(MatrixSpec(MatrixKind.Q_FRACTIONAL, a, n)))


def numeric_detq_check(a: int, n: int, q0, rel_tol: float = DET_REL_TOL) -> ResidualReport:
    """Floating det(Q) against the exact t-ring determinant evaluated at t = q0^(1/n).

    Uses relative error when the exact value is nonzero; otherwise the
    floating determinant must be below rel_tol times the Hadamard bound.
    """
    start = time.perf_counter()
    q = _check_q0(q0)
    Q, _, _, _ = ucv_matrices(a, n, q0)
    numeric = float(np.linalg.det(Q))
    exact = _exact_detq(a, n)
    target = _eval_at_root(exact, Fraction(q0), n)
    if target != 0:
        res = abs(numeric - target) / abs(target)
    else:
        hadamard = float(np.prod(np.linalg.norm(Q, axis=1)))
        res = abs(numeric) / hadamard
    return ResidualReport(IdentityId.DETQ_NUMERIC, n, a, q, res, rel_tol, bool(res <= rel_tol),
                          (time.perf_counter() - start) * 1e3,
                          f"numeric={numeric:.6g} exact={target:.6g}")


def parse_q0(text: str) -> Fraction:
    return Fraction(text)
