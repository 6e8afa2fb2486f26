"""Closed-form right-hand sides and exact comparison against computed determinants.

Each ``verify_*`` function returns :class:`~qdet.reports.VerificationReport`
objects; :func:`run_suite` sweeps identities over parameter ranges.
"""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

import numpy as np

from qdet import dftcheck
from qdet.errors import CoprimeInput, DegreeViolation, NotCoprime, QDetError
from qdet.exactring import LaurentPoly, XPoly
from qdet.linalg import (
    DEFAULT_SAMPLE_POINTS,
    det_bareiss,
    det_rank_one_update,
    grand_adjugate_sum,
    rank_by_evaluation,
)
from qdet.ntheory import jacobi, perm_sign
from qdet.qmatrix import (
    MatrixKind,
    MatrixSpec,
    RingMatrix,
    build,
    build_diagonal_factors,
    build_qinv_numerator,
    ceil_exponents,
    floor_exponents,
    integer_matrix,
)
from qdet.reports import NUMERIC_IDS, IdentityId, VerificationReport, skipped

__all__ = [
    "DEFAULT_A_RANGE",
    "DEFAULT_Q_POINTS",
    "expected_det",
    "run_suite",
    "verify_adjugate_sums",
    "verify_ceil_theorem",
    "verify_factorizations",
    "verify_floor_theorem",
    "verify_prop_Qinv",
    "verify_prop_detQ",
    "verify_rank_bound",
    "verify_rank_one_update",
    "verify_specializations",
    "verify_x_theorem",
    "verify_zolotarev",
]

DEFAULT_A_RANGE = range(-6, 7)
DEFAULT_Q_POINTS = (Fraction(2), Fraction(3, 2), Fraction(10))

_ONE = LaurentPoly.constant(1)


def _v(e: int) -> LaurentPoly:
    return LaurentPoly.monomial(e)


def _half(n: int, k: int) -> int:
    """(k)/2 for the odd-n exponents (1-3n)/2, (n-1)/2, (n+1)/2."""
    if n % 2 == 0:
        raise ValueError("n must be odd")
    assert k % 2 == 0
    return k // 2


def _jac(a: int, n: int) -> int:
    return jacobi(a * (a + 1), n)


def _coprime(a: int, n: int) -> bool:
    return gcd(a * (a + 1), n) == 1


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def floor_rhs(a: int, n: int) -> LaurentPoly:
    return _v(_half(n, 1 - 3 * n)) * (-_jac(a, n))


def ceil_rhs(a: int, n: int) -> LaurentPoly:
    return _v(_half(n, n - 1)) * _jac(a, n)


def x_floor_rhs(a: int, n: int) -> XPoly:
    base = _v(_half(n, 1 - 3 * n)) * ((_ONE - _v(1)) ** (n - 1)) * _jac(a, n)
    return XPoly((base, base * _v(1)))          # base * (1 + q x)


def x_ceil_rhs(a: int, n: int) -> XPoly:
    base = _v(_half(n, n - 1)) * ((_ONE - _v(1)) ** (n - 1)) * _jac(a, n)
    return XPoly((base * _v(1), base))          # base * (x + q)


def detq_rhs(a: int, n: int) -> LaurentPoly:
    """(a(a+1)/n) (1 - t^-n)^(n-1)."""
    return ((_ONE - _v(-n)) ** (n - 1)) * _jac(a, n)


def detq_prime_rhs(a: int, n: int) -> LaurentPoly:
    """(a(a+1)/n) (1 - t^n)^(n-1)."""
    return ((_ONE - _v(n)) ** (n - 1)) * _jac(a, n)


def floor_power_rhs(a: int, n: int) -> LaurentPoly:
    """det[q^floor] = (a(a+1)/n) q^(-(n+1)/2) (1 - q^-1)^(n-1), written in t."""
    return _v(-n * _half(n, n + 1)) * detq_rhs(a, n)


def ceil_power_rhs(a: int, n: int) -> LaurentPoly:
    """det[q^ceil] = (a(a+1)/n) q^((n+1)/2) (1 - q)^(n-1), written in t."""
    return _v(n * _half(n, n + 1)) * detq_prime_rhs(a, n)


_EXPECTED: dict[MatrixKind, Callable[[int, int], object]] = {
    MatrixKind.FLOOR_QINT: floor_rhs,
    MatrixKind.CEIL_QINT: ceil_rhs,
    MatrixKind.FLOOR_X: x_floor_rhs,
    MatrixKind.CEIL_X: x_ceil_rhs,
    MatrixKind.FLOOR_POWER: floor_power_rhs,
    MatrixKind.CEIL_POWER: ceil_power_rhs,
    MatrixKind.Q_FRACTIONAL: detq_rhs,
    MatrixKind.Q_PRIME_FRACTIONAL: detq_prime_rhs,
}


def expected_det(spec: MatrixSpec):
    """Closed-form determinant of any buildable matrix."""
    return _EXPECTED[spec.kind](spec.a, spec.n)


# ---------------------------------------------------------------------------
# report helpers
# ---------------------------------------------------------------------------

def _fmt(x, var: str = "q") -> str:
    if isinstance(x, (LaurentPoly, XPoly)):
        return x.to_str(var)
    return str(x)


def _equality(identity: IdentityId, a: int, n: int, lhs, rhs, start: float,
              var: str = "q", detail: str = "") -> VerificationReport:
    return VerificationReport(identity, a, n, _fmt(lhs, var), _fmt(rhs, var), lhs == rhs,
                              (time.perf_counter() - start) * 1e3, detail=detail)


def _matrix_digest(M: RingMatrix) -> str:
    if M.is_scalar():
        return f"({_fmt(M.rows[0][0], M.variable)})*I"
    h = hashlib.sha256(M.dumps().encode()).hexdigest()[:16]
    return f"matrix:{h}"


def _in_q(A: RingMatrix, n: int) -> RingMatrix:
    # power-matrix entries are t^(n m); working in q = t^n and inflating the
    # result back is exact and keeps the polynomial degrees n times smaller
    return A.map(lambda f: LaurentPoly.coerce(f).deflate(n), "q")


def _check_odd(n: int) -> None:
    MatrixSpec(MatrixKind.FLOOR_QINT, 0, n)


# ---------------------------------------------------------------------------
# theorems
# ---------------------------------------------------------------------------

def verify_floor_theorem(a: int, n: int) -> VerificationReport:
    start = time.perf_counter()
    rhs = floor_rhs(a, n)
    lhs = det_bareiss(build(MatrixSpec(MatrixKind.FLOOR_QINT, a, n)))
    return _equality(IdentityId.THM_FLOOR, a, n, lhs, rhs, start)


def verify_ceil_theorem(a: int, n: int) -> VerificationReport:
    start = time.perf_counter()
    rhs = ceil_rhs(a, n)
    lhs = det_bareiss(build(MatrixSpec(MatrixKind.CEIL_QINT, a, n)))
    return _equality(IdentityId.THM_CEIL, a, n, lhs, rhs, start)


def verify_x_theorem(a: int, n: int, kind: str = "floor") -> VerificationReport:
    """Determinant of [x + q^floor] (or ceil) over Laurent-coefficient x-polynomials.

    Raises DegreeViolation if the determinant is not linear in x.
    """
    start = time.perf_counter()
    if kind == "floor":
        ident, mk, rhs = IdentityId.THM_X_FLOOR, MatrixKind.FLOOR_X, x_floor_rhs(a, n)
    elif kind == "ceil":
        ident, mk, rhs = IdentityId.THM_X_CEIL, MatrixKind.CEIL_X, x_ceil_rhs(a, n)
    else:
        raise ValueError(f"kind must be 'floor' or 'ceil', got {kind!r}")
    lhs = det_bareiss(build(MatrixSpec(mk, a, n)))
    if lhs.degree > 1:
        raise DegreeViolation(f"determinant has x-degree {lhs.degree} for a={a}, n={n}")
    return _equality(ident, a, n, lhs, rhs, start, detail=f"x-degree {lhs.degree}")


# ---------------------------------------------------------------------------
# integer and rational specializations
# ---------------------------------------------------------------------------

def _sign_power(m: int) -> int:
    return -1 if m % 2 else 1


def _pow2(m: int) -> Fraction:
    return Fraction(2) ** m


def _specialization(ident: IdentityId, a: int, n: int) -> VerificationReport:
    _check_odd(n)
    start = time.perf_counter()
    jac = _jac(a, n)
    if ident is IdentityId.COR_NEG1:
        # both determinants must agree with each other as well as the RHS
        rhs = jac * _sign_power(_half(n, n + 1)) * 2 ** (n - 1)
        d_floor = det_bareiss(integer_matrix(floor_exponents(a, n), _sign_power))
        d_ceil = det_bareiss(integer_matrix(ceil_exponents(a, n), _sign_power))
        rep = _equality(ident, a, n, d_floor, rhs, start, detail=f"ceiling determinant {d_ceil}")
        rep.passed = rep.passed and d_ceil == d_floor
        return rep
    table, entry, rhs = {
        IdentityId.COR_1FLOOR: ("floor", int, -jac),
        IdentityId.COR_2FLOOR: ("floor", lambda m: _pow2(m) - 1, -jac * _pow2(_half(n, 1 - 3 * n))),
        IdentityId.COR_1CEIL: ("ceil", int, jac),
        IdentityId.COR_2CEIL: ("ceil", lambda m: _pow2(m) - 1, jac * _pow2(_half(n, n - 1))),
        IdentityId.COR_2POW_FLOOR: ("floor", _pow2, jac * _pow2(_half(n, 1 - 3 * n))),
        IdentityId.COR_2POW_CEIL: ("ceil", _pow2, jac * _pow2(_half(n, n + 1))),
    }[ident]
    ex = floor_exponents(a, n) if table == "floor" else ceil_exponents(a, n)
    lhs = det_bareiss(integer_matrix(ex, entry))
    return _equality(ident, a, n, lhs, rhs, start)


SPECIALIZATION_IDS = (
    IdentityId.COR_1FLOOR, IdentityId.COR_2FLOOR, IdentityId.COR_1CEIL, IdentityId.COR_2CEIL,
    IdentityId.COR_NEG1, IdentityId.COR_2POW_FLOOR, IdentityId.COR_2POW_CEIL,
)


def verify_specializations(a: int, n: int) -> list[VerificationReport]:
    """The seven q -> 1, q = 2, q = -1 and x = 0 consequences, in exact arithmetic.

    Order: [floor] = -jac, [2^floor - 1], [ceil] = jac, [2^ceil - 1],
    both (-1)^floor and (-1)^ceil, [2^floor], [2^ceil].
    """
    return [_specialization(ident, a, n) for ident in SPECIALIZATION_IDS]


# ---------------------------------------------------------------------------
# fractional-part matrix, adjugate sums, rank, permutation signs
# ---------------------------------------------------------------------------

def verify_prop_detQ(a: int, n: int) -> VerificationReport:
    start = time.perf_counter()
    rhs = detq_rhs(a, n)
    lhs = det_bareiss(build(MatrixSpec(MatrixKind.Q_FRACTIONAL, a, n)))
    return _equality(IdentityId.PROP_DETQ, a, n, lhs, rhs, start, var="t")


def verify_prop_Qinv(a: int, n: int) -> VerificationReport:
    """Q F = (1 - t^-n) I, i.e. Q^-1 = F / (1 - q^-1)."""
    if not _coprime(a, n):
        raise NotCoprime(f"gcd(a(a+1), n) > 1 for a={a}, n={n}")
    start = time.perf_counter()
    Q = build(MatrixSpec(MatrixKind.Q_FRACTIONAL, a, n))
    F = build_qinv_numerator(a, n)
    lhs = Q @ F
    rhs = RingMatrix.identity(n, _ONE - _v(-n), "t")
    return VerificationReport(IdentityId.PROP_QINV, a, n, _matrix_digest(lhs), _matrix_digest(rhs),
                              lhs == rhs, (time.perf_counter() - start) * 1e3)


def verify_adjugate_sums(a: int, n: int) -> list[VerificationReport]:
    """1^T adj(A) 1 = t^n det(A) and 1^T adj(A') 1 = t^-n det(A'), in t."""
    if not _coprime(a, n):
        raise NotCoprime(f"gcd(a(a+1), n) > 1 for a={a}, n={n}")
    out = []
    for ident, kind, shift in ((IdentityId.SUM_S, MatrixKind.FLOOR_POWER, n),
                               (IdentityId.SUM_SPRIME, MatrixKind.CEIL_POWER, -n)):
        start = time.perf_counter()
        A = _in_q(build(MatrixSpec(kind, a, n)), n)
        lhs = grand_adjugate_sum(A).inflate(n)
        rhs = det_bareiss(A).inflate(n).shift(shift)
        out.append(_equality(ident, a, n, lhs, rhs, start, var="t"))
    return out


def verify_rank_bound(a: int, n: int, sample_points: Sequence = DEFAULT_SAMPLE_POINTS
                      ) -> VerificationReport:
    if _coprime(a, n):
        raise CoprimeInput(f"gcd(a(a+1), n) = 1 for a={a}, n={n}; rank bound needs a common factor")
    start = time.perf_counter()
    r = rank_by_evaluation(build(MatrixSpec(MatrixKind.FLOOR_POWER, a, n)), sample_points)
    r2 = rank_by_evaluation(build(MatrixSpec(MatrixKind.CEIL_POWER, a, n)), sample_points)
    return VerificationReport(IdentityId.RANK_BOUND, a, n, f"rank(A)={r}, rank(A')={r2}",
                              f"<= {n}/3", 3 * r <= n and 3 * r2 <= n,
                              (time.perf_counter() - start) * 1e3)


def verify_zolotarev(a: int, n: int) -> VerificationReport:
    start = time.perf_counter()
    rhs = jacobi(a, n)
    lhs = perm_sign(a, n)
    return _equality(IdentityId.ZOLOTAREV, a, n, lhs, rhs, start)


def verify_factorizations(a: int, n: int) -> VerificationReport:
    """A = B Q C and A' = B' Q' C' as exact t-ring matrix products."""
    start = time.perf_counter()
    A = build(MatrixSpec(MatrixKind.FLOOR_POWER, a, n))
    B, C = build_diagonal_factors(A.spec)
    Q = build(MatrixSpec(MatrixKind.Q_FRACTIONAL, a, n))
    A2 = build(MatrixSpec(MatrixKind.CEIL_POWER, a, n))
    B2, C2 = build_diagonal_factors(A2.spec)
    Q2 = build(MatrixSpec(MatrixKind.Q_PRIME_FRACTIONAL, a, n))
    P, P2 = B @ Q @ C, B2 @ Q2 @ C2
    return VerificationReport(
        IdentityId.FACTOR_BQC, a, n,
        f"{_matrix_digest(A)}; {_matrix_digest(A2)}",
        f"{_matrix_digest(P)}; {_matrix_digest(P2)}",
        A == P and A2 == P2, (time.perf_counter() - start) * 1e3)


def verify_rank_one_update(a: int, n: int) -> VerificationReport:
    """det(J - A) three ways: directly, by the rank-one update of -A, and as
    (1 - q)^n times the q-integer floor determinant (carried into t)."""
    start = time.perf_counter()
    A = _in_q(build(MatrixSpec(MatrixKind.FLOOR_POWER, a, n)), n)
    ones = [_ONE] * n
    direct = det_bareiss(RingMatrix.from_function(n, lambda j, k: _ONE) - A).inflate(n)
    update = det_rank_one_update(-A, ones, ones).inflate(n)
    qint = det_bareiss(build(MatrixSpec(MatrixKind.FLOOR_QINT, a, n)))
    via_qint = ((_ONE - _v(1)) ** n * qint).inflate(n)
    rep = _equality(IdentityId.RANK_ONE_UPDATE, a, n, update, direct, start, var="t",
                    detail="(1-q)^n det[[floor]_q] " + ("agrees" if via_qint == direct else "DIFFERS"))
    rep.passed = rep.passed and via_qint == direct
    return rep


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------

def _numeric(fn, *args) -> VerificationReport:
    return fn(*args).as_report()


def _dft_case(n: int, tol: float | None) -> VerificationReport:
    b = np.random.default_rng(n).normal(size=(n, 2)) @ np.array([1, 1j])
    return dftcheck.dft_roundtrip(b, tol).as_report()


# identity -> (runner(a, n, q_points, tol) -> list of reports, hypothesis)
# hypothesis: None (always), "coprime", "noncoprime", "unit" (gcd(a, n) = 1)
_REGISTRY: dict[IdentityId, tuple[Callable, str | None]] = {
    IdentityId.THM_FLOOR: (lambda a, n, qs, tol: [verify_floor_theorem(a, n)], None),
    IdentityId.THM_CEIL: (lambda a, n, qs, tol: [verify_ceil_theorem(a, n)], None),
    IdentityId.THM_X_FLOOR: (lambda a, n, qs, tol: [verify_x_theorem(a, n, "floor")], None),
    IdentityId.THM_X_CEIL: (lambda a, n, qs, tol: [verify_x_theorem(a, n, "ceil")], None),
    IdentityId.PROP_DETQ: (lambda a, n, qs, tol: [verify_prop_detQ(a, n)], None),
    IdentityId.PROP_QINV: (lambda a, n, qs, tol: [verify_prop_Qinv(a, n)], "coprime"),
    IdentityId.SUM_S: (lambda a, n, qs, tol: verify_adjugate_sums(a, n)[:1], "coprime"),
    IdentityId.SUM_SPRIME: (lambda a, n, qs, tol: verify_adjugate_sums(a, n)[1:], "coprime"),
    IdentityId.RANK_BOUND: (lambda a, n, qs, tol: [verify_rank_bound(a, n)], "noncoprime"),
    IdentityId.ZOLOTAREV: (lambda a, n, qs, tol: [verify_zolotarev(a, n)], "unit"),
    IdentityId.FACTOR_BQC: (lambda a, n, qs, tol: [verify_factorizations(a, n)], None),
    IdentityId.RANK_ONE_UPDATE: (lambda a, n, qs, tol: [verify_rank_one_update(a, n)], None),
    IdentityId.UCV_FACTOR: (
        lambda a, n, qs, tol: [_numeric(dftcheck.ucv_factorization_check, a, n, q, tol) for q in qs], None),
    IdentityId.DETQ_NUMERIC: (
        lambda a, n, qs, tol: [_numeric(dftcheck.numeric_detq_check, a, n, q) for q in qs], None),
    IdentityId.DFT_ROUNDTRIP: (lambda a, n, qs, tol: [_dft_case(n, tol)], None),
    IdentityId.VANDERMONDE_INV: (
        lambda a, n, qs, tol: [_numeric(dftcheck.vandermonde_inverse_check, n, tol)], None),
}
for _ident in SPECIALIZATION_IDS:
    _REGISTRY[_ident] = ((lambda i: lambda a, n, qs, tol: [_specialization(i, a, n)])(_ident), None)

# identities that depend on n only; swept once per n with a = 0
_N_ONLY = frozenset({IdentityId.DFT_ROUNDTRIP, IdentityId.VANDERMONDE_INV})


def _hypothesis_gap(req: str | None, a: int, n: int) -> str | None:
    if req == "coprime" and not _coprime(a, n):
        return "needs gcd(a(a+1), n) = 1"
    if req == "noncoprime" and _coprime(a, n):
        return "needs gcd(a(a+1), n) > 1"
    if req == "unit" and gcd(a, n) != 1:
        return "needs gcd(a, n) = 1"
    return None


def _run_case(case: tuple) -> list[VerificationReport]:
    ident_value, a, n, q_points, tol = case
    ident = IdentityId(ident_value)
    runner, req = _REGISTRY[ident]
    gap = _hypothesis_gap(req, a, n)
    if gap:
        return [skipped(ident, a, n, gap)]
    try:
        return runner(a, n, q_points, tol)
    except QDetError as exc:
        return [VerificationReport(ident, a, n, "", "", False, numeric=ident in NUMERIC_IDS,
                                   detail=f"{exc.code}: {exc}")]


def _cases(a_range, n_range, identities, q_points, tol) -> list[tuple]:
    ns = sorted(set(n_range))
    for n in ns:
        _check_odd(n)
    cases = []
    for ident in sorted({IdentityId(i) for i in identities}, key=lambda i: i.order):
        for n in ns:
            if ident in _N_ONLY:
                a_values: Iterable[int] = (0,)
            elif a_range is None:
                a_values = range(1, n + 1) if ident is IdentityId.ZOLOTAREV else DEFAULT_A_RANGE
            else:
                a_values = a_range
            for a in sorted(set(a_values)):
                cases.append((ident.value, a, n, tuple(q_points), tol))
    return cases


def run_suite(a_range: Iterable[int] | None, n_range: Iterable[int],
              identities: Iterable[IdentityId], jobs: int = 1,
              q_points: Sequence = DEFAULT_Q_POINTS,
              tol: float | None = None) -> list[VerificationReport]:
    """Sweep identities over the Cartesian product of parameters.

    ``a_range=None`` uses -6..6, except for the permutation-sign identity,
    which then sweeps the full residue system 1..n. Results are ordered by
    (identity, n, a) whatever the degree of parallelism. Cases whose
    hypothesis is unmet come back SKIPPED; errors come back as failures.
    ``tol`` overrides the absolute tolerance of the floating-point residuals.
    """
    cases = _cases(a_range, n_range, identities, q_points, tol)
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_case, cases, chunksize=max(1, len(cases) // (4 * jobs))))
    else:
        chunks = [_run_case(c) for c in cases]
    reports = [r for chunk in chunks for r in chunk]
    reports.sort(key=VerificationReport.sort_key)
    return reports


def default_jobs() -> int:
    env = os.environ.get("QDET_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1
