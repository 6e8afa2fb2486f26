import math

import pytest
from hypothesis import given, settings, strategies as st

from qdet.errors import CoprimeInput, NotCoprime
from qdet.exactring import LaurentPoly, XPoly
from qdet.linalg import det_bareiss
from qdet.ntheory import jacobi
from qdet.qmatrix import MatrixKind, MatrixSpec, build, ceil_exponents, floor_exponents
from qdet.reports import CSV_COLUMNS, IdentityId, VerificationReport, to_csv, to_jsonl
from qdet.verify import (
    SPECIALIZATION_IDS,
    expected_det,
    run_suite,
    verify_adjugate_sums,
    verify_ceil_theorem,
    verify_factorizations,
    verify_floor_theorem,
    verify_prop_detQ,
    verify_prop_Qinv,
    verify_rank_bound,
    verify_rank_one_update,
    verify_specializations,
    verify_x_theorem,
    verify_zolotarev,
    x_floor_rhs,
)

L = LaurentPoly.parse
odd_small = st.integers(0, 5).map(lambda k: 2 * k + 1)


# -- examples -----------------------------------------------------------------

def test_floor_theorem_examples():
    r = verify_floor_theorem(1, 3)
    assert r.passed and r.lhs == r.rhs == "q^-4"
    r = verify_floor_theorem(0, 1)
    assert r.passed and r.lhs == "-q^-1"
    r = verify_floor_theorem(2, 3)
    assert r.passed and r.lhs == r.rhs == "0"


def test_ceil_theorem_examples():
    r = verify_ceil_theorem(1, 3)
    assert r.passed and r.lhs == r.rhs == "-q"
    assert verify_ceil_theorem(0, 1).lhs == "1"
    r = verify_ceil_theorem(4, 5)
    assert r.passed and r.lhs == "0"


def test_x_theorem_examples():
    r = verify_x_theorem(0, 1, "floor")
    assert r.passed and r.lhs == "x + q^-1"
    r = verify_x_theorem(0, 1, "ceil")
    assert r.passed and r.lhs == "x + q"
    r = verify_x_theorem(1, 3, "floor")
    assert r.passed
    q = L("q")
    # jacobi(2, 3) = -1; at x = -1 this must reduce to (q - 1)^3 q^-4
    want = XPoly((1, q)) * (-L("q^-4") * (1 - q) * (1 - q))
    assert x_floor_rhs(1, 3) == want
    assert want.eval_x(-1) == (q - 1) ** 3 * L("q^-4")
    with pytest.raises(ValueError):
        verify_x_theorem(1, 3, "round")


def test_specialization_examples():
    reps = {r.identity: r for r in verify_specializations(1, 3)}
    assert list(reps) == list(SPECIALIZATION_IDS)
    assert reps[IdentityId.COR_NEG1].lhs == "-4" and reps[IdentityId.COR_NEG1].passed
    assert reps[IdentityId.COR_1FLOOR].lhs == "1" and reps[IdentityId.COR_1FLOOR].passed
    r0 = {r.identity: r for r in verify_specializations(0, 1)}
    assert r0[IdentityId.COR_2FLOOR].lhs == "-1/2" and r0[IdentityId.COR_2FLOOR].passed
    assert all(r.passed for r in reps.values())


def test_prop_detq_examples():
    r = verify_prop_detQ(1, 1)
    assert r.passed and r.lhs == "1"
    r = verify_prop_detQ(1, 3)
    assert r.passed
    assert det_bareiss(build(MatrixSpec("q-fractional", 1, 3))) == -(1 - L("t^-3", "t")) ** 2
    r = verify_prop_detQ(2, 3)
    assert r.passed and r.lhs == "0"


def test_prop_qinv_examples():
    for a, n in ((1, 1), (1, 3), (3, 5)):
        assert verify_prop_Qinv(a, n).passed
    assert verify_prop_Qinv(1, 1).lhs == "(1 - t^-1)*I"
    with pytest.raises(NotCoprime):
        verify_prop_Qinv(2, 3)


def test_adjugate_sum_examples():
    for a, n in ((0, 1), (1, 3), (2, 5)):
        s, s2 = verify_adjugate_sums(a, n)
        assert s.identity is IdentityId.SUM_S and s.passed
        assert s2.identity is IdentityId.SUM_SPRIME and s2.passed
    with pytest.raises(NotCoprime):
        verify_adjugate_sums(2, 3)


def test_rank_bound_examples():
    r = verify_rank_bound(2, 9)
    assert r.passed and r.lhs == "rank(A)=3, rank(A')=3"
    r = verify_rank_bound(4, 5)
    assert r.passed and r.lhs == "rank(A)=1, rank(A')=1"
    assert verify_rank_bound(2, 3).passed
    with pytest.raises(CoprimeInput):
        verify_rank_bound(1, 3)


def test_zolotarev_and_factorization_examples():
    assert verify_zolotarev(2, 5).lhs == "-1"
    assert verify_factorizations(1, 3).passed
    assert verify_rank_one_update(1, 3).passed


def test_run_suite_examples():
    reps = run_suite([1], [1, 3], [IdentityId.THM_FLOOR])
    assert [(r.n, r.passed) for r in reps] == [(1, True), (3, True)]
    assert run_suite([1], [1, 3], []) == []


@pytest.mark.slow
def test_run_suite_all_small():
    reps = run_suite(range(-2, 3), [1, 3, 5], list(IdentityId))
    assert reps and not any(r.failed for r in reps)
    assert any(r.skipped for r in reps)


def test_run_suite_skip_semantics():
    reps = run_suite([2], [3], [IdentityId.PROP_QINV, IdentityId.RANK_BOUND])
    by_id = {r.identity: r for r in reps}
    assert by_id[IdentityId.PROP_QINV].skipped and not by_id[IdentityId.PROP_QINV].passed
    assert not by_id[IdentityId.PROP_QINV].failed
    assert by_id[IdentityId.RANK_BOUND].passed


def test_run_suite_default_zolotarev_range():
    reps = run_suite(None, [9], [IdentityId.ZOLOTAREV])
    assert [r.a for r in reps] == list(range(1, 10))
    assert sum(r.skipped for r in reps) == 3


def test_run_suite_ordering_is_parallel_invariant():
    ids = [IdentityId.THM_CEIL, IdentityId.THM_FLOOR, IdentityId.ZOLOTAREV]
    serial = run_suite(range(-2, 3), [1, 3, 5], ids, jobs=1)
    parallel = run_suite(range(-2, 3), [1, 3, 5], ids, jobs=3)
    strip = lambda rs: [(r.identity, r.a, r.n, r.lhs, r.rhs, r.passed, r.skipped) for r in rs]
    assert strip(serial) == strip(parallel)
    assert [r.sort_key() for r in serial] == sorted(r.sort_key() for r in serial)


def test_expected_det_matches_engine():
    for kind in MatrixKind:
        for a in (-2, 1, 3):
            spec = MatrixSpec(kind, a, 5)
            assert det_bareiss(build(spec)) == expected_det(spec), (kind, a)


# -- sweeps and relations ---------------------------------------------------

@pytest.mark.parametrize("n", range(1, 14, 2))
def test_closed_form_sweep(n):
    for a in range(-6, 7):
        assert verify_floor_theorem(a, n).passed
        assert verify_ceil_theorem(a, n).passed
        if n <= 9 and abs(a) <= 3:
            assert verify_x_theorem(a, n, "floor").passed
            assert verify_x_theorem(a, n, "ceil").passed


@settings(max_examples=30, deadline=None)
@given(odd_small, st.integers(-6, 6))
def test_x_determinant_at_minus_one(n, a):
    # x = -1 turns x + q^m into q^m - 1 = (q - 1)[m]_q
    dx = det_bareiss(build(MatrixSpec(MatrixKind.FLOOR_X, a, n)))
    dq = det_bareiss(build(MatrixSpec(MatrixKind.FLOOR_QINT, a, n)))
    assert dx.eval_x(-1) == (L("q") - 1) ** n * dq


@settings(max_examples=30, deadline=None)
@given(odd_small, st.integers(-6, 6))
def test_negation_symmetry(n, a):
    assert floor_exponents(-a - 1, n) == [list(c) for c in zip(*floor_exponents(a, n))]
    assert ceil_exponents(-a - 1, n) == [list(c) for c in zip(*ceil_exponents(a, n))]
    for kind in (MatrixKind.FLOOR_QINT, MatrixKind.CEIL_QINT):
        assert det_bareiss(build(MatrixSpec(kind, a, n))) == \
            det_bareiss(build(MatrixSpec(kind, -a - 1, n)))
    assert jacobi(a * (a + 1), n) == jacobi((-a - 1) * (-a), n)


def test_floor_vanishes_exactly_on_common_factor():
    for n in range(1, 16, 2):
        for a in range(-6, 7):
            d = det_bareiss(build(MatrixSpec(MatrixKind.FLOOR_QINT, a, n)))
            assert (d == 0) == (math.gcd(a * (a + 1), n) > 1)


# -- report serialization -----------------------------------------------------

def test_report_json_and_csv_round_trip():
    import csv
    import io
    import json

    reps = run_suite([1, 2], [3], [IdentityId.THM_FLOOR, IdentityId.PROP_QINV])
    lines = to_jsonl(reps).splitlines()
    objs = [json.loads(s) for s in lines]
    assert set(objs[0]) == {"identity", "a", "n", "pass", "skipped", "lhs", "rhs",
                            "elapsed_ms", "numeric"}
    assert [o["identity"] for o in objs] == [str(r.identity) for r in reps]
    rows = list(csv.reader(io.StringIO(to_csv(reps))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [r[3] for r in rows[1:]] == ["true", "true", "true", "skip"]


def test_report_text():
    r = VerificationReport(IdentityId.THM_FLOOR, 1, 3, "q^-4", "q^-4", True)
    assert r.to_text().startswith("PASS  thm-floor  a=1 n=3")
    assert r.status == "PASS" and not r.failed
