from fractions import Fraction

import numpy as np
import pytest

from qdet.dftcheck import (
    default_tolerance,
    dft_roundtrip,
    numeric_detq_check,
    root_powers,
    ucv_factorization_check,
    ucv_matrices,
    vandermonde_inverse_check,
)
from qdet.errors import BadQ, BadSpec
from qdet.reports import IdentityId


def test_dft_examples():
    for n in (1, 4, 15, 64):
        b = np.zeros(n)
        b[0] = 1
        assert dft_roundtrip(b).residual < 1e-12
    assert dft_roundtrip(np.ones(5)).residual < 1e-12
    rng = np.random.default_rng(15)
    b = rng.normal(size=15) + 1j * rng.normal(size=15)
    assert dft_roundtrip(b).residual < 1e-10


def test_dft_random_round_trips():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 65))
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        rep = dft_roundtrip(b)
        assert rep.passed and rep.residual < 1e-10


def test_vandermonde_examples():
    assert vandermonde_inverse_check(1).residual < 1e-15
    assert vandermonde_inverse_check(3).residual < 1e-13
    assert vandermonde_inverse_check(15).residual < 1e-11


def test_root_powers_reduce_mod_n():
    assert np.allclose(root_powers([0, 3, -3, 6], 3), 1)
    assert np.allclose(root_powers([1], 4), 1j)


def test_ucv_examples():
    Q, U, C, V = ucv_matrices(1, 1, 2)
    assert np.allclose([Q[0, 0], U[0, 0], C[0, 0], V[0, 0]], 1)
    assert ucv_factorization_check(1, 1, 2).residual == pytest.approx(0, abs=1e-15)
    assert ucv_factorization_check(1, 3, 2).residual < 1e-12


def test_singular_vandermonde_side():
    # gcd(a+1, n) = 3 makes V singular; gcd(a, n) = 1 keeps U invertible
    Q, U, C, V = ucv_matrices(2, 9, Fraction(3, 2))
    scale = 9 ** 4.5
    assert abs(np.linalg.det(V)) / scale < 1e-8
    assert abs(np.linalg.det(U)) / scale > 1e-3
    rep = ucv_factorization_check(2, 9, Fraction(3, 2))
    assert rep.passed and "det V" in rep.detail


@pytest.mark.parametrize("q0", [2, Fraction(3, 2), 10])
def test_ucv_sweep(q0):
    for n in range(1, 16, 2):
        for a in range(-3, 4):
            rep = ucv_factorization_check(a, n, q0)
            assert rep.passed and rep.residual <= 1e-9, (a, n, q0, rep)


def test_numeric_det_matches_exact():
    for q0 in (2, Fraction(3, 2), 10):
        for n in (1, 3, 9, 15):
            for a in (-3, 1, 2):
                rep = numeric_detq_check(a, n, q0)
                assert rep.passed and rep.residual <= 1e-8, rep


@pytest.mark.parametrize("q0", [1, 0, -2, float("inf")])
def test_bad_q(q0):
    with pytest.raises(BadQ):
        ucv_matrices(1, 3, q0)


def test_even_n_rejected():
    with pytest.raises(BadSpec):
        ucv_factorization_check(1, 4, 2)


def test_tolerance_scaling():
    assert default_tolerance(3) == 1e-9
    assert default_tolerance(30) == pytest.approx(2e-9)
    assert default_tolerance(3, 100.0) == pytest.approx(1e-7)


def test_as_report():
    rep = ucv_factorization_check(1, 3, 2).as_report()
    assert rep.identity is IdentityId.UCV_FACTOR and rep.numeric and rep.passed
    assert rep.lhs.startswith("residual=")
