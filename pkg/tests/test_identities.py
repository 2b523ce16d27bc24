import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from daha_lab import identities as I
from daha_lab.scalars import Cyclotomic, QSeries


def test_classical_gauss_three():
    exact, modulus, value = I.classical_gauss(3)
    assert exact.params["l"] == 2
    one, z = Cyclotomic.const(3, 1), Cyclotomic.zeta(3, 1)
    assert exact.left == one + z + z
    assert exact.passed and modulus.passed and value.passed


@pytest.mark.parametrize("N", [5, 7, 9, 11, 13])
def test_classical_gauss_value(N):
    assert all(c.passed for c in I.classical_gauss(N))


def test_classical_gauss_needs_odd_modulus():
    with pytest.raises(ValueError):
        I.classical_gauss(4)


@pytest.mark.parametrize("N,k", [(3, 1), (5, 2), (7, 3), (6, 3)])
def test_gauss_selberg(N, k):
    cases = I.gauss_selberg_root(N, k)
    assert cases and all(c.passed for c in cases)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_noncyclotomic_formal(m):
    assert I.noncyclotomic_gauss(m).passed


def test_noncyclotomic_numeric_unit_circle():
    q = cmath.exp(0.7j)
    assert I.noncyclotomic_gauss(2, q).passed
    assert all(c.passed for c in I.noncyclotomic_random(3, samples=5, seed=1))


@pytest.mark.parametrize("N,k", [(5, 1), (7, 2)])
def test_little_reduction_and_verlinde(N, k):
    assert I.little_reduction(N, k).passed
    assert I.verlinde_crosscheck(N, k).passed


def test_verlinde_crosscheck_formal():
    assert I.verlinde_crosscheck_formal(2).passed


def test_jackson_first_coefficient():
    lhs = I.jackson_lhs(8)
    assert lhs.coeffs[1] == {1: 1, -1: 1}


def test_series_identities_at_default_order():
    assert I.mehta_const_term(120).passed
    assert I.jackson_identity(100).passed


@settings(max_examples=15)
@given(st.integers(1, 60))
def test_series_identities_at_small_orders(M):
    assert I.mehta_lhs(M) == I.mehta_rhs(M)
    assert I.jackson_lhs(M) == I.jackson_rhs(M)


def test_perturbed_right_side_fails():
    M = 40
    rhs = I.mehta_rhs(M) + QSeries.monomial(M, 36, 2)
    assert I.mehta_lhs(M) != rhs


def test_narrow_window_raises():
    with pytest.raises(I.WindowError):
        I.mehta_lhs(60, window=4)
    assert I.mehta_window(60) >= 2 * math.isqrt(14)


def test_order_limit():
    with pytest.raises(ValueError):
        I.mehta_const_term(300)


def test_case_json_is_stable():
    a = I.jackson_identity(40).to_json()
    b = I.jackson_identity(40).to_json()
    assert a == b
    assert set(a) == {"id", "params", "verdict", "lhs_hash", "rhs_hash", "max_order_checked"}
    assert a["lhs_hash"] == a["rhs_hash"]


def test_suite_parallel_matches_serial():
    serial = I.run_suite("gauss", N=7)
    parallel = I.run_suite("gauss", N=7, jobs=2)
    assert serial == parallel
    assert all(r["verdict"] == "pass" for r in serial)
