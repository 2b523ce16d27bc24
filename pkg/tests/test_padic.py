from hypothesis import given, strategies as st
import pytest

from daha_lab import padic as P
from daha_lab.laurent import LaurentPoly
from daha_lab.scalars import ONE, tpow

elems = st.tuples(st.integers(-8, 8), st.integers(0, 1))


@given(elems, elems, elems)
def test_group_is_associative(a, b, c):
    assert P.w_mul(P.w_mul(a, b), c) == P.w_mul(a, P.w_mul(b, c))


@given(elems)
def test_inverse_and_identity(a):
    assert P.w_mul(a, P.w_inv(a)) == P.ID
    assert P.w_mul(P.ID, a) == a
    assert P.length(P.w_inv(a)) == P.length(a)


@given(st.integers(-10, 10))
def test_pi_representatives_have_length_of_minimal_coset_element(b):
    g = P.pi_rep(b)
    assert P.act_point(g, 0) == b
    assert P.length(g) == min(P.length(g), P.length(P.w_mul(g, P.S1)))


@given(elems)
def test_reduced_word_multiplies_back(g):
    p, word = P.reduced_word(g)
    assert len(word) == P.length(g)
    h = P.PI if p else P.ID
    for i in reversed(word):
        h = P.w_mul(P.simple(i), h)
    assert h == g


def test_reduced_word_products_agree():
    assert P.reduced_word_products(6)


def test_ball_sizes():
    assert len(P.ball_elements(0)) == 2
    assert all(P.length(g) <= 5 for g in P.ball_elements(5))


def test_matsumoto_small_indices():
    assert P.matsumoto_phi(0) == LaurentPoly.monomial((0,), ONE)
    assert P.matsumoto_phi(2) == LaurentPoly.monomial((-2,), tpow(-1))
    assert all(P.matsumoto_recursion_check(8).values())


def test_fdeltas_cases():
    th = P.Frac.monomial(c=1)
    assert P.fdeltas(1, 2) == {-2: th}
    assert P.fdeltas(1, -2) == {2: 1 / th, -2: th - 1 / th}
    # fixed point of s_1: only the diagonal term survives
    assert P.fdeltas(1, 0) == {0: th}


def test_mu1_base_point_and_window():
    assert P.mu1(0) == ONE
    for b in range(-4, 5):
        assert P.mu1(b) == P.mu1_windowed(b)


def test_deformed_regular_relations():
    _, rep = P.deformed_regular(8)
    assert rep.passed


def test_symbolic_entry_formula():
    assert P.symbolic_entry_check()


def test_spherical_module_routes_agree():
    assert P.spherical_module(8).passed


def test_limit_errors_decrease():
    lim = P.limit_check(10)
    assert lim.length_rule
    assert lim.errors[1] < lim.errors[0]
    assert lim.errors[-1] <= 1e-3


def test_limit_rejects_point_outside_alcove():
    with pytest.raises(ValueError):
        P.limit_check(4, xi=1.5)


def test_positivity_of_pairings():
    assert P.positivity(q=0.5, k=0.2)["positive"]


def test_fourier_numeric():
    assert P.fourier_numeric(0.5, 1.0, L=40).passed


@pytest.mark.parametrize("N,k", [(5, 1), (7, 2)])
def test_fourier_at_roots(N, k):
    assert P.fourier_root(N, k).passed
