from fractions import Fraction

import pytest

from daha_lab import degenerate as dg


@pytest.mark.parametrize("R", ["A1", "A2", "B2"])
def test_trigonometric_dunkl_commute(R):
    td = dg.TrigDunkl(R)
    assert td.check_commutative(3)
    assert all(td.check_cross_relations(2).values())


@pytest.mark.parametrize("R", ["A1", "A2", "B2", "G2"])
def test_rational_dunkl(R):
    rd = dg.RatDunkl(R)
    assert rd.check_commutative(3)
    assert rd.check_cross(3)
    assert rd.check_equivariance(2)


def test_rank_one_dunkl_values():
    ctx = dg._rank1_ctx()
    x, k = ctx.gens()
    assert dg.rank1_dunkl(x) == ctx.constant(1) + k * 2
    assert dg.rank1_dunkl(x ** 2) == x * 2
    assert all(dg.rank1_bracket_check().values())


def test_sl2_trivial_case():
    r = dg.sl2_structure(0)
    assert r.dim == 1
    assert all(r.checks.values())


def test_sl2_spin_half():
    r = dg.sl2_structure(1)
    assert r.sym_dim == 2
    assert sorted(r.h_spectrum_sym) == [-1, 1]


@pytest.mark.parametrize("m", range(7))
def test_sl2_perfect_module(m):
    r = dg.sl2_structure(m)
    assert r.dim == 2 * m + 1
    assert r.sym_dim == m + 1
    assert all(r.checks.values())


@pytest.mark.parametrize("R", ["A1", "A2"])
def test_spectral_operators(R):
    sp = dg.SpectralOps(R)
    assert all(sp.check_polynomial_and_relations(3).values())
    assert all(sp.check_lambda(3).values())


def test_coinvariants_rank_one():
    c = dg.diag_coinvariants("A1")
    assert c.total == 3
    assert c.graded[:2] == [1, 2]
    assert dg.perfect_module_filtration(1) == [1, 2]


def test_coinvariants_A2_dimension():
    c = dg.diag_coinvariants("A2")
    assert c.stabilized
    assert c.total == 16


def test_bernoulli_table():
    assert dg.bernoulli(1) == Fraction(-1, 2)
    assert dg.bernoulli(2) == Fraction(1, 6)
    assert dg.bernoulli(3) == 0


@pytest.mark.parametrize("R", ["A1", "A2"])
def test_lusztig_map(R):
    L = dg.LusztigMap(R, 4)
    assert all(L.check_relations(2).values())
    assert L.check_against_trig(2)


def test_one_step_limit():
    assert all(dg.one_step_limit_rank1().values())
