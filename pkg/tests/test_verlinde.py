import math
from fractions import Fraction

import pytest

from daha_lab import verlinde as V
from daha_lab.identities import reduced_product


@pytest.mark.parametrize("N,k", [(5, 1), (7, 1), (7, 2), (9, 2)])
def test_verlinde_dimensions_and_relations(N, k):
    M = V.build_verlinde(N, k)
    assert M.dim == 2 * N - 4 * k
    assert M.sym_dim() == N - 2 * k + 1
    assert all(M.relations().values())


def test_seven_two_example():
    M = V.build_verlinde(7, 2)
    assert (M.dim, M.sym_dim()) == (6, 4)


@pytest.mark.parametrize("N,k", [(5, 1), (7, 2)])
def test_forbidden_points_and_fourier(N, k):
    assert all(V.forbidden_point_check(N, k).values())
    M = V.build_verlinde(N, k)
    F = V.gaussian_and_sigma(M)
    assert all(F.checks.values())
    assert all(V.verlinde_axioms(M, F).values())


def test_unitary_weights_positive_at_minimal_root():
    assert V.unitary_structure(V.build_verlinde(7, 1)).positive


def test_weyl_case_weights_are_one():
    M = V.weyl_module(5)
    rep = V.unitary_structure(M)
    assert rep.positive
    assert set(rep.weights.values()) == {M.field.one}


def test_deformed_small_dims():
    M = V.build_deformed(1)
    assert (M.dim, M.sym_dim()) == (3, 2)
    assert all(M.relations().values())


@pytest.mark.parametrize("m", [1, 2, 3])
def test_deformed_unitarity_branch(m):
    assert V.deformed_unitarity(m, 0.9 * math.pi / m).positive
    assert not V.deformed_unitarity(m, 1.1 * math.pi / m).positive


@pytest.mark.parametrize("N,k", [(5, 1), (7, 2)])
def test_little_module_matches_specialized_deformed(N, k):
    res = V.compare_little(N, k)
    assert res["same points"]
    assert res["X2"] and res["Y2"] and res["T"]


@pytest.mark.parametrize("N,m", [(5, 1), (7, 1), (7, 2), (9, 3)])
def test_gauss_constant_matches_product_formula(N, m):
    # two independent routes: the Fourier matrix of the module, the closed product
    F = V.gaussian_and_sigma(V.build_deformed(m, V.little_root_field(N)))
    assert F.gauss_constant == reduced_product(N, m)


@pytest.mark.parametrize("N,k,sub,quot", [(5, 1, 14, [6]), (5, Fraction(-1, 2), 8, [1, 1])])
def test_classification_examples(N, k, sub, quot):
    r = V.classify(N, k)
    assert r.passed
    assert r.sub_dim == sub
    assert sorted(r.quotient_dims) == sorted(quot)


def test_weyl_annihilator():
    assert all(V.weyl_annihilator_check(3).values())


def test_module_json_has_all_generators():
    blob = V.build_verlinde(5, 1).to_json()
    for g in ("X", "T", "Y"):
        assert len(blob["matrices"][g]) == 6
