import pytest

from daha_lab.rootdata import root_system

TABLE = {  # |W|, |R|, Coxeter number
    "A1": (2, 2, 2),
    "A2": (6, 6, 3),
    "B2": (8, 8, 4),
    "C2": (8, 8, 4),
    "G2": (12, 12, 6),
    "A3": (24, 12, 4),
}


@pytest.mark.parametrize("name", sorted(TABLE))
def test_classical_counts(name):
    R = root_system(name)
    W, roots, h = TABLE[name]
    assert len(R.weyl_group) == W
    assert len(R.roots) == roots
    assert R.coxeter_number == h
    assert R.weyl_length(R.longest_element) == roots // 2


@pytest.mark.parametrize("name", sorted(TABLE))
def test_rho_pairs_to_one_with_simple_coroots(name):
    R = root_system(name)
    for i in range(1, R.rank + 1):
        assert R.simple_reflect(i, R.rho) == tuple(r - a for r, a in zip(R.rho, R.simple_roots[i - 1]))
        assert R.copair(R.rho, R.simple_roots[i - 1]) == 1


@pytest.mark.parametrize("name", sorted(TABLE))
def test_orbits_and_reflections(name):
    R = root_system(name)
    for alpha in R.roots:
        assert R.reflect(alpha, alpha) == tuple(-x for x in alpha)
    rho_orbit = R.orbit(R.rho)
    assert len(rho_orbit) == len(R.weyl_group)


def test_affine_reduced_words():
    R = root_system("A2")
    g = R.affine_simple(0) * R.affine_simple(1)
    assert g.length() == 2
    _, word = g.reduced_word()
    assert word == (0, 1)
    assert (g * g.inverse()).length() == 0


def test_minuscule_weights():
    assert root_system("A3").minuscule == (1, 2, 3)
    assert root_system("G2").minuscule == ()
