import pytest
from fractions import Fraction

from hypothesis import given, strategies as st

from daha_lab import daha as D
from daha_lab.laurent import LaurentPoly
from daha_lab.rootdata import root_system
from daha_lab.scalars import ONE, qpow, tpow

rep = D.rank1()
X, Xi, T, Ti, Y, Yi = D.PBW.X(), D.PBW.X(-1), D.PBW.T(), D.PBW.Tinv(), D.PBW.Y(), D.PBW.Y(-1)
th = tpow(Fraction(1, 2))


def mono(m, c=ONE):
    return LaurentPoly.monomial((m,), c)


def test_T_on_small_monomials():
    assert rep.T(1, rep.one()) == rep.one().scale(th)
    assert rep.T(1, mono(1)) == mono(-1, th.inverse())
    assert rep.T(1, mono(-1)) == mono(1, th) + mono(-1, th - th.inverse())


def test_Y_on_small_monomials():
    assert rep.Y((1,), rep.one()) == rep.one().scale(th)
    assert rep.Y((1,), mono(1)) == mono(1, qpow(Fraction(-1, 2)) * th.inverse())


def test_hecke_quadratic_relation_in_pbw():
    assert T * T == T.scale(th - th.inverse()) + D.PBW.scalar(1)
    assert T * X * T == Xi
    assert T * Yi * T == Y


def test_small_macdonald_polynomials():
    assert D.macdonald((0,)) == rep.one()
    assert D.macdonald((1,)) == mono(1, th)


@pytest.mark.parametrize("b", range(-5, 6))
def test_macdonald_is_normalized_eigenvector(b):
    e = D.macdonald((b,))
    lam = D.MacdonaldBuilder(rep).eigenvalue((b,), (1,))
    assert rep.Y((1,), e) == e.scale(lam)
    assert rep.eval_t_rho(e) == ONE
    assert D.y_eigenvalue_rank1(e) == lam


@pytest.mark.parametrize("m", [-3, -1, 2, 4])
def test_intertwiner_chain_reproduces_macdonald(m):
    assert D.epsilon_by_intertwiners(m) == D.macdonald((m,))


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_duality(b, c):
    assert rep.eval_at_pi(D.macdonald((b,)), (c,)) == rep.eval_at_pi(D.macdonald((c,)), (b,))


def test_F1_is_an_involution_on_generic_eigenvectors():
    for m in (-2, 1, 3):
        e = D.macdonald((m,))
        assert D.intertwiner_F1(D.intertwiner_F1(e)) == e


def test_F1_rejects_resonant_eigenvalue():
    with pytest.raises(ZeroDivisionError):
        D.intertwiner_F1(rep.one(), lam=ONE)


def test_radial_part_of_constants():
    assert rep.radial_part(rep.one()) == rep.one().scale(th + th.inverse())


@pytest.mark.parametrize("m", range(0, 4))
def test_radial_part_on_symmetric_eigenfunctions(m):
    # Y + Y^-1 preserves symmetric polynomials; on them it is the radial part
    f = mono(m) + mono(-m) if m else rep.one()
    full = rep.Y((1,), f) + rep.Y((-1,), f)
    assert rep.radial_part(f) == full


def test_radial_part_requires_symmetry():
    with pytest.raises(ValueError):
        rep.radial_part(mono(1))


def test_tau_plus_fixes_X_and_T():
    tp = D.automorphism("tau_plus")
    assert tp(X) == X
    assert tp(T) == T


def test_sigma_images():
    s = D.automorphism("sigma")
    assert s(X) == Yi
    assert s(T) == T
    assert D.compose("sigma", "sigma_inv")(Y) == Y


def test_sigma_squared_is_inner():
    assert D.inner_power_of_sigma_squared() == -1


@pytest.mark.parametrize("name", ["tau_plus", "tau_minus", "sigma", "epsilon", "iota", "eta", "vs_x", "vs_y"])
def test_automorphisms_respect_relations(name):
    a = D.automorphism(name)
    aT, aX, aY, aXi, aYi = a(T), a(X), a(Y), a(Xi), a(Yi)
    assert aT * aX * aT == aXi
    assert aT * aYi * aT == aY
    qh = qpow(Fraction(-1, 2))
    if name in ("epsilon", "eta"):
        qh = qh.inverse()
    assert aYi * aXi * aY * aX * aT * aT == D.PBW.scalar(qh)


gens = st.sampled_from([X, Xi, T, Ti, Y, Yi])


@given(st.lists(gens, min_size=1, max_size=3), st.lists(gens, min_size=1, max_size=3),
       st.sampled_from(["tau_plus", "tau_minus", "sigma"]))
def test_automorphism_is_multiplicative(left, right, name):
    a = D.automorphism(name)
    A = D.PBW.scalar(1)
    for g in left:
        A = A * g
    B = D.PBW.scalar(1)
    for g in right:
        B = B * g
    assert a(A * B) == a(A) * a(B)


@given(st.lists(gens, min_size=1, max_size=4), st.integers(-3, 3))
def test_pbw_action_is_a_representation(word, m):
    A = D.PBW.scalar(1)
    for g in word:
        A = A * g
    f = mono(m)
    direct = f
    for g in reversed(word):
        direct = g.act(direct)
    assert A.act(f) == direct


def test_tau_minus_as_gaussian_conjugation():
    tm = D.automorphism("tau_minus")
    for m in (-2, 0, 1):
        f = mono(m)
        assert tm(X).act(f) == D.tau_minus_act(X, f, window=4)


def test_higher_rank_quadratic_relation():
    r2 = D.PolyRep(root_system("A2"))
    f = LaurentPoly.monomial((1, -1), ONE)
    for i in range(3):
        Tf = r2.T(i, f)
        assert r2.T(i, Tf) == Tf.scale(r2.c) + f


def test_cache_round_trip(tmp_path):
    D.macdonald((3,))
    n = D.save_cache(str(tmp_path))
    assert n >= 1
    assert (tmp_path / "epsilon_A1.json").exists()
    assert D.load_cache(str(tmp_path)) == n
