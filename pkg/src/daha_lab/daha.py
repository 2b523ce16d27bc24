"""Double affine Hecke algebra: polynomial representation, rank-one PBW
algebra, automorphisms, intertwiners and nonsymmetric Macdonald polynomials.

With a single ``t`` for all root lengths the ``rho`` entering eigenvalues
and evaluation points is ``rho_t``, half the sum of positive coroots; it
equals ``rho`` for simply-laced systems.

Scalars are ``RatFunc`` values.  The symbol ``u`` of ``RatFunc`` stands for
``q^(1/D)`` where ``D`` is fixed per root system (``D = 4`` in rank one, so
``u = q^(1/4)`` there); ``v`` is always ``t^(1/2)``.  All root labels share
the same ``t``.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .laurent import LaurentPoly, divide_rank1
from .rootdata import ExtWeylElem, RootSystem, pi_u_decompose, root_system
from .scalars import ONE, ZERO, RatFunc, V

__all__ = [
    "PolyRep",
    "PBW",
    "Automorphism",
    "automorphism",
    "MacdonaldBuilder",
    "rank1",
    "qdenominator",
]


def qdenominator(R: RootSystem) -> int:
    """Smallest ``D`` divisible by 4 with ``D (P, P)`` integral."""
    d = 4
    for row in R.gram:
        for x in row:
            d = math.lcm(d, Fraction(x).denominator)
    return d


class PolyRep:
    """Demazure-Lusztig operators on Laurent polynomials ``Q(q,t)[X_b]``."""

    def __init__(self, R: RootSystem, D: int | None = None):
        self.R = R
        self.D = D or qdenominator(R)
        self.rank = R.rank
        self.th = V
        self.c = V - V.inverse()
        self._T_cache: dict = {}
        self._Y_words = {}
        self._lock = threading.Lock()

    # -- scalars ----------------------------------------------------------
    def q(self, e) -> RatFunc:
        e = Fraction(e) * self.D
        if e.denominator != 1:
            raise ValueError(f"q-exponent {e / self.D} not representable with D={self.D}")
        return RatFunc.monomial(int(e), 0)

    def t(self, e) -> RatFunc:
        e = Fraction(e) * 2
        if e.denominator != 1:
            raise ValueError("t-exponent must be a half-integer")
        return RatFunc.monomial(0, int(e))

    def one(self) -> LaurentPoly:
        return LaurentPoly.const(ONE, self.rank)

    def X(self, b, coeff=ONE) -> LaurentPoly:
        return LaurentPoly.monomial(tuple(b), coeff)

    # -- reflections and Demazure-Lusztig operators -------------------------
    def _z_data(self, i: int, b: tuple):
        """``(Z exponent, q-power of Z, e)`` with ``s_i X_b = X_b Z^e``."""
        R = self.R
        if i == 0:
            return tuple(-x for x in R.theta), 1, int(R.pair(b, R.theta))
        return R.simple_roots[i - 1], 0, -b[i - 1]

    def _zpow(self, zexp, zq, j):
        return tuple(j * x for x in zexp), self.q(zq * j) if zq else ONE

    def s(self, i: int, f: LaurentPoly) -> LaurentPoly:
        out = {}
        for b, coef in f.items():
            zexp, zq, e = self._z_data(i, b)
            ze, zc = self._zpow(zexp, zq, e)
            key = tuple(x + y for x, y in zip(b, ze))
            val = coef * zc
            out[key] = out[key] + val if key in out else val
        return LaurentPoly(out)

    def _T_monomial(self, i: int, b: tuple) -> LaurentPoly:
        key = (i, b)
        cached = self._T_cache.get(key)
        if cached is not None:
            return cached
        zexp, zq, e = self._z_data(i, b)
        terms: dict = {}

        def put(j, coeff):
            ze, zc = self._zpow(zexp, zq, j)
            k = tuple(x + y for x, y in zip(b, ze))
            val = coeff * zc
            terms[k] = terms[k] + val if k in terms else val

        put(e, self.th)
        if e > 0:
            for j in range(e):
                put(j, self.c)
        elif e < 0:
            for j in range(e, 0):
                put(j, -self.c)
        res = LaurentPoly(terms)
        self._T_cache[key] = res
        return res

    def T(self, i: int, f: LaurentPoly) -> LaurentPoly:
        out = LaurentPoly()
        for b, coef in f.items():
            out = out + self._T_monomial(i, b).scale(coef)
        return out

    def Tinv(self, i: int, f: LaurentPoly) -> LaurentPoly:
        return self.T(i, f) - f.scale(self.c)

    def weyl_act(self, g: ExtWeylElem, f: LaurentPoly) -> LaurentPoly:
        """``X_b -> X_{g([b,0])}`` with ``X_{[b,j]} = q^j X_b``."""
        R = self.R
        out = {}
        for b, coef in f.items():
            wb = g.act_linear(b)
            lvl = -R.pair(wb, g.c)
            key = tuple(int(x) for x in wb)
            val = coef * self.q(lvl) if lvl else coef
            out[key] = out[key] + val if key in out else val
        return LaurentPoly(out)

    def _fund_word(self, i: int):
        if i not in self._Y_words:
            pi, word = self.R.translation(self.R.omega(i)).reduced_word()
            self._Y_words[i] = (pi, pi.inverse(), word)
        return self._Y_words[i]

    def Y_fund(self, i: int, f: LaurentPoly, inverse: bool = False) -> LaurentPoly:
        pi, pinv, word = self._fund_word(i)
        if not inverse:
            for j in reversed(word):
                f = self.T(j, f)
            return self.weyl_act(pi, f)
        f = self.weyl_act(pinv, f)
        for j in word:
            f = self.Tinv(j, f)
        return f

    def Y(self, b, f: LaurentPoly) -> LaurentPoly:
        for i, l in enumerate(b, start=1):
            for _ in range(abs(l)):
                f = self.Y_fund(i, f, inverse=l < 0)
        return f

    def X_mul(self, b, f: LaurentPoly) -> LaurentPoly:
        return f.shift(tuple(b))

    def T_word(self, word: Iterable[int], f: LaurentPoly) -> LaurentPoly:
        for j in reversed(tuple(word)):
            f = self.T(j, f)
        return f

    def T_elem(self, g: ExtWeylElem, f: LaurentPoly) -> LaurentPoly:
        """``T_g`` through the deterministic reduced decomposition of ``g``."""
        pi, word = g.reduced_word()
        return self.weyl_act(pi, self.T_word(word, f))

    # -- rank one extras -------------------------------------------------------
    def p(self, f: LaurentPoly, power: int = 1) -> LaurentPoly:
        """Shift ``x -> x + power/2``: ``X^m -> q^(power m / 2) X^m`` (rank one)."""
        return LaurentPoly({e: c * self.q(Fraction(power * e[0], 2)) for e, c in f.items()})

    def s_rank1(self, f: LaurentPoly) -> LaurentPoly:
        return LaurentPoly({(-e[0],): c for e, c in f.items()})

    def radial_part(self, f: LaurentPoly) -> LaurentPoly:
        """The restriction of ``Y + Y^-1`` to symmetric polynomials (rank one)."""
        if self.rank != 1:
            raise ValueError("radial part is implemented in rank one")
        if not f.is_symmetric_rank1():
            raise ValueError("radial part needs a symmetric polynomial")
        th, thi = self.th, self.th.inverse()
        a = LaurentPoly({(1,): th, (-1,): -thi})
        b = LaurentPoly({(-1,): th, (1,): -thi})
        num = a * self.p(f, 1) - b * self.p(f, -1)
        return divide_rank1(num, 2, shift=-1)

    def eval_at(self, f: LaurentPoly, value: Callable):
        total = ZERO
        for e, c in f.items():
            total = total + c * value(e)
        return total

    def eval_t_rho(self, f: LaurentPoly) -> RatFunc:
        """Evaluation at ``X_b = t^{-(b, rho_t)}``."""
        R = self.R
        return self.eval_at(f, lambda e: self.t(-R.pair(e, R.rho_vee)))

    def star(self, f: LaurentPoly) -> LaurentPoly:
        """``X_b -> X_{-b}``, ``q -> q^-1``, ``t -> t^-1``."""
        return LaurentPoly({tuple(-x for x in e): c.invert_parameters() for e, c in f.items()})

    def eval_at_pi(self, f: LaurentPoly, c, q_sign: int = 1) -> RatFunc:
        """``X_a -> q^{(a,c)} t^{-(a, u_c^{-1}(rho_t))}``.

        This is ``X_a -> 1/lambda_c(Y_a)`` for the ``Y``-spectrum of
        ``epsilon_c``; with it the evaluation is symmetric in ``b, c``.
        ``q_sign=-1`` flips the sign of the ``q``-exponent.
        """
        R = self.R
        _, u = pi_u_decompose(R, c)
        urho = R.finite(R.weyl_inverse(u)).act_linear(R.rho_vee)
        return self.eval_at(f, lambda e: self.q(q_sign * R.pair(e, c)) * self.t(-R.pair(e, urho)))


@lru_cache(maxsize=None)
def rank1() -> PolyRep:
    return PolyRep(root_system("A1"), 4)


# --------------------------------------------------------------------------
# Rank-one PBW algebra  X^a T^e Y^b
# --------------------------------------------------------------------------

def _geom(e: int) -> dict[int, int]:
    """Coefficients of ``(W^e - 1)/(W - 1)`` as ``{power: coeff}``."""
    if e > 0:
        return {j: 1 for j in range(e)}
    if e < 0:
        return {j: -1 for j in range(e, 0)}
    return {}


def _R(m: int) -> dict[int, int]:
    """``(X^-m - X^m)/(X^2 - 1) = X^m G_{-m}(X^2)``."""
    return {m + 2 * j: c for j, c in _geom(-m).items()}


def _S(f: int) -> dict[int, int]:
    """``(Y^f - Y^-f)/(Y^-2 - 1) = Y^-f G_{-f}(Y^-2)``."""
    return {-f - 2 * j: c for j, c in _geom(-f).items()}


_Q = lambda e: RatFunc.monomial(int(Fraction(e) * 4), 0)  # noqa: E731
_C = V - V.inverse()


def _acc(out: dict, key, val):
    if key in out:
        s = out[key] + val
        if s:
            out[key] = s
        else:
            del out[key]
    elif val:
        out[key] = val


def _right_T(mono, coeff, out: dict):
    """``coeff * X^m T^d Y^f * T`` accumulated into ``out``."""
    m, d, f = mono
    if d == 0:
        _acc(out, (m, 1, -f), coeff)
    else:
        _acc(out, (m, 1, -f), coeff * _C)
        _acc(out, (m, 0, -f), coeff)
    for j, c in _S(f).items():
        _acc(out, (m, d, j), -coeff * _C * c)


@lru_cache(maxsize=None)
def _Y_times_X(sign: int, m: int) -> tuple:
    """Normal form of ``Y^sign X^m`` as a tuple of ``((a, e, b), coeff)``."""
    out: dict = {}
    if sign > 0:
        _acc(out, (m, 0, 1), _Q(Fraction(-m, 2)))
        for j, r in _R(m).items():
            _acc(out, (-j, 1, -1), _C * _Q(Fraction(j, 2)) * r)
    else:
        pref = _Q(Fraction(m, 2))
        _acc(out, (m, 1, -1), pref * _C)
        _acc(out, (m, 0, -1), pref)
        for j, r in _R(-m).items():
            _acc(out, (j, 1, -1), pref * _C * r)
        _acc(out, (-m, 1, -1), -pref * _C)
    return tuple(out.items())


@lru_cache(maxsize=None)
def _left_Y(sign: int, mono: tuple) -> tuple:
    m, d, f = mono
    out: dict = {}
    for (a, e, b), coeff in _Y_times_X(sign, m):
        if d:
            tmp: dict = {}
            _right_T((a, e, b), coeff, tmp)
            for (a2, e2, b2), c2 in tmp.items():
                _acc(out, (a2, e2, b2 + f), c2)
        else:
            _acc(out, (a, e, b + f), coeff)
    return tuple(out.items())


@lru_cache(maxsize=None)
def _left_T(mono: tuple) -> tuple:
    m, d, f = mono
    out: dict = {}
    if d == 0:
        _acc(out, (-m, 1, f), ONE)
        for j, r in _R(m).items():
            _acc(out, (j, 0, f), _C * r)
    else:
        _acc(out, (-m, 1, f), _C)
        _acc(out, (-m, 0, f), ONE)
        for j, r in _R(m).items():
            _acc(out, (j, 1, f), _C * r)
    return tuple(out.items())


@lru_cache(maxsize=65536)
def _mono_product(left: tuple, right: tuple) -> tuple:
    a, e, b = left
    cur: dict = {right: ONE}
    sign = 1 if b > 0 else -1
    for _ in range(abs(b)):
        nxt: dict = {}
        for mono, coeff in cur.items():
            for m2, c2 in _left_Y(sign, mono):
                _acc(nxt, m2, coeff * c2)
        cur = nxt
    if e:
        nxt = {}
        for mono, coeff in cur.items():
            for m2, c2 in _left_T(mono):
                _acc(nxt, m2, coeff * c2)
        cur = nxt
    return tuple(((x + a, y, z), c) for (x, y, z), c in cur.items())


class PBW:
    """Element ``sum c X^a T^e Y^b`` (``e`` in {0, 1}) of the rank-one DAHA."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    # -- constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, c) -> "PBW":
        return cls({(0, 0, 0): RatFunc.const(c) if not isinstance(c, RatFunc) else c})

    @classmethod
    def mono(cls, a: int = 0, e: int = 0, b: int = 0, c=ONE) -> "PBW":
        return cls({(a, e, b): c})

    @classmethod
    def X(cls, a: int = 1) -> "PBW":
        return cls.mono(a, 0, 0)

    @classmethod
    def Y(cls, b: int = 1) -> "PBW":
        return cls.mono(0, 0, b)

    @classmethod
    def T(cls) -> "PBW":
        return cls.mono(0, 1, 0)

    @classmethod
    def Tinv(cls) -> "PBW":
        return cls({(0, 1, 0): ONE, (0, 0, 0): -_C})

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "PBW") -> "PBW":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return PBW(out)

    def __neg__(self) -> "PBW":
        return PBW({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "PBW") -> "PBW":
        return self + (-other)

    def scale(self, s) -> "PBW":
        return PBW({k: v * s for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PBW):
            return self.scale(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                coeff = v1 * v2
                for k, c in _mono_product(k1, k2):
                    _acc(out, k, coeff * c)
        return PBW(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "PBW":
        if n < 0:
            raise ValueError("use explicit inverses")
        out = PBW.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PBW):
            return NotImplemented
        return self.terms.keys() == other.terms.keys() and all(
            self.terms[k] == other.terms[k] for k in self.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def map_coeffs(self, fn: Callable) -> "PBW":
        return PBW({k: fn(v) for k, v in self.terms.items()})

    # -- action on polynomials ------------------------------------------------
    def act(self, f: LaurentPoly, rep: PolyRep | None = None) -> LaurentPoly:
        rep = rep or rank1()
        cache: dict = {}
        out = LaurentPoly()
        for (a, e, b), c in self.terms.items():
            if b not in cache:
                cache[b] = rep.Y((b,), f)
            g = cache[b]
            if e:
                g = rep.T(1, g)
            out = out + g.shift((a,), c)
        return out

    def to_json(self) -> list:
        return [[list(k), v.to_json()] for k, v in sorted(self.terms.items())]

    def __repr__(self) -> str:
        parts = [f"({v})*X^{a}T^{e}Y^{b}" for (a, e, b), v in sorted(self.terms.items())]
        return "PBW(" + " + ".join(parts) + ")"


# --------------------------------------------------------------------------
# Automorphisms of the rank-one DAHA
# --------------------------------------------------------------------------

class Automorphism:
    """A (semi)linear map given on generators and on scalars."""

    def __init__(self, name: str, images: dict, coeff_map: Callable | None = None):
        self.name = name
        self.images = images  # keys: "X", "Xi", "T", "Y", "Yi"
        self.coeff_map = coeff_map
        self._pow_cache: dict = {}

    def _power(self, key: str, n: int) -> PBW:
        if n == 0:
            return PBW.scalar(1)
        ck = (key, n)
        if ck not in self._pow_cache:
            self._pow_cache[ck] = self._power(key, n - 1) * self.images[key]
        return self._pow_cache[ck]

    def __call__(self, A: PBW) -> PBW:
        out = PBW()
        for (a, e, b), c in A.terms.items():
            img = self._power("X" if a >= 0 else "Xi", abs(a))
            if e:
                img = img * self.images["T"]
            img = img * self._power("Y" if b >= 0 else "Yi", abs(b))
            coeff = self.coeff_map(c) if self.coeff_map else c
            out = out + img.scale(coeff)
        return out

    def then(self, other: "Automorphism") -> "Automorphism":
        """``other after self``: ``A -> other(self(A))``."""
        first = self

        def images():
            return {k: other(v) for k, v in first.images.items()}

        cm1, cm2 = self.coeff_map, other.coeff_map
        if cm1 and cm2:
            cm = lambda c: cm2(cm1(c))  # noqa: E731
        else:
            cm = cm1 or cm2
        return Automorphism(f"{other.name}*{self.name}", images(), cm)


def _gens():
    X, Xi, T, Y, Yi = PBW.X(1), PBW.X(-1), PBW.T(), PBW.Y(1), PBW.Y(-1)
    return X, Xi, T, Y, Yi


@lru_cache(maxsize=None)
def automorphism(name: str) -> Automorphism:
    """Automorphisms of the rank-one DAHA by name.

    ``tau_plus``, ``tau_minus``, their inverses ``tau_plus_inv`` and
    ``tau_minus_inv``, ``sigma``, ``epsilon`` (inverts ``q`` and ``t``),
    ``iota`` (``T -> -T``, ``t^(1/2) -> t^(-1/2)``), ``vs_x`` (``X -> -X``),
    ``vs_y`` (``Y -> -Y``) and ``eta`` (``X <-> Y``, ``T -> -T^-1``,
    ``q^(1/2) -> q^(-1/2)``).
    """
    X, Xi, T, Y, Yi = _gens()
    Ti = PBW.Tinv()
    q4 = _Q(Fraction(1, 4))
    q4i = q4.inverse()
    if name == "tau_plus":
        return Automorphism(name, {"X": X, "Xi": Xi, "T": T, "Y": (X * Y).scale(q4i), "Yi": (Yi * Xi).scale(q4)})
    if name == "tau_plus_inv":
        return Automorphism(name, {"X": X, "Xi": Xi, "T": T, "Y": (Xi * Y).scale(q4), "Yi": (Yi * X).scale(q4i)})
    if name == "tau_minus":
        return Automorphism(name, {"X": (Y * X).scale(q4), "Xi": (Xi * Yi).scale(q4i), "T": T, "Y": Y, "Yi": Yi})
    if name == "tau_minus_inv":
        return Automorphism(name, {"X": (Yi * X).scale(q4i), "Xi": (Xi * Y).scale(q4), "T": T, "Y": Y, "Yi": Yi})
    if name == "sigma":
        return Automorphism(name, {"X": Yi, "Xi": Y, "T": T, "Y": X * T * T, "Yi": Ti * Ti * Xi})
    if name == "sigma_inv":
        return Automorphism(name, {"X": Y * Ti * Ti, "Xi": T * T * Yi, "T": T, "Y": Xi, "Yi": X})
    if name == "epsilon":
        return Automorphism(name, {"X": Y, "Xi": Yi, "T": Ti, "Y": X, "Yi": Xi}, RatFunc.invert_parameters)
    if name == "iota":
        return Automorphism(name, {"X": X, "Xi": Xi, "T": -T, "Y": Y, "Yi": Yi}, RatFunc.conj_v)
    if name == "vs_x":
        return Automorphism(name, {"X": -X, "Xi": -Xi, "T": T, "Y": Y, "Yi": Yi})
    if name == "vs_y":
        return Automorphism(name, {"X": X, "Xi": Xi, "T": T, "Y": -Y, "Yi": -Yi})
    if name == "eta":
        qhalf_inv = lambda c: c.substitute((-1, 0, 1), (0, 1, 1))  # noqa: E731
        return Automorphism(name, {"X": Y, "Xi": Yi, "T": -Ti, "Y": X, "Yi": Xi}, qhalf_inv)
    raise KeyError(name)


def compose(*names: str) -> Automorphism:
    """``compose("a", "b", "c")`` is ``a o b o c`` (``c`` applied first)."""
    auto = automorphism(names[-1])
    for nm in reversed(names[:-1]):
        auto = auto.then(automorphism(nm))
    return auto


def inner_power_of_sigma_squared(max_power: int = 4) -> int | None:
    """The ``a`` with ``sigma^2(H) = T^a H T^-a`` on generators, if any."""
    s2 = compose("sigma", "sigma")
    X, Xi, T, Y, Yi = _gens()
    Ti = PBW.Tinv()
    for a in range(-max_power, max_power + 1):
        Ta = PBW.scalar(1)
        Tai = PBW.scalar(1)
        for _ in range(abs(a)):
            Ta = Ta * (T if a > 0 else Ti)
            Tai = Tai * (Ti if a > 0 else T)
        if all(s2(g) == Ta * g * Tai for g in (X, Y, T)):
            return a
    return None


# --------------------------------------------------------------------------
# Nonsymmetric Macdonald polynomials
# --------------------------------------------------------------------------

class MacdonaldBuilder:
    """Builds ``epsilon_b`` by triangular eigen-solve; results are memoized."""

    def __init__(self, rep: PolyRep):
        self.rep = rep
        self.R = rep.R
        self._cache: dict = {}
        self._Ymono: dict = {}
        self._lock = threading.Lock()

    # -- eigenvalues --------------------------------------------------------
    def eigenvalue(self, b, a) -> RatFunc:
        """``t^{(u(rho_t), a)} q^{-(b, a)}`` with ``pi_b = b u``."""
        R = self.R
        _, ub = pi_u_decompose(R, b)
        urho = R.finite(R.weyl_inverse(ub)).act_linear(R.rho_vee)
        return self.rep.t(R.pair(urho, a)) * self.rep.q(-R.pair(b, a))

    # -- ordering -------------------------------------------------------------
    def order_key(self, c):
        R = self.R
        cp, _ = R.dominant_rep(c)
        _, u = R.antidominant_rep(c)
        return (R.pair(cp, R.rho), -R.weyl_length(u), tuple(c))

    def lower_set(self, b) -> list[tuple]:
        """Weights ``c`` with ``c_+ <= b_+`` in dominance order, sorted by ``order_key``."""
        R = self.R
        bp, _ = R.dominant_rep(b)
        bound = max((abs(x) for o in R.orbit(bp) for x in o), default=0)
        n = R.rank
        from itertools import product

        out = []
        for c in product(range(-bound, bound + 1), repeat=n):
            cp, _ = R.dominant_rep(c)
            diff = tuple(x - y for x, y in zip(bp, cp))
            coeffs = _weight_to_root_coords(R, diff)
            if coeffs is None or any(x < 0 for x in coeffs):
                continue
            out.append(tuple(c))
        keyb = self.order_key(b)
        out = [c for c in out if self.order_key(c) <= keyb]
        return sorted(out, key=self.order_key)

    def _Y_of_mono(self, i: int, c: tuple) -> LaurentPoly:
        key = (i, c)
        if key not in self._Ymono:
            self._Ymono[key] = self.rep.Y_fund(i, LaurentPoly.monomial(c, ONE))
        return self._Ymono[key]

    def epsilon(self, b) -> LaurentPoly:
        b = tuple(b)
        with self._lock:
            if b in self._cache:
                return self._cache[b]
        R = self.R
        basis = self.lower_set(b)
        target = {i: self.eigenvalue(b, R.omega(i)) for i in range(1, R.rank + 1)}
        coeffs: dict = {b: ONE}
        for c in reversed(basis[:-1]):
            solved = False
            for i in range(1, R.rank + 1):
                diag = self._Y_of_mono(i, c).coeff(c, ZERO)
                denom = diag - target[i]
                if not denom:
                    continue
                acc = ZERO
                for c2, a2 in coeffs.items():
                    if c2 == c:
                        continue
                    entry = self._Y_of_mono(i, c2).coeff(c, ZERO)
                    if entry:
                        acc = acc + entry * a2
                if acc:
                    coeffs[c] = -acc / denom
                solved = True
                break
            if not solved:
                raise ArithmeticError(f"eigenvalue collision at {c} for epsilon_{b}")
        poly = LaurentPoly(coeffs)
        norm = self.rep.eval_t_rho(poly)
        if not norm:
            raise ZeroDivisionError("normalization value vanishes")
        poly = poly.scale(norm.inverse())
        with self._lock:
            self._cache[b] = poly
        return poly


def _weight_to_root_coords(R: RootSystem, w) -> tuple | None:
    """Coordinates of ``w`` in the simple-root basis if they are integers."""
    from .linalg import solve

    A = [[Fraction(R.cartan[i][j]) for i in range(R.rank)] for j in range(R.rank)]
    try:
        x = solve(A, [Fraction(v) for v in w], zero=Fraction(0), one=Fraction(1))
    except ValueError:
        return None
    if any(Fraction(v).denominator != 1 for v in x):
        return None
    return tuple(int(v) for v in x)


_BUILDERS: dict = {}
_BUILDERS_LOCK = threading.Lock()


def macdonald(b, R: RootSystem | None = None) -> LaurentPoly:
    """Memoized ``epsilon_b`` for the root system ``R`` (rank one by default)."""
    R = R or root_system("A1")
    with _BUILDERS_LOCK:
        builder = _BUILDERS.get(R.name)
        if builder is None:
            rep = rank1() if R.name == "A1" else PolyRep(R)
            builder = _BUILDERS[R.name] = MacdonaldBuilder(rep)
    if isinstance(b, int):
        b = (b,)
    return builder.epsilon(tuple(b))


# --------------------------------------------------------------------------
# Rank-one intertwiners
# --------------------------------------------------------------------------

def y_eigenvalue_rank1(f: LaurentPoly) -> RatFunc:
    """Eigenvalue of ``Y`` on ``f``; raises ``ValueError`` if ``f`` is not an eigenvector."""
    rep = rank1()
    g = rep.Y((1,), f)
    e, c = next(iter(f.items()))
    lam = g.coeff(e, ZERO) / c
    if g != f.scale(lam):
        raise ValueError("not a Y-eigenvector")
    return lam


def intertwiner_F1(f: LaurentPoly, lam: RatFunc | None = None) -> LaurentPoly:
    """Normalized intertwiner ``F_1 = Psi_1 psi_1^{-1}`` on a ``Y``-eigenvector."""
    rep = rank1()
    lam = lam if lam is not None else y_eigenvalue_rank1(f)
    den = lam ** -2 - 1
    if not den:
        raise ZeroDivisionError("resonant eigenvalue: Y_alpha acts by 1")
    corr = rep.c / den
    psi = rep.th + corr
    if not psi:
        raise ZeroDivisionError("normalizing factor vanishes")
    return (rep.T(1, f) + f.scale(corr)).scale(psi.inverse())


def intertwiner_P(f: LaurentPoly) -> LaurentPoly:
    """``P = X T`` (the image of ``pi``)."""
    rep = rank1()
    return rep.T(1, f).shift((1,))


def epsilon_by_intertwiners(m: int) -> LaurentPoly:
    """``epsilon_m`` from ``1`` through the chain ``P, F_1, P, F_1, ...``."""
    rep = rank1()
    f = rep.one()
    cur = 0
    steps = 2 * m - 1 if m > 0 else -2 * m
    for k in range(steps):
        if k % 2 == 0:
            f = intertwiner_P(f)
            cur = 1 - cur  # pi((b)) = -b + 1 in units of omega
        else:
            f = intertwiner_F1(f)
            cur = -cur
    assert cur == m, (cur, m)
    return f.scale(rep.eval_t_rho(f).inverse())


def gaussian_y_rank1(f: LaurentPoly, max_degree: int, inverse: bool = False) -> LaurentPoly:
    """The operator ``Gamma`` multiplying ``epsilon_m`` by ``q^{-m^2/4} t^{-|m|/2}``.

    Conjugation by it realizes ``tau_-`` on polynomials:
    ``tau_-(A) = Gamma A Gamma^{-1}``.
    """
    coeffs = expand_in_epsilon(f, max_degree)
    out = LaurentPoly()
    for m, c in coeffs.items():
        g = _Q(Fraction(-m * m, 4)) * RatFunc.monomial(0, -abs(m))
        if inverse:
            g = g.inverse()
        out = out + macdonald(m).scale(c * g)
    return out


def tau_minus_act(A: PBW, f: LaurentPoly, window: int | None = None) -> LaurentPoly:
    """``Gamma A Gamma^{-1} (f)``, the action of ``tau_-(A)`` without rewriting ``A``."""
    w = window if window is not None else f.max_abs_degree()
    g = A.act(gaussian_y_rank1(f, w, inverse=True))
    return gaussian_y_rank1(g, g.max_abs_degree())


def expand_in_epsilon(f: LaurentPoly, max_degree: int) -> dict[int, RatFunc]:
    """Coefficients of ``f`` in the basis ``epsilon_m``, ``|m| <= max_degree``."""
    rest = f
    out: dict[int, RatFunc] = {}
    b = MacdonaldBuilder(rank1())
    order = sorted(range(-max_degree, max_degree + 1), key=lambda m: b.order_key((m,)), reverse=True)
    for m in order:
        c = rest.coeff((m,), ZERO)
        if not c:
            continue
        eps = macdonald(m)
        lead = eps.coeff((m,), ZERO)
        coef = c / lead
        out[m] = coef
        rest = rest - eps.scale(coef)
    if rest:
        raise ValueError("polynomial exceeds the degree window")
    return out


# --------------------------------------------------------------------------
# On-disk memo of epsilon_b
# --------------------------------------------------------------------------

def _cache_file(directory: str, R: RootSystem) -> str:
    import os

    return os.path.join(directory, f"epsilon_{R.name}.json")


def load_cache(directory: str, R: RootSystem | None = None) -> int:
    """Seed the memo of :func:`macdonald` from ``directory``; returns the
    number of polynomials loaded (0 if there is no file)."""
    import json
    import os

    R = R or root_system("A1")
    path = _cache_file(directory, R)
    if not os.path.exists(path):
        return 0
    with open(path) as fh:
        data = json.load(fh)
    macdonald((0,) * R.rank, R)
    builder = _BUILDERS[R.name]
    n = 0
    with builder._lock:
        for entry in data.get("polynomials", []):
            b = tuple(entry["b"])
            poly = LaurentPoly({tuple(e): RatFunc.from_json(c) for e, c in entry["terms"]})
            builder._cache.setdefault(b, poly)
            n += 1
    return n


def save_cache(directory: str, R: RootSystem | None = None) -> int:
    import json
    import os

    R = R or root_system("A1")
    builder = _BUILDERS.get(R.name)
    if builder is None:
        return 0
    os.makedirs(directory, exist_ok=True)
    with builder._lock:
        items = sorted(builder._cache.items())
    data = {"system": R.name, "polynomials": [
        {"b": list(b), "terms": [[list(e), c.to_json()] for e, c in sorted(p.items())]} for b, p in items]}
    tmp = _cache_file(directory, R) + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh, sort_keys=True)
    os.replace(tmp, _cache_file(directory, R))
    return len(items)
