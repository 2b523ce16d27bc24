"""Affine Hecke algebra of type A1 and its q-deformations.

Elements of the extended affine Weyl group are pairs ``(m, e)`` standing for
``b w`` with ``b = m * omega`` and ``w = s^e``.  Points of the line are
written in omega-coordinates, so ``(alpha, x omega) = x`` and
``(omega, x omega) = x / 2``.

Three modules are built on the same index set:

* the regular representation ``Delta`` (Iwahori-Matsumoto formulas),
* its deformation ``Delta_q^xi`` whose coefficients are rational in
  ``q^(1/2)``, ``q^(xi/2)`` and ``t^(1/2)``,
* the spherical module ``Delta^#`` obtained at ``q^xi = t^(-rho)``.

The Fourier part works with ``t = q^k`` and real ``0 < q < 1`` numerically,
or at roots of unity through :mod:`daha_lab.verlinde`.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

import flint
import numpy as np

from .daha import macdonald, rank1
from .laurent import LaurentPoly
from .scalars import ONE, ZERO, V, RatFunc, qpow, tpow

# --------------------------------------------------------------------------
# Extended affine Weyl group of A1
# --------------------------------------------------------------------------

Elem = tuple  # (m, e)

ID: Elem = (0, 0)
S1: Elem = (0, 1)
S0: Elem = (2, 1)
PI: Elem = (1, 1)


def w_mul(a: Elem, b: Elem) -> Elem:
    m1, e1 = a
    m2, e2 = b
    return (m1 + (-m2 if e1 else m2), (e1 + e2) % 2)


def w_inv(a: Elem) -> Elem:
    m, e = a
    return (m, 1) if e else (-m, 0)


def simple(i: int) -> Elem:
    return S0 if i == 0 else S1


def length(g: Elem) -> int:
    """``l(b w)``; equals the number of positive affine roots made negative."""
    m, e = g
    return abs(m - 1) if e else abs(m)


def act_point(g: Elem, x):
    """``g((x)) = w(x) + b`` in omega-coordinates."""
    m, e = g
    return (-x if e else x) + m


def root_value(i: int, x):
    """Value of the simple affine root ``alpha_i`` at the point ``x omega``."""
    return 1 - x if i == 0 else x


def pi_rep(b: int) -> Elem:
    """Minimal-length representative ``pi_b`` of ``b W``."""
    return (b, 0) if b <= 0 else (b, 1)


def reduced_word(g: Elem) -> tuple[int, list[int]]:
    """``(p, [i_l, ..., i_1])`` with ``g = s_{i_l} ... s_{i_1} pi^p``."""
    word: list[int] = []
    cur = g
    while length(cur) > 0:
        for i in (0, 1):
            nxt = w_mul(simple(i), cur)
            if length(nxt) < length(cur):
                word.append(i)
                cur = nxt
                break
    p = 0 if cur == ID else 1
    if cur not in (ID, PI):
        raise AssertionError(f"unexpected length-zero element {cur}")
    return p, word


def ball_elements(L: int) -> list[Elem]:
    out = set()
    for m in range(-L - 1, L + 2):
        for e in (0, 1):
            if length((m, e)) <= L:
                out.add((m, e))
    return sorted(out, key=lambda g: (length(g), g))


# --------------------------------------------------------------------------
# Rational functions in q^(1/2), q^(xi/2), t^(1/2)
# --------------------------------------------------------------------------

_CTX = flint.fmpz_mpoly_ctx.get(("qh", "xh", "th"), "lex")
_QH, _XH, _TH = _CTX.gens()
_P1 = _CTX.from_dict({(0, 0, 0): 1})


class Frac:
    """Element of ``Q(qh, xh, th)`` kept in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _canonical: bool = False):
        if den is None:
            den = _P1
        if not _canonical:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                den = _P1
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num / g, den / g
                if den.leading_coefficient() < 0:
                    num, den = -num, -den
        self.num = num
        self.den = den

    @staticmethod
    def coerce(x) -> "Frac":
        if isinstance(x, Frac):
            return x
        if isinstance(x, Fraction):
            return Frac(_CTX.from_dict({(0, 0, 0): x.numerator}), _CTX.from_dict({(0, 0, 0): x.denominator}))
        return Frac(_CTX.from_dict({(0, 0, 0): int(x)}) if x else _CTX.from_dict({}))

    @staticmethod
    def monomial(a: int = 0, b: int = 0, c: int = 0) -> "Frac":
        top = _CTX.from_dict({(max(a, 0), max(b, 0), max(c, 0)): 1})
        bot = _CTX.from_dict({(max(-a, 0), max(-b, 0), max(-c, 0)): 1})
        return Frac(top, bot, _canonical=True)

    def __add__(self, other):
        o = Frac.coerce(other)
        if self.den == o.den:
            return Frac(self.num + o.num, self.den)
        return Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-Frac.coerce(other))

    def __rsub__(self, other):
        return Frac.coerce(other) - self

    def __mul__(self, other):
        o = Frac.coerce(other)
        return Frac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Frac":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Frac(self.den, self.num)

    def __truediv__(self, other):
        return self * Frac.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Frac.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Frac(self.num ** n, self.den ** n, _canonical=True)

    def __eq__(self, other) -> bool:
        o = Frac.coerce(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def substitute_xh(self, a: int, c: int) -> "Frac":
        """``xh -> qh^a th^c`` (integers of either sign)."""
        def sub(p):
            terms = list(p.terms())
            lo_q = min([0] + [e[0] + a * e[1] for e, _ in terms])
            lo_t = min([0] + [e[2] + c * e[1] for e, _ in terms])
            return terms, lo_q, lo_t

        tn, qn, tn_ = sub(self.num)
        td, qd, td_ = sub(self.den)
        sq, st = -min(qn, qd), -min(tn_, td_)

        def build(terms):
            d: dict = {}
            for e, coef in terms:
                key = (e[0] + a * e[1] + sq, 0, e[2] + c * e[1] + st)
                d[key] = d.get(key, 0) + int(coef)
            return _CTX.from_dict({k: v for k, v in d.items() if v})

        return Frac(build(tn), build(td))

    def limit_qh(self) -> "Frac":
        """Limit as ``qh -> infinity``; raises ``ArithmeticError`` if infinite."""
        dn, dd = self.num.degrees()[0], self.den.degrees()[0]
        if self.num.is_zero() or dn < dd:
            return Frac.coerce(0)
        if dn > dd:
            raise ArithmeticError("diverges as q -> infinity")

        def lead(p, d):
            return _CTX.from_dict({(0, e[1], e[2]): int(c) for e, c in p.terms() if e[0] == d})

        return Frac(lead(self.num, dn), lead(self.den, dd))

    def evaluate(self, qh, xh, th):
        def ev(p):
            return sum(int(c) * qh ** e[0] * xh ** e[1] * th ** e[2] for e, c in p.terms())

        return ev(self.num) / ev(self.den)

    def __repr__(self):
        return f"Frac(({self.num})/({self.den}))"


class SymbolicScalars:
    """Formal ``qh = q^(1/2)``, ``xh = q^(xi/2)``, ``th = t^(1/2)``."""

    exact = True

    def __init__(self):
        self.zero = Frac.coerce(0)
        self.one = Frac.coerce(1)
        self.th = Frac.monomial(c=1)

    def qh_pow(self, n: int):
        return Frac.monomial(a=n)

    def xh_pow(self, n: int):
        return Frac.monomial(b=n)

    def eq(self, a, b) -> bool:
        return a == b


class SphericalScalars(SymbolicScalars):
    """The specialization ``q^xi = t^(-rho)``, i.e. ``xh = th^-1``."""

    def xh_pow(self, n: int):
        return Frac.monomial(c=-n)


class NumericScalars:
    """Floating point ``q``, ``xi`` (omega-coordinate) and ``t^(1/2)``."""

    exact = False

    def __init__(self, q: float, xi: float, th: float):
        self.q, self.xi = q, xi
        self.zero, self.one = 0.0, 1.0
        self.th = th
        self._qh = math.sqrt(q)
        self._xh = q ** (xi / 2)

    def qh_pow(self, n: int):
        return self._qh ** n

    def xh_pow(self, n: int):
        return self._xh ** n

    def eq(self, a, b) -> bool:
        return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


# --------------------------------------------------------------------------
# Modules on the affine Weyl group
# --------------------------------------------------------------------------

class ResonanceError(ZeroDivisionError):
    """A denominator ``q^(alpha, w(xi)+b) - 1`` vanishes."""


def _acc(out: dict, key, val, zero_test):
    if key in out:
        val = out[key] + val
    if zero_test(val):
        out.pop(key, None)
    else:
        out[key] = val


class RegularModule:
    """``Delta`` in the basis ``delta_w``: the Iwahori-Matsumoto formulas."""

    name = "regular"

    def __init__(self, th=None):
        self.th = V if th is None else th
        self.one = ONE if th is None else 1.0
        self.zero = ZERO if th is None else 0.0
        self.c = self.th - self.one / self.th

    def T(self, i: int, g: Elem) -> dict:
        h = w_mul(simple(i), g)
        if length(h) == length(g) + 1:
            return {h: self.th}
        return {h: self.one / self.th, g: self.c}

    def pi(self, g: Elem) -> dict:
        return {w_mul(PI, g): self.one}

    def ops(self) -> dict:
        return {
            "T0": lambda g: self.T(0, g),
            "T1": lambda g: self.T(1, g),
            "T0i": lambda g: _shift_diag(self.T(0, g), g, -self.c),
            "T1i": lambda g: _shift_diag(self.T(1, g), g, -self.c),
            "pi": self.pi,
        }


def _shift_diag(img: dict, g, c) -> dict:
    out = dict(img)
    out[g] = out.get(g, 0) + c
    if not out[g]:
        del out[g]
    return out


class DeformedModule:
    """``Delta_q^xi``: deformation of ``Delta`` with a diagonal ``X``-action.

    ``X = X_omega`` acts on ``delta_{bw}`` by ``q^{(omega, w(xi) + b)}``.
    """

    name = "deformed"

    def __init__(self, sc):
        self.sc = sc
        self.th = sc.th
        self.c = sc.th - sc.one / sc.th
        self._cache: dict = {}

    def X_value(self, g: Elem):
        m, e = g
        return self.sc.xh_pow(-1 if e else 1) * self.sc.qh_pow(m)

    def root_power(self, i: int, g: Elem):
        """``q^{alpha_i(g((xi)))}``."""
        X2 = self.X_value(g) ** 2
        return X2 if i == 1 else self.sc.qh_pow(2) / X2

    def T(self, i: int, g: Elem) -> dict:
        key = (i, g)
        if key in self._cache:
            return self._cache[key]
        sc = self.sc
        Q = self.root_power(i, g)
        den = Q - sc.one
        if sc.eq(den, sc.zero):
            raise ResonanceError(f"q^(alpha_{i}, point) = 1 at {g}")
        a = (self.th * Q - sc.one / self.th) / den
        d = -self.c / den
        out: dict = {}
        h = w_mul(simple(i), g)
        if not sc.eq(a, sc.zero) or not sc.exact:
            out[h] = a
        if not sc.eq(d, sc.zero) or not sc.exact:
            out[g] = d
        if sc.exact:
            out = {k: v for k, v in out.items() if v}
        self._cache[key] = out
        return out

    def ops(self) -> dict:
        sc = self.sc
        return {
            "T0": lambda g: self.T(0, g),
            "T1": lambda g: self.T(1, g),
            "T0i": lambda g: _shift_diag(self.T(0, g), g, -self.c),
            "T1i": lambda g: _shift_diag(self.T(1, g), g, -self.c),
            "pi": lambda g: {w_mul(PI, g): sc.one},
            "X": lambda g: {g: self.X_value(g)},
            "Xi": lambda g: {g: sc.one / self.X_value(g)},
        }


# --------------------------------------------------------------------------
# Ball truncation
# --------------------------------------------------------------------------

@dataclass
class HeckeBall:
    """Generators restricted to ``{w : l(w) <= L}`` with overflow tracking."""

    L: int
    basis: list
    images: dict  # op -> {g: image dict}
    overflow: dict  # op -> set of g whose image leaves the ball
    zero_test: Callable = field(default=lambda v: not v)

    @classmethod
    def build(cls, module, L: int, zero_test=None) -> "HeckeBall":
        basis = ball_elements(L)
        inside = set(basis)
        images, overflow = {}, {}
        for name, op in module.ops().items():
            images[name], overflow[name] = {}, set()
            for g in basis:
                img = op(g)
                images[name][g] = img
                if any(h not in inside for h in img):
                    overflow[name].add(g)
        return cls(L, basis, images, overflow, zero_test or (lambda v: not v))

    def apply(self, word: Iterable[str], vec: dict) -> dict | None:
        """Apply ``word`` (rightmost letter first); ``None`` when leaving the ball."""
        for name in reversed(tuple(word)):
            out: dict = {}
            for g, c in vec.items():
                if g in self.overflow[name] or g not in self.images[name]:
                    return None
                for h, a in self.images[name][g].items():
                    _acc(out, h, a * c, self.zero_test)
            vec = out
        return vec

    def matrix(self, name: str) -> list:
        idx = {g: j for j, g in enumerate(self.basis)}
        n = len(self.basis)
        M = [[0] * n for _ in range(n)]
        for g, img in self.images[name].items():
            for h, a in img.items():
                if h in idx:
                    M[idx[h]][idx[g]] = a
        return M

    def check(self, relation: list, eq: Callable) -> tuple[bool, int, list]:
        """``sum coeff * word = 0`` on every interior basis vector.

        Returns ``(ok, number of interior vectors, failing elements)``.
        """
        interior, bad = 0, []
        for g in self.basis:
            total: dict = {}
            skip = False
            for coeff, word in relation:
                img = self.apply(word, {g: 1})
                if img is None:
                    skip = True
                    break
                for h, a in img.items():
                    _acc(total, h, a * coeff, self.zero_test)
            if skip:
                continue
            interior += 1
            if not all(eq(v, 0) for v in total.values()):
                bad.append(g)
        return not bad, interior, bad


def deformed_relations(sc) -> dict:
    """Relations of the affine Hecke algebra plus the ``X``-relations."""
    c = sc.th - sc.one / sc.th
    q = sc.qh_pow(2)
    one = sc.one
    return {
        "T1 quadratic": [(one, ("T1", "T1")), (-c, ("T1",)), (-one, ())],
        "T0 quadratic": [(one, ("T0", "T0")), (-c, ("T0",)), (-one, ())],
        "T1 T1^-1 = 1": [(one, ("T1", "T1i")), (-one, ())],
        "pi^2 = 1": [(one, ("pi", "pi")), (-one, ())],
        "pi T1 pi = T0": [(one, ("pi", "T1", "pi")), (-one, ("T0",))],
        "T1 X T1 = X^-1": [(one, ("T1", "X", "T1")), (-one, ("Xi",))],
        "T0 X^-1 T0 = q^-1 X": [(one, ("T0", "Xi", "T0")), (-one / q, ("X",))],
        "pi X pi = q^1/2 X^-1": [(one, ("pi", "X", "pi")), (-sc.qh_pow(1), ("Xi",))],
        "Y^-1 X^-1 Y X T^2 = q^-1/2": [
            (one, ("T1i", "pi", "Xi", "pi", "T1", "X", "T1", "T1")),
            (-one / sc.qh_pow(1), ()),
        ],
    }


def hecke_relations(one, c) -> dict:
    return {
        "T1 quadratic": [(one, ("T1", "T1")), (-c, ("T1",)), (-one, ())],
        "T0 quadratic": [(one, ("T0", "T0")), (-c, ("T0",)), (-one, ())],
        "pi^2 = 1": [(one, ("pi", "pi")), (-one, ())],
        "pi T1 pi = T0": [(one, ("pi", "T1", "pi")), (-one, ("T0",))],
    }


@dataclass
class BallReport:
    L: int
    size: int
    relations: dict  # name -> {"ok", "interior", "failures"}
    simple_spectrum: bool | None = None

    @property
    def passed(self) -> bool:
        rel = all(r["ok"] and r["interior"] > 0 for r in self.relations.values())
        return rel and self.simple_spectrum is not False

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "size": self.size,
            "relations": self.relations,
            "simple_spectrum": self.simple_spectrum,
            "passed": self.passed,
        }


def deformed_regular(L: int = 12, sc=None) -> tuple[HeckeBall, BallReport]:
    """The ball of radius ``L`` in ``Delta_q^xi`` with its relation report.

    By default the scalars are formal, so every check is an exact identity
    of rational functions in ``q^(1/2), q^(xi/2), t^(1/2)``.
    """
    sc = sc or SymbolicScalars()
    mod = DeformedModule(sc)
    ball = HeckeBall.build(mod, L)
    rels = {}
    for name, rel in deformed_relations(sc).items():
        ok, n, bad = ball.check(rel, sc.eq)
        rels[name] = {"ok": ok, "interior": n, "failures": [list(g) for g in bad]}
    values = [mod.X_value(g) for g in ball.basis]
    if sc.exact:
        spectrum = len(set(values)) == len(values)
    else:
        spectrum = all(not sc.eq(a, b) for i, a in enumerate(values) for b in values[:i])
    return ball, BallReport(L, len(ball.basis), rels, spectrum)


def regular_ball(L: int = 12, th=None) -> tuple[HeckeBall, BallReport]:
    mod = RegularModule(th)
    ball = HeckeBall.build(mod, L)
    one = mod.one
    rels = {}
    eq = (lambda a, b: a == b) if th is None else (lambda a, b: abs(a - b) < 1e-9)
    for name, rel in hecke_relations(one, mod.c).items():
        ok, n, bad = ball.check(rel, eq)
        rels[name] = {"ok": ok, "interior": n, "failures": [list(g) for g in bad]}
    return ball, BallReport(L, len(ball.basis), rels)


def symbolic_entry_check() -> bool:
    """``T_1 delta_id`` in ``Delta_q^xi`` against the two-term formula at ``w = id``."""
    sc = SymbolicScalars()
    mod = DeformedModule(sc)
    th, Q = sc.th, sc.xh_pow(2)
    want = {S1: (th * Q - 1 / th) / (Q - 1), ID: -(th - 1 / th) / (Q - 1)}
    return mod.T(1, ID) == want


# --------------------------------------------------------------------------
# The q -> infinity limit
# --------------------------------------------------------------------------

@dataclass
class LimitReport:
    qs: list
    errors: list
    xi: float
    th: float
    L: int
    length_rule: bool

    @property
    def passed(self) -> bool:
        dec = all(b < a for a, b in zip(self.errors, self.errors[1:]))
        return self.length_rule and dec and self.errors[-1] <= 1e-3

    def to_json(self) -> dict:
        return {"q": self.qs, "max_relative_error": self.errors, "xi": self.xi, "t^(1/2)": self.th,
                "L": self.L, "length_rule": self.length_rule, "passed": self.passed}


def alcove_length_rule(xi: float, L: int) -> bool:
    """``alpha_i(w((xi))) > 0`` exactly when ``l(s_i w) = l(w) + 1``."""
    for g in ball_elements(L):
        x = act_point(g, xi)
        for i in (0, 1):
            up = length(w_mul(simple(i), g)) == length(g) + 1
            if (root_value(i, x) > 0) != up:
                return False
    return True


def limit_check(L: int = 12, xi: float = 0.4, th: float = 1.1, qs=(1e4, 1e6)) -> LimitReport:
    """Entries of ``T_0, T_1`` on ``Delta_q^xi`` against ``Delta`` for growing ``q``.

    The error of an entry is ``|a - b| / max(|b|, s)`` where ``b`` is the
    Iwahori-Matsumoto entry and ``s`` the largest entry of its column.
    """
    if not (0 < xi < 1):
        raise ValueError("xi must lie in the fundamental alcove 0 < xi < 1")
    reg = RegularModule(th)
    errors = []
    for q in qs:
        mod = DeformedModule(NumericScalars(q, xi, th))
        worst = 0.0
        for g in ball_elements(L):
            for i in (0, 1):
                got, want = mod.T(i, g), reg.T(i, g)
                scale = max(abs(v) for v in want.values())
                for h in set(got) | set(want):
                    a, b = got.get(h, 0.0), want.get(h, 0.0)
                    worst = max(worst, abs(a - b) / max(abs(b), scale))
        errors.append(worst)
    return LimitReport(list(qs), errors, xi, th, L, alcove_length_rule(xi, L))


# --------------------------------------------------------------------------
# Spherical module Delta^#
# --------------------------------------------------------------------------

def fdeltas(i: int, b: int, th=None) -> dict:
    """``T_i delta_b^#`` by the limiting formulas; keys are weights ``b``."""
    th = Frac.monomial(c=1) if th is None else th
    pair = root_value(i, b)  # (alpha_i, b + d)
    img = act_point(simple(i), b)
    if pair > 0:
        return {img: th}
    if pair < 0:
        return {img: 1 / th, b: th - 1 / th}
    return {b: th}  # s_i((b)) = b, the s_i pi_b component vanishes


@dataclass
class SphericalReport:
    L: int
    closed: bool  # images of pi_b stay in span{pi_c}
    routes_agree: bool  # generic coefficients specialized afterwards
    pi_rule: bool
    limit_match: bool
    relations: dict
    mismatches: list

    @property
    def passed(self) -> bool:
        return self.closed and self.routes_agree and self.pi_rule and self.limit_match and all(
            r["ok"] and r["interior"] > 0 for r in self.relations.values()
        )

    def to_json(self) -> dict:
        return {"L": self.L, "closed": self.closed, "routes_agree": self.routes_agree, "pi_rule": self.pi_rule, "limit_match": self.limit_match,
                "relations": self.relations, "mismatches": self.mismatches, "passed": self.passed}


def spherical_module(L: int = 10) -> SphericalReport:
    """Specialize ``Delta_q^xi`` at ``q^xi = t^(-rho)`` and compare with ``fdeltas``.

    The specialization is carried out on the formal deformed coefficients,
    then ``q -> infinity`` is taken exactly; the result must coincide with
    the directly coded limiting formulas.
    """
    sc = SphericalScalars()
    mod = DeformedModule(sc)
    generic = DeformedModule(SymbolicScalars())
    reps = {pi_rep(b): b for b in range(-L - 2, L + 3)}
    closed, routes, limit_ok, mismatches = True, True, True, []
    for b in range(-L, L + 1):
        g = pi_rep(b)
        for i in (0, 1):
            img = mod.T(i, g)
            late = {h: a.substitute_xh(0, -1) for h, a in generic.T(i, g).items()}
            if {h: a for h, a in late.items() if a} != img:
                routes = False
            if any(h not in reps for h in img):
                closed = False
                mismatches.append({"b": b, "i": i, "reason": "leaves span of pi_c"})
                continue
            lim = {}
            for h, a in img.items():
                v = a.limit_qh()
                if v:
                    lim[reps[h]] = v
            want = fdeltas(i, b)
            if lim != want:
                limit_ok = False
                mismatches.append({"b": b, "i": i, "reason": "limit differs"})
    pi_ok = all(w_mul(PI, pi_rep(b)) == pi_rep(act_point(PI, b)) for b in range(-L, L + 1))

    # relations on the submodule at finite q
    ops = mod.ops()
    inside = {pi_rep(b) for b in range(-L, L + 1)}
    rels = {}
    for name, rel in deformed_relations(sc).items():
        interior, bad = 0, []
        for b in range(-L, L + 1):
            total: dict = {}
            skip = False
            for coeff, word in rel:
                vec = {pi_rep(b): sc.one}
                for op in reversed(word):
                    out: dict = {}
                    for h, a in vec.items():
                        if h not in inside:
                            skip = True
                            break
                        for h2, a2 in ops[op](h).items():
                            _acc(out, h2, a2 * a, lambda v: not v)
                    if skip:
                        break
                    vec = out
                if skip:
                    break
                for h, a in vec.items():
                    _acc(total, h, a * coeff, lambda v: not v)
            if skip:
                continue
            interior += 1
            if total:
                bad.append(b)
        rels[name] = {"ok": not bad, "interior": interior, "failures": bad}
    return SphericalReport(L, closed, routes, pi_ok, limit_ok, rels, mismatches)


# --------------------------------------------------------------------------
# Matsumoto spherical functions
# --------------------------------------------------------------------------

_C = V - V.inverse()


@lru_cache(maxsize=None)
def matsumoto_phi(m: int) -> LaurentPoly:
    """``phi_m`` as a Laurent polynomial in ``Lambda`` (exponents are powers of ``Lambda``).

    ``phi_m = t^{-m/2} Lambda^{-m}`` for ``m >= 0``; negative indices come from
    ``Lambda phi_{-n} = t^{1/2} phi_{-n-1} - (t^{1/2} - t^{-1/2}) phi_{n+1}``.
    """
    if m >= 0:
        return LaurentPoly.monomial((-m,), V ** (-m))
    n = -m - 1
    lam_phi = matsumoto_phi(-n).shift((1,))
    return (lam_phi + matsumoto_phi(n + 1).scale(_C)).scale(V.inverse())


def _T_on_Y(n: int) -> dict:
    """``T (Y^n)`` in the spherical module ``Delta^+ = C[Y^{+-1}]``, ``T 1 = t^{1/2}``."""
    if n == 0:
        return {0: V}
    out: dict = {}
    if n > 0:
        for p, a in _T_on_Y(n - 1).items():  # T Y = Y^-1 T + c Y
            _acc(out, p - 1, a, lambda v: not v)
        _acc(out, n, _C, lambda v: not v)
    else:
        for p, a in _T_on_Y(n + 1).items():  # T Y^-1 = Y T - c Y
            _acc(out, p + 1, a, lambda v: not v)
        _acc(out, n + 2, -_C, lambda v: not v)
    return out


def _spherical_T(f: dict) -> dict:
    out: dict = {}
    for n, a in f.items():
        for p, b in _T_on_Y(n).items():
            _acc(out, p, a * b, lambda v: not v)
    return out


def _spherical_pi(f: dict) -> dict:
    """``pi = Y T^{-1}``."""
    g = _spherical_T(f)
    for n, a in f.items():
        _acc(g, n, -_C * a, lambda v: not v)
    return {p + 1: a for p, a in g.items()}


def matsumoto_phi_operator(m: int) -> LaurentPoly:
    """``phi_m`` from the action on ``Delta^+``: ``t^{-m/2} Y^m`` or ``t^{-n/2} (T pi)^n (1)``."""
    if m >= 0:
        f = {m: V ** (-m)}
    else:
        n = -m
        f = {0: ONE}
        for _ in range(n):
            f = _spherical_T(_spherical_pi(f))
        f = {p: a * V ** (-n) for p, a in f.items()}
    return LaurentPoly({(-p,): a for p, a in f.items()})  # Y -> Lambda^-1


def matsumoto_recursion_check(max_m: int = 10) -> dict:
    """Both constructions agree and satisfy the recursion for ``|m| <= max_m``."""
    agree = all(matsumoto_phi(m) == matsumoto_phi_operator(m) for m in range(-max_m, max_m + 1))
    rec = all(
        matsumoto_phi(-n).shift((1,)) == matsumoto_phi(-n - 1).scale(V) - matsumoto_phi(n + 1).scale(_C)
        for n in range(0, max_m)
    )
    dominant = all(matsumoto_phi(m) == LaurentPoly.monomial((-m,), V ** (-m)) for m in range(max_m + 1))
    return {"operator route": agree, "recursion": rec, "dominant formula": dominant}


def epsilon_star_distance(b: int, q: float, th: float) -> float:
    """Coefficientwise distance between ``epsilon_b^*(X -> Lambda)`` and ``phi_b``."""
    e = macdonald(b)
    star = {(-k[0],): complex(a.invert_parameters().evaluate(q ** 0.25, th)) for k, a in e.items()}
    phi = {k: complex(a.evaluate(1.0, th)) for k, a in matsumoto_phi(b).items()}
    keys = set(star) | set(phi)
    return max(abs(star.get(k, 0) - phi.get(k, 0)) for k in keys)


def regular_basics(th=None) -> dict:
    """Symmetrizer and reduced-word checks in ``Delta``."""
    reg = RegularModule(th)
    one, t = reg.one, reg.th * reg.th
    ds = {ID: one / (one + t), S1: t / (one + t)}  # (delta_id + t delta_s)/(1+t)

    def act_T1(vec):
        out: dict = {}
        for g, a in vec.items():
            for h, b in reg.T(1, g).items():
                _acc(out, h, a * b, lambda v: not v)
        return out

    def left_action(h_vec, vec):
        # the algebra element sum a_g delta_g acting on vec
        out: dict = {}
        for g, a in h_vec.items():
            p, word = reduced_word(g)
            cur = {w_mul(PI, x): c for x, c in vec.items()} if p else dict(vec)
            for i in reversed(word):
                nxt: dict = {}
                for x, c in cur.items():
                    for y, d in reg.T(i, x).items():
                        _acc(nxt, y, c * d, lambda v: not v)
                cur = nxt
            scale = a / reg.th ** len(word)
            for x, c in cur.items():
                _acc(out, x, c * scale, lambda v: not v)
        return out

    sym = act_T1(ds) == {g: a * reg.th for g, a in ds.items()}
    idem = left_action(ds, ds) == ds
    return {"T_1 delta+ = t^1/2 delta+": sym, "delta+ idempotent": idem}


def reduced_word_products(max_len: int = 6) -> bool:
    """``T_w delta_id = t^{l(w)/2} delta_w`` for both placements of ``pi``.

    ``s_{i_l} ... s_{i_1} pi = pi s_{pi(i_l)} ... s_{pi(i_1)}`` gives two
    words for the same element; each must produce the same vector.
    """
    reg = RegularModule()

    def run(word, start):
        vec = {start: ONE}
        for i in reversed(word):
            nxt: dict = {}
            for x, c in vec.items():
                for y, d in reg.T(i, x).items():
                    _acc(nxt, y, c * d, lambda v: not v)
            vec = nxt
        return vec

    for g in ball_elements(max_len):
        p, word = reduced_word(g)
        want = {g: V ** length(g)}
        if run(word, PI if p else ID) != want:
            return False
        if p:
            moved = run([1 - i for i in word], ID)
            if {w_mul(PI, x): c for x, c in moved.items()} != want:
                return False
    return True


# --------------------------------------------------------------------------
# mu-weights
# --------------------------------------------------------------------------

def point_q_t(b: int) -> tuple[int, int]:
    """``X_alpha`` at ``pi_b((-k rho))`` as ``q^m t^e``."""
    return (b, -1) if b <= 0 else (b, 1)


@lru_cache(maxsize=None)
def mu1(b: int) -> RatFunc:
    """``mu^1(pi_b)`` in closed form (rational in ``q, t``)."""
    q = lambda n: qpow(n)
    t = tpow(1)
    r = ONE
    if b <= 0:
        lo, hi = b, -b
    else:
        lo, hi = 1 - b, b - 1
    for n in range(lo, 0):
        r = r * (1 - q(n) / t) / (1 - q(n))
    for n in range(1, hi + 1):
        r = r * (1 - q(n) * t * t) / (1 - q(n) * t)
    return r


def mu1_windowed(b: int, window: int | None = None) -> RatFunc:
    """``mu(pi_b) / mu(pi_0)`` from the affine-root product, both cut to the same window.

    Factors are indexed by the ``q``-exponent of ``X_a`` at the point, and the
    single vanishing denominator ``1 - t X_a`` at each point is dropped.
    """
    W = window if window is not None else abs(b) + 2

    def factors(bb: int) -> RatFunc:
        m, e = point_q_t(bb)
        out = ONE
        # [alpha, j], j >= 0  and  [-alpha, j], j >= 1
        for sign, start in ((1, 0), (-1, 1)):
            j = start
            while True:
                n = j + sign * m
                if n > W:
                    break
                if n >= -W:
                    X = qpow(n) * tpow(sign * e)
                    den = 1 - tpow(1) * X
                    if den:
                        out = out * (1 - X) / den
                j += 1
        return out

    return factors(b) / factors(0)


def gaussian_exponent(b: int, k) -> Fraction:
    """``(p, p)/2`` for the point ``p = pi_b((-k rho))``, in units of ``q``."""
    k = Fraction(k)
    y = (b - k) if b <= 0 else (b + k)
    return y * y / 4


# --------------------------------------------------------------------------
# Fourier transform, numeric |q| < 1
# --------------------------------------------------------------------------

class NumericPairings:
    """``<,>_pol`` and ``<,>_Del`` at real ``0 < q < 1``, ``t = q^k``.

    The constant term is the mean over the unit circle (the Laurent expansion
    of ``mu`` converges on an annulus around it when ``t < 1``); ``mu`` is
    truncated to ``L`` factors per root.
    """

    def __init__(self, q: float, k: float, L: int = 40, points: int | None = None, eps: float = 1e-15):
        if not (0 < q < 1):
            raise ValueError("need 0 < q < 1")
        self.q, self.k, self.L = q, k, L
        self.t = q ** k
        if self.t >= 1:
            raise ValueError("need t = q^k < 1 for the constant-term functional")
        self.q4, self.t2 = q ** 0.25, self.t ** 0.5
        if points is None:
            # aliasing error of the circle average decays like t^(points/2)
            points = max(256, 2 * math.ceil(math.log(eps) / math.log(self.t)) + 16)
        self.nodes = np.exp(2j * np.pi * (np.arange(points) + 0.5) / points)
        self.mu = self._mu(self.nodes)
        self.ct_mu = self.mu.mean()
        self._rep = rank1()
        self._estar: dict = {}
        self._estar_at: dict = {}
        self._mu1: dict = {}

    def _mu(self, X):
        q, t = self.q, self.t
        p = np.ones_like(X)
        for j in range(self.L + 1):
            a = q ** j * X * X
            p = p * (1 - a) / (1 - t * a)
            if j:
                a = q ** j / (X * X)
                p = p * (1 - a) / (1 - t * a)
        return p

    def num(self, r: RatFunc) -> float:
        return complex(r.evaluate(self.q4, self.t2)).real

    def estar(self, b: int) -> dict:
        if b not in self._estar:
            e = macdonald(b)
            self._estar[b] = {-k[0]: self.num(a.invert_parameters()) for k, a in e.items()}
        return self._estar[b]

    def estar_at(self, c: int, b: int) -> float:
        """``epsilon_c^*(pi_b)``."""
        key = (c, b)
        if key not in self._estar_at:
            val = self._rep.eval_at_pi(macdonald(c), (b,)).invert_parameters()
            self._estar_at[key] = self.num(val)
        return self._estar_at[key]

    def mu1(self, b: int) -> float:
        if b not in self._mu1:
            self._mu1[b] = self.num(mu1(b))
        return self._mu1[b]

    def gamma(self, b: int) -> float:
        return self.q ** float(gaussian_exponent(b, self.k))

    def _Tinv(self, f: dict) -> dict:
        out: dict = {}
        c = self.t2 - 1 / self.t2
        for m, a in f.items():
            for kk, v in self._rep.T(1, LaurentPoly.monomial((m,), ONE)).items():
                out[kk[0]] = out.get(kk[0], 0.0) + a * self.num(v)
            out[m] = out.get(m, 0.0) - c * a
        return out

    def ct(self, f: dict) -> float:
        vals = np.zeros_like(self.nodes)
        for m, a in f.items():
            vals = vals + a * self.nodes ** m
        return float(((vals * self.mu).mean() / self.ct_mu).real)

    def pol(self, f: dict, g: dict) -> float:
        """``<f T_{w_0}^{-1}(g) mu^0>``: in rank one ``w_0(g(X^{-1})) = g``."""
        h = self._Tinv(g)
        prod: dict = {}
        for m, a in f.items():
            for n, b in h.items():
                prod[m + n] = prod.get(m + n, 0.0) + a * b
        return self.ct(prod)

    def del_pairing(self, f: dict, g: dict) -> float:
        return sum(f[b] * g[b] / self.mu1(b) for b in f if b in g)

    def transform(self, f: dict) -> dict:
        out: dict = {}
        for b, a in f.items():
            for m, c in self.estar(b).items():
                out[m] = out.get(m, 0.0) + a * c
        return out

    def invert(self, fhat: dict, support: Iterable[int]) -> dict:
        """``f_b = t^{1/2} mu^1(pi_b) <fhat, epsilon_b^*>_pol``."""
        return {b: self.t2 * self.mu1(b) * self.pol(fhat, self.estar(b)) for b in support}


@dataclass
class FourierReport:
    setting: dict
    checks: dict
    values: dict
    warnings: list

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"setting": self.setting, "checks": self.checks, "values": self.values,
                "warnings": self.warnings, "passed": self.passed}


def gaussian_readings(P: NumericPairings, L: int) -> dict:
    """The three readings of ``<1, gamma>_Del`` next to the product side.

    * ``delta_0``: ``1`` is the basis vector ``delta_0^#``;
    * ``constant``: ``1`` is the function ``sum_b delta_b^#``;
    * ``delta-function``: functions ``F`` are placed in ``Delta^#`` as
      ``sum_b F(pi_b) mu^1(pi_b) delta_b^#`` (the identification used for the
      involution), applied to both ``1`` and ``gamma``.

    The lattice sum on the product side is taken in two ways: over the
    values ``gamma(pi_a)`` and as the theta series ``sum_a q^{(a + k rho)^2/2}``.
    """
    q, t, k = P.q, P.t, P.k
    rng = range(-L, L + 1)
    prod = 1.0
    j = 1
    while True:
        f = (1 - t * q ** j) / (1 - q ** j)
        prod *= f
        if abs(f - 1) < 1e-18 or j > 10000:
            break
        j += 1
    sum_gamma = sum(P.gamma(a) for a in rng)
    theta = sum(q ** ((a + k) ** 2 / 4) for a in rng)
    lhs = {
        "delta_0": P.gamma(0) / P.mu1(0),
        "constant": sum(P.gamma(a) / P.mu1(a) for a in rng),
        "delta-function": sum(P.gamma(a) * P.mu1(a) for a in rng),
    }
    rhs = {"gamma-sum": sum_gamma * prod, "theta": theta * prod}
    return {"lhs": lhs, "rhs": rhs}


def fourier_numeric(q: float = 0.5, k: float = 1.0, L: int = 40, support: int = 3, seed: int = 0,
                    tol: float = 1e-8) -> FourierReport:
    """Inversion, Plancherel and the Gaussian identities at real ``q``."""
    P = NumericPairings(q, k, L)
    rng = random.Random(seed)
    sup = list(range(-support, support + 1))
    f = {b: rng.randint(-5, 5) + 0.5 for b in sup}
    g = {b: rng.randint(-5, 5) - 0.25 for b in sup}
    fhat, ghat = P.transform(f), P.transform(g)
    back = P.invert(fhat, range(-support - 2, support + 3))
    inv_err = max(abs(back[b] - f.get(b, 0.0)) for b in back)
    plan = abs(P.del_pairing(f, g) - P.t2 * P.pol(fhat, ghat))
    unit = P.transform({0: 1.0})
    unit_ok = set(unit) == {0} and abs(unit[0] - 1) < tol

    warnings = []
    tail = max(P.gamma(a) * max(P.mu1(a), 1 / P.mu1(a)) for a in (-L, L))
    if tail > tol:
        warnings.append(f"truncation L={L} leaves a tail term of size {tail:.2e}")

    readings = gaussian_readings(P, L)
    scale = max(abs(v) for v in readings["rhs"].values())
    matches = {
        f"{a} ~ {b}": abs(readings["lhs"][a] - readings["rhs"][b]) <= tol * scale
        for a in readings["lhs"] for b in readings["rhs"]
    }
    selected = [m for m, ok in matches.items() if ok]

    # the pairing identity with epsilon^*-values, delta-function reading
    one_gamma = readings["lhs"]["delta-function"]
    worst = 0.0
    for b in range(-2, 3):
        for c in range(-2, 3):
            lhs = sum(P.mu1(a) * P.estar_at(b, a) * P.estar_at(c, a) * P.gamma(a) for a in range(-L, L + 1))
            rhs = P.gamma(0) ** 2 / (P.gamma(b) * P.gamma(c)) * P.estar_at(c, b) * one_gamma
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))

    checks = {
        "unit transform": unit_ok,
        "inversion": inv_err <= tol,
        "plancherel": plan <= tol * max(1.0, abs(P.del_pairing(f, g))),
        "gaussian product matched": bool(selected),
        "gaussian pairing identity": worst <= tol,
    }
    values = {
        "inversion_error": inv_err,
        "plancherel_error": plan,
        "gaussian": readings,
        "reading_matches": matches,
        "selected_reading": selected,
        "pairing_identity_error": worst,
    }
    return FourierReport({"q": q, "k": k, "L": L, "support": support}, checks, values, warnings)


def positivity(q: float = 0.5, k: float = 0.2, support: int = 3, L: int = 40) -> dict:
    """Smallest eigenvalues of both Gram matrices on ``|b| <= support``."""
    P = NumericPairings(q, k, L)
    sup = list(range(-support, support + 1))
    G = np.array([[P.pol(P.estar(b), P.estar(c)) for c in sup] for b in sup])
    sym_err = float(np.max(np.abs(G - G.T)))
    pol_min = float(np.linalg.eigvalsh((G + G.T) / 2).min())
    del_min = min(1 / P.mu1(b) for b in sup)
    return {"pol_min_eigenvalue": pol_min, "del_min_weight": del_min, "pol_symmetry_error": sym_err,
            "positive": pol_min > 0 and del_min > 0 and sym_err < 1e-10, "h": 2, "k": k}


# --------------------------------------------------------------------------
# Fourier transform at roots of unity
# --------------------------------------------------------------------------

def label_to_weight(z: Fraction, k) -> int:
    """Inverse of ``b -> pi_b((-k rho))/2`` on omega-coordinates."""
    k = Fraction(k)
    m = 2 * z + k
    if m <= 0:
        return int(m)
    return int(2 * z - k)


def fourier_root(N: int, k, seed: int = 0) -> FourierReport:
    """Round trip through the finite Fourier transform of the Verlinde module.

    ``f`` lives on the labels, ``fhat = sum f_i p_i`` is a function on the
    points, and the inversion ``f_i = mu_i <fhat, p_i> / <1, 1>`` is checked
    exactly.  The weights are compared with ``mu^1(pi_b)`` up to one scale.
    """
    from .verlinde import build_verlinde, gaussian_and_sigma

    M = build_verlinde(N, k)
    F = gaussian_and_sigma(M)
    fld = M.field
    n = M.dim
    pts = M.labels
    mu = [F.mu[z] for z in pts]
    p = [[F.sigma[r][i] / mu[i] for r in range(n)] for i in range(n)]

    def inner(a, b):
        s = fld.zero
        for i in range(n):
            s = s + mu[i] * a[i] * fld.conj(b[i])
        return s

    rng = random.Random(seed)
    o = pts.index(M.zero_point)
    idx = sorted(range(n), key=lambda i: abs(i - o))[:7]
    f = [fld.const(rng.randint(-4, 4)) if i in idx else fld.zero for i in range(n)]
    fhat = [fld.zero] * n
    for i in range(n):
        if f[i]:
            for r in range(n):
                fhat[r] = fhat[r] + f[i] * p[i][r]
    ones = [fld.one] * n
    norm = inner(ones, ones)
    back = [mu[i] * inner(fhat, p[i]) / norm for i in range(n)]

    ratios = []
    for i, z in enumerate(pts):
        b = label_to_weight(z, k)
        try:
            w = fld.from_ratfunc(mu1(b), M.th)
        except ZeroDivisionError:
            continue
        ratios.append(w / mu[i])
    weights_ok = bool(ratios) and all(r == ratios[0] for r in ratios)
    unit = p[o] == ones
    checks = {"roundtrip exact": back == f, "unit transform": unit, "mu^1 proportional to weights": weights_ok}
    values = {"dim": n, "compared_weights": len(ratios)}
    return FourierReport({"N": N, "k": str(Fraction(k))}, checks, values, [])


def padic_suite(L_ball: int = 12, L_sph: int = 10) -> dict:
    """Everything the p-adic layer checks, as plain booleans plus reports."""
    out = {}
    out["matsumoto"] = matsumoto_recursion_check(10)
    _, rep = deformed_regular(L_ball)
    out["deformed"] = rep.to_json()
    out["limit"] = limit_check(L_ball).to_json()
    out["spherical"] = spherical_module(L_sph).to_json()
    out["fourier_root"] = [fourier_root(N, k).to_json() for N, k in ((5, 1), (7, 2))]
    out["fourier_numeric"] = [fourier_numeric(q, k).to_json() for q, k in ((0.5, 1.0), (0.3, 1.0), (0.5, 2.0))]
    out["positivity"] = positivity()
    return out
