"""Exact coefficient rings.

Three kinds of scalars are used throughout the package:

* ``RatFunc``: rational functions with integer coefficients in two formal
  symbols ``u = q^(1/4)`` and ``v = t^(1/2)``.  Negative exponents are allowed.
* ``Cyclotomic``: elements of Q(zeta_M) in the power basis modulo the M-th
  cyclotomic polynomial.
* ``QSeries``: truncated series in ``q^(1/4)`` whose coefficients are Laurent
  polynomials in ``v`` with integer coefficients.

All values are immutable.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import flint

__all__ = [
    "RatFunc",
    "Cyclotomic",
    "QSeries",
    "PoleError",
    "specialize",
    "U",
    "V",
    "ONE",
    "ZERO",
    "qpow",
    "tpow",
    "vpoly_mul",
    "vpoly_add",
]


class PoleError(ZeroDivisionError):
    """Raised when a denominator vanishes at a specialization point."""


_CTX = flint.fmpz_mpoly_ctx.get(("u", "v"), "lex")
_PZERO = _CTX.from_dict({})
_PONE = _CTX.from_dict({(0, 0): 1})


def _items(p):
    return [(int(a), int(b), int(c)) for (a, b), c in p.to_dict().items()]


def _monomial_gcd(p) -> tuple[int, int]:
    monoms = p.monoms()
    return (int(min(m[0] for m in monoms)), int(min(m[1] for m in monoms)))


def _shift_down(p, eu: int, ev: int):
    if eu == 0 and ev == 0:
        return p
    return p // _CTX.from_dict({(eu, ev): 1})


def _shift_up(p, eu: int, ev: int):
    if eu == 0 and ev == 0:
        return p
    return p * _CTX.from_dict({(eu, ev): 1})


class RatFunc:
    """A Laurent rational function ``u^eu v^ev * num / den``.

    Canonical form: ``num`` and ``den`` are polynomials in ``u, v`` that are
    not divisible by ``u`` or ``v``, they are coprime over Z, and the leading
    coefficient of ``den`` in lex order is positive.  Zero is stored as
    ``num = 0, den = 1`` with zero shift.
    """

    __slots__ = ("_num", "_den", "_eu", "_ev", "_hash")

    def __init__(self, num=None, den=None, eu: int = 0, ev: int = 0, _canonical: bool = False):
        if num is None:
            num = _PZERO
        elif isinstance(num, int):
            num = _CTX.from_dict({(0, 0): num}) if num else _PZERO
        if den is None:
            den = _PONE
        elif isinstance(den, int):
            den = _CTX.from_dict({(0, 0): den})
        if _canonical:
            self._num, self._den, self._eu, self._ev = num, den, eu, ev
        else:
            self._num, self._den, self._eu, self._ev = self._canonicalize(num, den, eu, ev)
        self._hash = None

    @staticmethod
    def _canonicalize(num, den, eu, ev):
        if den.is_zero():
            raise ZeroDivisionError("RatFunc with zero denominator")
        if num.is_zero():
            return _PZERO, _PONE, 0, 0
        a, b = _monomial_gcd(num)
        num = _shift_down(num, a, b)
        c, d = _monomial_gcd(den)
        den = _shift_down(den, c, d)
        eu += a - c
        ev += b - d
        if not den.is_constant() or not num.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
        else:
            g = math.gcd(int(num.leading_coefficient()), int(den.leading_coefficient()))
            if g != 1:
                num = num // g
                den = den // g
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return num, den, eu, ev

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "RatFunc":
        if isinstance(c, RatFunc):
            return c
        if isinstance(c, Fraction):
            return cls(int(c.numerator), int(c.denominator))
        return cls(int(c))

    @classmethod
    def monomial(cls, eu: int = 0, ev: int = 0, coeff: int = 1) -> "RatFunc":
        if coeff == 0:
            return cls()
        return cls(_CTX.from_dict({(0, 0): coeff}), _PONE, eu, ev, _canonical=coeff != 0)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, int]], den_terms=None) -> "RatFunc":
        num, eu, ev = _laurent_from_terms(terms)
        if den_terms is None:
            return cls(num, _PONE, eu, ev)
        den, du, dv = _laurent_from_terms(den_terms)
        return cls(num, den, eu - du, ev - dv)

    # -- accessors --------------------------------------------------------
    def num_terms(self) -> list[tuple[int, int, int]]:
        """Numerator as sorted ``(e_u, e_v, c)`` triples with the shift applied."""
        return sorted(
            (a + self._eu, b + self._ev, c) for a, b, c in _items(self._num)
        )

    def den_terms(self) -> list[tuple[int, int, int]]:
        return sorted(_items(self._den))

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.is_constant() and self._den.leading_coefficient() == 1

    def is_constant(self) -> bool:
        return self._eu == 0 and self._ev == 0 and self._num.is_constant() and self._den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        if self.is_zero():
            return Fraction(0)
        return Fraction(int(self._num.leading_coefficient()), int(self._den.leading_coefficient()))

    def _key(self):
        return (self._eu, self._ev, tuple(sorted(_items(self._num))), tuple(sorted(_items(self._den))))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __bool__(self) -> bool:
        return not self._num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (
            self._eu == other._eu
            and self._ev == other._ev
            and self._num == other._num
            and self._den == other._den
        )

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        eu = min(self._eu, other._eu)
        ev = min(self._ev, other._ev)
        n1 = _shift_up(self._num, self._eu - eu, self._ev - ev)
        n2 = _shift_up(other._num, other._eu - eu, other._ev - ev)
        if self._den == other._den:
            return RatFunc(n1 + n2, self._den, eu, ev)
        g = self._den.gcd(other._den)
        if g.is_one():
            return RatFunc(n1 * other._den + n2 * self._den, self._den * other._den, eu, ev)
        d1 = self._den // g
        d2 = other._den // g
        return RatFunc(n1 * d2 + n2 * d1, d1 * other._den, eu, ev)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self._num, self._den, self._eu, self._ev, _canonical=True)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFunc()
        n1, d1, n2, d2 = self._num, self._den, other._num, other._den
        g = n1.gcd(d2)
        if not g.is_one():
            n1, d2 = n1 // g, d2 // g
        g = n2.gcd(d1)
        if not g.is_one():
            n2, d1 = n2 // g, d1 // g
        num = n1 * n2
        den = d1 * d2
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return RatFunc(num, den, self._eu + other._eu, self._ev + other._ev, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("division by zero RatFunc")
        num, den = self._den, self._num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return RatFunc(num, den, -self._eu, -self._ev, _canonical=True)

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return ONE
        num = self._num ** n
        den = self._den ** n
        return RatFunc(num, den, self._eu * n, self._ev * n, _canonical=True)

    # -- substitutions ----------------------------------------------------
    def substitute(self, su: tuple[int, int, int], sv: tuple[int, int, int]) -> "RatFunc":
        """Apply the monomial map ``u -> c_u u^a v^b`` and ``v -> c_v u^c v^d``.

        ``su = (a, b, c_u)`` with ``c_u`` equal to 1 or -1, and likewise for ``sv``.
        """
        def img(p, eu, ev):
            terms = []
            for a, b, c in _items(p):
                a += eu
                b += ev
                sign = (su[2] ** a) * (sv[2] ** b)
                terms.append((a * su[0] + b * sv[0], a * su[1] + b * sv[1], c * sign))
            return _laurent_from_terms(terms)

        n, nu, nv = img(self._num, self._eu, self._ev)
        d, du, dv = img(self._den, 0, 0)
        return RatFunc(n, d, nu - du, nv - dv)

    def invert_parameters(self) -> "RatFunc":
        """``q -> q^-1`` and ``t -> t^-1``."""
        return self.substitute((-1, 0, 1), (0, -1, 1))

    def conj_v(self) -> "RatFunc":
        """``t^(1/2) -> t^(-1/2)``."""
        return self.substitute((1, 0, 1), (0, -1, 1))

    # -- evaluation -------------------------------------------------------
    def evaluate(self, uval, vval):
        num = _eval_poly(self._num, self._eu, self._ev, uval, vval)
        den = _eval_poly(self._den, 0, 0, uval, vval)
        if _is_zero_value(den):
            raise PoleError("denominator vanishes at the specialization point")
        return num / den

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {"num": [list(t) for t in self.num_terms()], "den": [list(t) for t in self.den_terms()]}

    @classmethod
    def from_json(cls, data: dict) -> "RatFunc":
        return cls.from_terms([tuple(t) for t in data["num"]], [tuple(t) for t in data["den"]])

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        def fmt(terms):
            parts = []
            for a, b, c in sorted(terms, reverse=True):
                mono = "*".join(
                    s for s in (
                        (f"u^{a}" if a != 1 else "u") if a else "",
                        (f"v^{b}" if b != 1 else "v") if b else "",
                    ) if s
                )
                if not mono:
                    parts.append(str(c))
                elif c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{c}*{mono}")
            return " + ".join(parts).replace("+ -", "- ") or "0"

        num = fmt(self.num_terms())
        if self.is_laurent():
            return num
        return f"({num})/({fmt(self.den_terms())})"


def _laurent_from_terms(terms):
    terms = [(int(a), int(b), int(c)) for a, b, c in terms if c]
    if not terms:
        return _PZERO, 0, 0
    eu = min(t[0] for t in terms)
    ev = min(t[1] for t in terms)
    acc: dict[tuple[int, int], int] = {}
    for a, b, c in terms:
        key = (a - eu, b - ev)
        acc[key] = acc.get(key, 0) + c
    acc = {k: c for k, c in acc.items() if c}
    if not acc:
        return _PZERO, 0, 0
    return _CTX.from_dict(acc), eu, ev


def _is_zero_value(x) -> bool:
    if isinstance(x, Cyclotomic):
        return x.is_zero()
    if isinstance(x, complex) or isinstance(x, float):
        return x == 0
    return not x


def _eval_poly(p, eu, ev, uval, vval):
    if isinstance(uval, Cyclotomic) and isinstance(vval, Cyclotomic):
        eu_z = uval.as_root_power()
        ev_z = vval.as_root_power()
        if eu_z is not None and ev_z is not None and eu_z[0] == ev_z[0]:
            order = eu_z[0]
            acc = [Fraction(0)] * order
            for a, b, c in _items(p):
                e = ((a + eu) * eu_z[1] + (b + ev) * ev_z[1]) % order
                acc[e] += c
            return Cyclotomic.from_power_coeffs(order, acc)
    total = None
    cache_u: dict[int, object] = {}
    cache_v: dict[int, object] = {}
    for a, b, c in _items(p):
        a += eu
        b += ev
        if a not in cache_u:
            cache_u[a] = uval ** a
        if b not in cache_v:
            cache_v[b] = vval ** b
        term = cache_u[a] * cache_v[b] * c
        total = term if total is None else total + term
    if total is None:
        return 0 * uval
    return total


U = RatFunc.monomial(1, 0)
V = RatFunc.monomial(0, 1)
ONE = RatFunc.monomial(0, 0)
ZERO = RatFunc()


def qpow(e) -> RatFunc:
    """``q^e`` for ``e`` a multiple of 1/4."""
    e = Fraction(e) * 4
    if e.denominator != 1:
        raise ValueError("q exponent must be a multiple of 1/4")
    return RatFunc.monomial(int(e), 0)


def tpow(e) -> RatFunc:
    """``t^e`` for ``e`` a multiple of 1/2."""
    e = Fraction(e) * 2
    if e.denominator != 1:
        raise ValueError("t exponent must be a multiple of 1/2")
    return RatFunc.monomial(0, int(e))


def specialize(a: RatFunc, q4=None, t2=None, *, q=None, t=None):
    """Evaluate ``a`` at a point.

    The point is given by the values of ``q^(1/4)`` and ``t^(1/2)`` (``q4`` and
    ``t2``).  For numeric values ``q`` and ``t`` may be given instead; the
    principal roots are then used.
    """
    if q4 is None:
        if q is None:
            raise ValueError("need q4 or q")
        if isinstance(q, Cyclotomic):
            raise ValueError("pass q^(1/4) explicitly for cyclotomic points")
        q4 = _principal_root(q, 4)
    if t2 is None:
        if t is None:
            raise ValueError("need t2 or t")
        if isinstance(t, Cyclotomic):
            raise ValueError("pass t^(1/2) explicitly for cyclotomic points")
        t2 = _principal_root(t, 2)
    return a.evaluate(q4, t2)


def _principal_root(x, n: int):
    if isinstance(x, (int, Fraction, float)) and x > 0:
        return float(x) ** (1.0 / n)
    return complex(x) ** (1.0 / n)


# --------------------------------------------------------------------------
# Cyclotomic fields
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cyclo_poly(order: int):
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(order).coeffs())


@lru_cache(maxsize=None)
def _phi(order: int) -> int:
    return _cyclo_poly(order).degree()


@lru_cache(maxsize=None)
def _zeta_power_poly(order: int, e: int):
    e %= order
    coeffs = [0] * (e + 1)
    coeffs[e] = 1
    return flint.fmpq_poly(coeffs) % _cyclo_poly(order)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class Cyclotomic:
    """An element of Q(zeta_M) with ``zeta_M = exp(2 pi i / M)``."""

    __slots__ = ("order", "_poly", "_root")

    def __init__(self, order: int, poly=None, _reduced: bool = False):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        if poly is None:
            poly = flint.fmpq_poly([])
        elif not isinstance(poly, flint.fmpq_poly):
            poly = flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in poly])
        if not _reduced and poly.degree() >= _phi(order):
            poly = poly % _cyclo_poly(order)
        self._poly = poly
        self._root = False

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "Cyclotomic":
        out = cls(order, _zeta_power_poly(order, power), _reduced=True)
        out._root = (order, power % order)
        return out

    @classmethod
    def const(cls, order: int, c) -> "Cyclotomic":
        c = Fraction(c)
        return cls(order, flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator)]), _reduced=True)

    @classmethod
    def from_coords(cls, order: int, coords) -> "Cyclotomic":
        coords = [Fraction(c) for c in coords]
        if len(coords) != _phi(order):
            raise ValueError("coordinate vector has the wrong length")
        return cls(order, coords)

    @classmethod
    def from_power_coeffs(cls, order: int, coeffs) -> "Cyclotomic":
        """``sum_e coeffs[e] zeta^e`` for ``e`` in ``range(len(coeffs))``."""
        poly = flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in coeffs])
        return cls(order, poly)

    # -- basic queries ----------------------------------------------------
    @property
    def coords(self) -> tuple[Fraction, ...]:
        n = _phi(self.order)
        raw = [_to_fraction(c) for c in self._poly.coeffs()]
        return tuple(raw + [Fraction(0)] * (n - len(raw)))

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def __bool__(self) -> bool:
        return not self._poly.is_zero()

    def as_root_power(self):
        """``(M, e)`` if this element was built as ``zeta_M^e``, else None."""
        return self._root or None

    def is_rational(self) -> bool:
        return self._poly.degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coords[0] if self.coords else Fraction(0)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.order)
        total = 0j
        for i, c in enumerate(self._poly.coeffs()):
            if c != 0:
                total += float(_to_fraction(c)) * z ** i
        return total

    __complex__ = to_complex

    def lift(self, order: int) -> "Cyclotomic":
        """Embed into Q(zeta_order); ``order`` must be a multiple of ``self.order``."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError("target order must be a multiple")
        step = order // self.order
        out = _lift_poly(self._poly, step, order)
        res = Cyclotomic(order, out)
        if self._root:
            res._root = (order, self._root[1] * step)
        return res

    def _align(self, other):
        if isinstance(other, Cyclotomic):
            if other.order == self.order:
                return self, other
            m = math.lcm(self.order, other.order)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.const(self.order, other)
        if isinstance(other, RatFunc) and other.is_constant():
            return self, Cyclotomic.const(self.order, other.to_fraction())
        raise TypeError(f"cannot combine Cyclotomic with {type(other).__name__}")

    def __eq__(self, other) -> bool:
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return a._poly == b._poly

    def __hash__(self) -> int:
        return hash((self.order, tuple(self.coords)))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.order, a._poly + b._poly, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, -self._poly, _reduced=True)

    def __sub__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.order, a._poly - b._poly, _reduced=True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        if a._root and b._root:
            return Cyclotomic.zeta(a.order, a._root[1] + b._root[1])
        return Cyclotomic(a.order, a._poly * b._poly)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        return cyclo_inverse(self)

    def __truediv__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._align(other)
        return b * a.inverse()

    def __pow__(self, n: int):
        if self._root:
            return Cyclotomic.zeta(self.order, self._root[1] * n)
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic.const(self.order, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation ``zeta -> zeta^-1``."""
        acc = [Fraction(0)] * self.order
        for i, c in enumerate(self._poly.coeffs()):
            if c != 0:
                acc[(-i) % self.order] += _to_fraction(c)
        return Cyclotomic.from_power_coeffs(self.order, acc)

    def galois(self, r: int) -> "Cyclotomic":
        """The automorphism ``zeta -> zeta^r`` with ``gcd(r, M) = 1``."""
        if math.gcd(r, self.order) != 1:
            raise ValueError("exponent must be coprime to the order")
        acc = [Fraction(0)] * self.order
        for i, c in enumerate(self._poly.coeffs()):
            if c != 0:
                acc[(i * r) % self.order] += _to_fraction(c)
        return Cyclotomic.from_power_coeffs(self.order, acc)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def is_positive_real(self) -> bool:
        return self.is_real() and not self.is_zero() and self.to_complex().real > 0

    def to_json(self) -> dict:
        return {"order": self.order, "coords": [str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, data: dict) -> "Cyclotomic":
        return cls.from_coords(data["order"], [Fraction(c) for c in data["coords"]])

    def __repr__(self) -> str:
        return f"Cyclotomic({self.order}, {[str(c) for c in self.coords]})"


def _lift_poly(poly, step: int, order: int):
    coeffs = poly.coeffs()
    out = [flint.fmpq(0)] * (step * (len(coeffs) - 1) + 1) if coeffs else []
    for i, c in enumerate(coeffs):
        out[i * step] = c
    return flint.fmpq_poly(out) % _cyclo_poly(order)


def cyclo_inverse(a: Cyclotomic) -> Cyclotomic:
    """Inverse by the extended Euclidean algorithm against the cyclotomic polynomial."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in a cyclotomic field")
    if a._root:
        return Cyclotomic.zeta(a.order, -a._root[1])
    modulus = _cyclo_poly(a.order)
    r0, r1 = modulus, a._poly
    s0, s1 = flint.fmpq_poly([]), flint.fmpq_poly([1])
    while not r1.is_zero():
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
    if r0.degree() != 0:
        raise ArithmeticError("non-invertible remainder: cyclotomic modulus is not irreducible?")
    inv = s0 * flint.fmpq_poly([1 / r0.coeffs()[0]])
    return Cyclotomic(a.order, inv % modulus, _reduced=True)


# --------------------------------------------------------------------------
# Laurent polynomials in v with integer coefficients (dicts) and q-series
# --------------------------------------------------------------------------


def vpoly_add(a: dict, b: dict, scale: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + scale * c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def vpoly_mul(a: dict, b: dict) -> dict:
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


class QSeries:
    """Truncated series ``sum_e c_e(v) u^e`` with ``e < order`` (``u = q^(1/4)``).

    ``vwindow`` optionally bounds the ``v``-degree of every coefficient; a
    coefficient leaving the window raises ``OverflowError``.
    """

    __slots__ = ("order", "coeffs", "vwindow")

    def __init__(self, order: int, coeffs: dict | None = None, vwindow: int | None = None):
        self.order = order
        self.vwindow = vwindow
        clean: dict[int, dict[int, int]] = {}
        for e, c in (coeffs or {}).items():
            if e < order:
                c = {k: x for k, x in c.items() if x}
                if c:
                    clean[e] = c
        self.coeffs = clean
        if vwindow is not None:
            for c in clean.values():
                if any(abs(k) > vwindow for k in c):
                    raise OverflowError("coefficient leaves the v-window")

    @classmethod
    def one(cls, order: int, vwindow: int | None = None) -> "QSeries":
        return cls(order, {0: {0: 1}}, vwindow)

    @classmethod
    def monomial(cls, order: int, qe: int, ve: int = 0, c: int = 1, vwindow: int | None = None) -> "QSeries":
        return cls(order, {qe: {ve: c}}, vwindow)

    def valuation(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def _check(self, other: "QSeries"):
        if other.order != self.order:
            raise ValueError("truncation orders differ")

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, tuple(sorted((e, tuple(sorted(c.items()))) for e, c in self.coeffs.items()))))

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = vpoly_add(out.get(e, {}), c)
        return QSeries(self.order, out, self.vwindow)

    def __neg__(self) -> "QSeries":
        return QSeries(self.order, {e: {k: -x for k, x in c.items()} for e, c in self.coeffs.items()}, self.vwindow)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        out: dict[int, dict[int, int]] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= self.order:
                    continue
                out[e] = vpoly_add(out.get(e, {}), vpoly_mul(c1, c2))
        return QSeries(self.order, out, self.vwindow)

    def mul_binomial(self, qe: int, ve: int, c: int) -> "QSeries":
        """Multiply by ``1 + c u^qe v^ve`` (``qe > 0``)."""
        out = {e: dict(x) for e, x in self.coeffs.items()}
        for e, x in self.coeffs.items():
            if e + qe < self.order:
                shifted = {k + ve: c * y for k, y in x.items()}
                out[e + qe] = vpoly_add(out.get(e + qe, {}), shifted)
        return QSeries(self.order, out, self.vwindow)

    def div_binomial(self, qe: int, ve: int, c: int) -> "QSeries":
        """Divide by ``1 + c u^qe v^ve`` (``qe > 0``), exact to the truncation order."""
        if qe <= 0:
            raise ValueError("binomial must have positive q-valuation")
        out: dict[int, dict[int, int]] = {}
        start = self.valuation()
        if start is None:
            return self
        for e in range(start, self.order):
            cur = dict(self.coeffs.get(e, {}))
            prev = out.get(e - qe)
            if prev:
                cur = vpoly_add(cur, {k + ve: y for k, y in prev.items()}, -c)
            if cur:
                out[e] = cur
        return QSeries(self.order, out, self.vwindow)

    def truncate(self, order: int) -> "QSeries":
        return QSeries(order, {e: c for e, c in self.coeffs.items() if e < order}, self.vwindow)

    def __repr__(self) -> str:
        return f"QSeries(order={self.order}, terms={len(self.coeffs)})"
