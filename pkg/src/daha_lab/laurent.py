"""Sparse Laurent polynomials over an arbitrary coefficient field.

Exponents are integer tuples (weights in the fundamental-weight basis).
Coefficients may be ``RatFunc``, ``Cyclotomic``, ``Fraction``, ``int`` or
``complex``; only ring operations and a truth test are used.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping


def _is_zero(c) -> bool:
    return not c


class LaurentPoly:
    """Immutable map ``exponent tuple -> coefficient`` without zero entries."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | Iterable | None = None):
        clean = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for e, c in items:
                e = tuple(e)
                if e in clean:
                    c = clean[e] + c
                if _is_zero(c):
                    clean.pop(e, None)
                else:
                    clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def monomial(cls, e, c=1) -> "LaurentPoly":
        return cls({tuple(e): c})

    @classmethod
    def const(cls, c, rank: int = 1) -> "LaurentPoly":
        return cls({(0,) * rank: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, e, default=0):
        return self.terms.get(tuple(e), default)

    def support(self) -> list:
        return sorted(self.terms)

    def items(self):
        return self.terms.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((e, hash(c)) for e, c in self.terms.items()))
        return self._hash

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if _is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return _raw(out)

    def __neg__(self) -> "LaurentPoly":
        return _raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def scale(self, s) -> "LaurentPoly":
        if _is_zero(s):
            return _raw({})
        out = {}
        for e, c in self.terms.items():
            p = c * s
            if not _is_zero(p):
                out[e] = p
        return _raw(out)

    def shift(self, e, c=None) -> "LaurentPoly":
        """Multiply by the monomial ``c X^e``."""
        e = tuple(e)
        if c is None:
            return _raw({tuple(a + b for a, b in zip(k, e)): v for k, v in self.terms.items()})
        return _raw({tuple(a + b for a, b in zip(k, e)): v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return LaurentPoly(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self.terms.items()
            return _raw({tuple(-x for x in e): 1 / c}) ** (-n)
        rank = len(next(iter(self.terms))) if self.terms else 1
        out = LaurentPoly.const(1, rank)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def map_exponents(self, fn: Callable) -> "LaurentPoly":
        """Apply ``fn(e) -> (e', factor)`` to every monomial."""
        out: dict = {}
        for e, c in self.terms.items():
            e2, factor = fn(e)
            val = c if factor is None else c * factor
            if e2 in out:
                out[e2] = out[e2] + val
            else:
                out[e2] = val
        return LaurentPoly(out)

    def map_coeffs(self, fn: Callable) -> "LaurentPoly":
        return LaurentPoly({e: fn(c) for e, c in self.terms.items()})

    def evaluate(self, monomial_value: Callable, zero=0):
        """``sum c * monomial_value(e)``."""
        total = zero
        for e, c in self.terms.items():
            total = total + c * monomial_value(e)
        return total

    def is_symmetric_rank1(self) -> bool:
        return all(self.terms.get((-e[0],)) == c for e, c in self.terms.items())

    def max_abs_degree(self) -> int:
        return max((max(abs(x) for x in e) for e in self.terms), default=0)

    def __repr__(self) -> str:
        parts = [f"({c})*X^{e}" for e, c in sorted(self.terms.items())]
        return "LaurentPoly(" + " + ".join(parts) + ")"


def _raw(d: dict) -> LaurentPoly:
    out = LaurentPoly.__new__(LaurentPoly)
    out.terms = d
    out._hash = None
    return out


def divide_rank1(f: LaurentPoly, d: int, shift: int = 0) -> LaurentPoly:
    """Exact quotient ``f / (X^shift (X^d - 1))`` for one-variable ``f``.

    Raises ``ArithmeticError`` when the division leaves a remainder.
    """
    if d <= 0:
        raise ValueError("d must be positive")
    if not f.terms:
        return f
    rem = {e[0]: c for e, c in f.terms.items()}
    quo: dict = {}
    while rem:
        top = max(rem)
        if top - min(rem) < d:
            raise ArithmeticError("division leaves a remainder")
        c = rem.pop(top)
        low = top - d
        quo[(low - shift,)] = c
        s = rem.get(low, 0) + c
        if _is_zero(s):
            rem.pop(low, None)
        else:
            rem[low] = s
    return LaurentPoly(quo)
