"""Finite and affine root data for reduced root systems of rank at most 4.

Conventions
-----------
Weights are integer (or rational) tuples in the basis of fundamental weights.
The bilinear form is normalized so that short roots have squared length 2;
``theta`` denotes the maximal short root, so ``(theta, theta) = 2``.

An element of the extended affine Weyl group is stored as a pair ``(c, w)``
standing for the product ``c * w`` (first ``w``, then the translation by
``c``).  It acts on affine roots ``[z, zeta]`` by
``[z, zeta] -> [w(z), zeta - (w(z), c)]`` and on points by
``z -> w(z) + c``.  The element written ``w b`` in the usual notation is
``(w(b), w)`` here.
"""

from __future__ import annotations

import json
from collections import deque
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

Vec = tuple
Mat = tuple

__all__ = [
    "RootSystem",
    "ExtWeylElem",
    "root_system",
    "AffineRoot",
]

AffineRoot = tuple  # (alpha as omega-coordinate tuple, Fraction level)


def _gram_simple(kind: str, n: int) -> list[list[int]]:
    """Inner products of simple roots, short roots of squared length 2."""
    B = [[0] * n for _ in range(n)]
    if kind in ("A", "D"):
        for i in range(n):
            B[i][i] = 2
        for i in range(n - 1):
            B[i][i + 1] = B[i + 1][i] = -1
        if kind == "D":
            if n < 4:
                raise ValueError("D_n needs n >= 4")
            B[n - 2][n - 1] = B[n - 1][n - 2] = 0
            B[n - 3][n - 1] = B[n - 1][n - 3] = -1
    elif kind == "B":
        for i in range(n - 1):
            B[i][i] = 4
            B[i][i + 1] = B[i + 1][i] = -2
        B[n - 1][n - 1] = 2
    elif kind == "C":
        for i in range(n - 1):
            B[i][i] = 2
        for i in range(n - 2):
            B[i][i + 1] = B[i + 1][i] = -1
        B[n - 1][n - 1] = 4
        if n >= 2:
            B[n - 2][n - 1] = B[n - 1][n - 2] = -2
    elif kind == "G":
        if n != 2:
            raise ValueError("G only in rank 2")
        B = [[2, -3], [-3, 6]]
    elif kind == "F":
        if n != 4:
            raise ValueError("F only in rank 4")
        B = [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    else:
        raise ValueError(f"unknown type {kind}")
    return B


def _mat_inv(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _matmul(A: Mat, B: Mat) -> Mat:
    n = len(A)
    m = len(B[0])
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(m)) for i in range(n)
    )


def _matvec(A: Mat, v: Sequence) -> Vec:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def _add(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def _scale(c, a: Sequence) -> Vec:
    return tuple(c * x for x in a)


def _norm(v: Iterable) -> Vec:
    out = []
    for x in v:
        if isinstance(x, Fraction) and x.denominator == 1:
            out.append(int(x))
        else:
            out.append(x)
    return tuple(out)


class RootSystem:
    """Root data of a reduced irreducible root system."""

    def __init__(self, kind: str, rank: int):
        if rank < 1 or rank > 4:
            raise ValueError("rank must be between 1 and 4")
        self.kind = kind
        self.rank = n = rank
        B = _gram_simple(kind, n)
        self.simple_gram = B
        self.cartan = [[2 * B[i][j] // B[j][j] for j in range(n)] for i in range(n)]
        C = [[Fraction(x) for x in row] for row in self.cartan]
        Cinv = _mat_inv(C)
        CinvT = [list(r) for r in zip(*Cinv)]
        Bf = [[Fraction(x) for x in row] for row in B]
        G = _matmul(_matmul(Cinv, Bf), CinvT)
        self.gram = tuple(tuple(x for x in row) for row in G)
        self.simple_roots = tuple(tuple(self.cartan[i]) for i in range(n))
        self._build_roots()

    # -- basic pairings -------------------------------------------------
    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    def pair(self, a: Sequence, b: Sequence) -> Fraction:
        G = self.gram
        n = self.rank
        total = Fraction(0)
        for i in range(n):
            if a[i]:
                row = G[i]
                for j in range(n):
                    if b[j]:
                        total += a[i] * row[j] * b[j]
        return total

    def nu(self, alpha: Sequence) -> Fraction:
        return self.pair(alpha, alpha) / 2

    def copair(self, b: Sequence, alpha: Sequence) -> Fraction:
        """``(b, alpha^vee)``."""
        return 2 * self.pair(b, alpha) / self.pair(alpha, alpha)

    def omega(self, i: int) -> Vec:
        """Fundamental weight ``omega_i`` (1-based)."""
        return tuple(int(j == i - 1) for j in range(self.rank))

    def zero(self) -> Vec:
        return (0,) * self.rank

    def reflect(self, b: Sequence, alpha: Sequence) -> Vec:
        c = self.copair(b, alpha)
        return _norm(_sub(b, _scale(c, alpha)))

    def simple_reflect(self, i: int, b: Sequence) -> Vec:
        """``s_i`` for ``1 <= i <= n`` (1-based as in the literature)."""
        alpha = self.simple_roots[i - 1]
        return tuple(x - b[i - 1] * a for x, a in zip(b, alpha))

    def is_positive_root(self, alpha: Sequence) -> bool:
        return tuple(alpha) in self._positive_set

    def is_dominant(self, b: Sequence) -> bool:
        return all(x >= 0 for x in b)

    # -- roots ------------------------------------------------------------
    def _build_roots(self):
        n = self.rank
        roots_rc = set()
        frontier = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        roots_rc.update(frontier)
        while frontier:
            new = []
            for beta in frontier:
                for i in range(n):
                    c = sum(beta[j] * self.cartan[j][i] for j in range(n))
                    img = tuple(beta[j] - (c if j == i else 0) for j in range(n))
                    if img not in roots_rc:
                        roots_rc.add(img)
                        new.append(img)
            frontier = new
        pos_rc = sorted((r for r in roots_rc if all(x >= 0 for x in r)), key=lambda r: (sum(r), r))
        self.positive_roots_rc = tuple(pos_rc)
        self.positive_roots = tuple(self.root_to_weight(r) for r in pos_rc)
        self._positive_set = frozenset(self.positive_roots)
        self.roots = self.positive_roots + tuple(tuple(-x for x in a) for a in self.positive_roots)

    def root_to_weight(self, coeffs: Sequence[int]) -> Vec:
        n = self.rank
        return tuple(sum(coeffs[i] * self.cartan[i][j] for i in range(n)) for j in range(n))

    @cached_property
    def theta(self) -> Vec:
        """Maximal short root."""
        short = [(sum(rc), a) for rc, a in zip(self.positive_roots_rc, self.positive_roots) if self.pair(a, a) == 2]
        return max(short)[1]

    @cached_property
    def highest_root(self) -> Vec:
        return max(zip((sum(rc) for rc in self.positive_roots_rc), self.positive_roots))[1]

    @cached_property
    def rho(self) -> Vec:
        return (1,) * self.rank

    @cached_property
    def rho_vee(self) -> Vec:
        """Half the sum of positive coroots ``alpha / nu_alpha``."""
        tot = [Fraction(0)] * self.rank
        for a in self.positive_roots:
            nu = self.nu(a)
            for j in range(self.rank):
                tot[j] += Fraction(a[j]) / nu
        return _norm(x / 2 for x in tot)

    def rho_k(self, k_short, k_long=None) -> Vec:
        """``(1/2) sum_{alpha > 0} k_alpha alpha`` with ``k`` depending on the root length."""
        if k_long is None:
            k_long = k_short
        total = [0] * self.rank
        for a in self.positive_roots:
            k = k_short if self.pair(a, a) == 2 else k_long
            for j in range(self.rank):
                if a[j]:
                    total[j] = total[j] + k * a[j]
        return tuple(Fraction(x, 2) if isinstance(x, int) else x * Fraction(1, 2) for x in total)

    def k_of(self, alpha: Sequence, k_short, k_long=None):
        if k_long is None:
            k_long = k_short
        return k_short if self.pair(alpha, alpha) == 2 else k_long

    @cached_property
    def coxeter_number(self) -> int:
        return int(1 + self.pair(self.rho, self.theta))

    # -- Weyl group -------------------------------------------------------
    @cached_property
    def simple_reflection_matrices(self) -> tuple[Mat, ...]:
        n = self.rank
        mats = []
        for i in range(n):
            cols = [self.simple_reflect(i + 1, self.omega(j + 1)) for j in range(n)]
            mats.append(tuple(tuple(cols[j][r] for j in range(n)) for r in range(n)))
        return tuple(mats)

    @cached_property
    def identity(self) -> Mat:
        n = self.rank
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    @cached_property
    def weyl_group(self) -> dict:
        """Map from Weyl matrices to lexicographically minimal reduced words (BFS)."""
        words = {self.identity: ()}
        frontier = [self.identity]
        gens = self.simple_reflection_matrices
        while frontier:
            new = []
            for w in frontier:
                for i, s in enumerate(gens):
                    ws = _matmul(w, s)
                    if ws not in words:
                        words[ws] = words[w] + (i + 1,)
                        new.append(ws)
            frontier = sorted(new, key=lambda m: words[m])
        return words

    def weyl_length(self, w: Mat) -> int:
        return sum(1 for a in self.positive_roots if not self.is_positive_root(_matvec(w, a)))

    @cached_property
    def longest_element(self) -> Mat:
        return max(self.weyl_group, key=self.weyl_length)

    def weyl_inverse(self, w: Mat) -> Mat:
        word = self.weyl_group[w]
        out = self.identity
        for i in word:
            out = _matmul(self.simple_reflection_matrices[i - 1], out)
        return out

    def reflection_matrix(self, alpha: Sequence) -> Mat:
        n = self.rank
        cols = [self.reflect(self.omega(j + 1), alpha) for j in range(n)]
        return tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))

    def dominant_rep(self, b: Sequence) -> tuple[Vec, Mat]:
        """``(b_+, w)`` with ``w(b) = b_+`` dominant and ``w`` of minimal length."""
        b = tuple(b)
        w = self.identity
        while True:
            i = next((j for j in range(self.rank) if b[j] < 0), None)
            if i is None:
                return b, w
            b = self.simple_reflect(i + 1, b)
            w = _matmul(self.simple_reflection_matrices[i], w)

    def antidominant_rep(self, b: Sequence) -> tuple[Vec, Mat]:
        b = tuple(b)
        w = self.identity
        while True:
            i = next((j for j in range(self.rank) if b[j] > 0), None)
            if i is None:
                return b, w
            b = self.simple_reflect(i + 1, b)
            w = _matmul(self.simple_reflection_matrices[i], w)

    def orbit(self, b: Sequence) -> list[Vec]:
        seen = {tuple(b)}
        frontier = [tuple(b)]
        while frontier:
            new = []
            for x in frontier:
                for i in range(self.rank):
                    y = self.simple_reflect(i + 1, x)
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return sorted(seen)

    @cached_property
    def minuscule(self) -> tuple[int, ...]:
        """Indices ``r`` (1-based) with ``pi_r`` of length zero."""
        out = []
        for r in range(1, self.rank + 1):
            pi, _ = pi_u_decompose(self, self.omega(r))
            if pi.length() == 0:
                out.append(r)
        return tuple(out)

    # -- affine data ------------------------------------------------------
    def affine_simple_root(self, i: int) -> AffineRoot:
        if i == 0:
            return (tuple(-x for x in self.theta), Fraction(1))
        return (self.simple_roots[i - 1], Fraction(0))

    def is_positive_affine(self, ar: AffineRoot) -> bool:
        alpha, z = ar
        return z > 0 or (z == 0 and self.is_positive_root(alpha))

    def affine_simple(self, i: int) -> "ExtWeylElem":
        if i == 0:
            return ExtWeylElem(self, self.theta, self.reflection_matrix(self.theta))
        return ExtWeylElem(self, self.zero(), self.simple_reflection_matrices[i - 1])

    def translation(self, b: Sequence) -> "ExtWeylElem":
        return ExtWeylElem(self, tuple(b), self.identity)

    def finite(self, w: Mat) -> "ExtWeylElem":
        return ExtWeylElem(self, self.zero(), w)

    def pi(self, r: int) -> "ExtWeylElem":
        if r == 0:
            return ExtWeylElem(self, self.zero(), self.identity)
        return pi_u_decompose(self, self.omega(r))[0]

    def to_json(self) -> dict:
        return {
            "type": self.name,
            "cartan": self.cartan,
            "gram_omega": [[str(x) for x in row] for row in self.gram],
            "positive_roots": [list(a) for a in self.positive_roots],
            "theta": list(self.theta),
            "rho": list(self.rho),
            "coxeter_number": self.coxeter_number,
            "minuscule": list(self.minuscule),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"


@lru_cache(maxsize=None)
def root_system(name: str) -> RootSystem:
    """``root_system("A2")`` and so on."""
    return RootSystem(name[0].upper(), int(name[1:]))


class ExtWeylElem:
    """Element ``c * w`` of the extended affine Weyl group."""

    __slots__ = ("R", "c", "w")

    def __init__(self, R: RootSystem, c: Sequence, w: Mat):
        self.R = R
        self.c = tuple(c)
        self.w = w

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtWeylElem) and self.c == other.c and self.w == other.w

    def __hash__(self) -> int:
        return hash((self.c, self.w))

    def __mul__(self, other: "ExtWeylElem") -> "ExtWeylElem":
        return ExtWeylElem(self.R, _add(self.c, _matvec(self.w, other.c)), _matmul(self.w, other.w))

    def inverse(self) -> "ExtWeylElem":
        winv = self.R.weyl_inverse(self.w)
        return ExtWeylElem(self.R, tuple(-x for x in _matvec(winv, self.c)), winv)

    @property
    def b(self) -> Vec:
        """Translation part ``b`` in the factorization ``w b``."""
        return _matvec(self.R.weyl_inverse(self.w), self.c)

    def act_weight(self, z: Sequence) -> Vec:
        """Affine action on points: ``z -> w(z) + c``."""
        return _norm(_add(_matvec(self.w, z), self.c))

    def act_linear(self, z: Sequence) -> Vec:
        return _norm(_matvec(self.w, z))

    def act_affine_root(self, ar: AffineRoot) -> AffineRoot:
        alpha, z = ar
        wa = _matvec(self.w, alpha)
        return (wa, Fraction(z) - self.R.pair(wa, self.c))

    def length(self) -> int:
        """Length by the closed formula in terms of ``w`` and ``b``."""
        R = self.R
        b = self.b
        total = 0
        for a in R.positive_roots:
            cp = R.copair(b, a)
            if R.is_positive_root(_matvec(self.w, a)):
                total += abs(cp)
            else:
                total += abs(cp + 1)
        return int(total)

    def lambda_set(self) -> set:
        """Positive affine roots sent to negative ones, by direct enumeration."""
        R = self.R
        out = set()
        for a in R.roots:
            nu = R.nu(a)
            wa = _matvec(self.w, a)
            shift = R.pair(wa, self.c)
            j = 0 if R.is_positive_root(a) else 1
            while nu * j <= shift:
                img_level = nu * j - shift
                if img_level < 0 or (img_level == 0 and not R.is_positive_root(wa)):
                    out.add((a, nu * j))
                j += 1
        return out

    def is_pi(self) -> bool:
        return self.length() == 0

    def descent(self, i: int) -> bool:
        """True when ``l(self * s_i) < l(self)``."""
        return not self.R.is_positive_affine(self.act_affine_root(self.R.affine_simple_root(i)))

    def left_descent(self, i: int) -> bool:
        return self.inverse().descent(i)

    def reduced_word(self) -> tuple[ExtWeylElem, tuple[int, ...]]:
        """``(pi, word)`` with ``self = pi * s_{word[0]} * ... * s_{word[-1]}``.

        ``pi`` has length zero; the word is built from the right by the
        smallest descent at each step, so it is deterministic.
        """
        R = self.R
        cur = self
        word: list[int] = []
        while True:
            i = next((j for j in range(R.rank + 1) if cur.descent(j)), None)
            if i is None:
                break
            word.append(i)
            cur = cur * R.affine_simple(i)
        return cur, tuple(reversed(word))

    def __repr__(self) -> str:
        return f"ExtWeylElem(c={self.c}, w={self.R.weyl_group.get(self.w)})"


def pi_u_decompose(R: RootSystem, b: Sequence) -> tuple[ExtWeylElem, Mat]:
    """``(pi_b, u_b)``: ``u_b`` is minimal with ``u_b(b)`` antidominant and ``pi_b = b u_b^{-1}``."""
    b = tuple(b)
    _, u = R.antidominant_rep(b)
    return ExtWeylElem(R, b, R.weyl_inverse(u)), u
