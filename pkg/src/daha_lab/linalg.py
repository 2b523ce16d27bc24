"""Dense linear algebra over an exact field given by its elements.

Matrices are lists of rows.  The helpers only use ``+ - * /`` and a truth
test, so they work for ``Fraction``, ``Cyclotomic`` and ``RatFunc`` entries.
"""

from __future__ import annotations

from typing import Sequence


def zeros(n: int, m: int, zero=0) -> list[list]:
    return [[zero] * m for _ in range(n)]


def identity(n: int, one=1, zero=0) -> list[list]:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], zero=0) -> list[list]:
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        new = [zero] * m
        for k, a in enumerate(row):
            if not a:
                continue
            brow = B[k]
            for j in range(m):
                b = brow[j]
                if b:
                    new[j] = new[j] + a * b
        out.append(new)
    return out


def matvec(A: Sequence[Sequence], v: Sequence, zero=0) -> list:
    out = []
    for row in A:
        s = zero
        for a, x in zip(row, v):
            if a and x:
                s = s + a * x
        out.append(s)
    return out


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(A, s):
    return [[a * s for a in row] for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def is_zero_matrix(A) -> bool:
    return all(not x for row in A for x in row)


def equal(A, B) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def rref(A: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in A]
    if not M:
        return M, []
    n, m = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p if x else x for x in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                rowr = M[r]
                M[i] = [x - f * y if y else x for x, y in zip(M[i], rowr)]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return M, pivots


def rank(A) -> int:
    return len(rref(A)[1])


def nullspace(A, zero=0, one=1) -> list[list]:
    """Basis of ``{x : A x = 0}``."""
    if not A:
        return []
    m = len(A[0])
    R, pivots = rref(A)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * m
        v[f] = one
        for i, pc in enumerate(pivots):
            if R[i][f]:
                v[pc] = -R[i][f]
        basis.append(v)
    return basis


def inverse(A, zero=0, one=1) -> list[list]:
    n = len(A)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def solve(A, b, zero=0, one=1) -> list:
    """One solution of ``A x = b``; raises ``ValueError`` if inconsistent."""
    m = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if m in pivots:
        raise ValueError("inconsistent system")
    x = [zero] * m
    for i, pc in enumerate(pivots):
        x[pc] = R[i][m]
    return x


def row_space_basis(vectors) -> list[list]:
    R, pivots = rref(vectors)
    return R[: len(pivots)]


class EchelonBasis:
    """Incrementally maintained basis in echelon form (rows keyed by pivot)."""

    def __init__(self):
        self.rows: dict[int, list] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> list:
        w = list(v)
        for p in sorted(self.rows):
            if w[p]:
                f = w[p]
                w = [x - f * y if y else x for x, y in zip(w, self.rows[p])]
        return w

    def add(self, v: Sequence) -> bool:
        """Insert ``v``; True if it enlarged the span."""
        w = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x), None)
        if p is None:
            return False
        c = w[p]
        w = [x / c if x else x for x in w]
        # keep earlier rows reduced at the new pivot
        for q, row in self.rows.items():
            if row[p]:
                f = row[p]
                self.rows[q] = [x - f * y if y else x for x, y in zip(row, w)]
        self.rows[p] = w
        return True

    def basis(self) -> list[list]:
        return [self.rows[p] for p in sorted(self.rows)]
