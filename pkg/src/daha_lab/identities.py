"""Closed-form sums and products checked by machine.

Series identities live in ``Z[t^(+-1/2)][[q^(1/4)]]`` (``QSeries``, with
``u = q^(1/4)`` and ``v = t^(1/2)``); root-of-unity identities are checked in
exact cyclotomic arithmetic and again in floating point.

Each check returns an :class:`IdentityCase`.
"""

from __future__ import annotations

import cmath
import hashlib
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from .scalars import Cyclotomic, QSeries, RatFunc, qpow


class WindowError(ValueError):
    """The X-window is too small for the requested truncation order."""


class PoleError(ZeroDivisionError):
    pass


# --------------------------------------------------------------------------
# Report type
# --------------------------------------------------------------------------

def _canon(x) -> str:
    if isinstance(x, QSeries):
        body = [[int(e), sorted((int(a), int(b)) for a, b in c.items())] for e, c in sorted(x.coeffs.items())]
        return json.dumps({"order": x.order, "coeffs": body})
    if isinstance(x, Cyclotomic):
        return json.dumps({"order": x.order, "coords": [str(c) for c in x.coords]})
    if isinstance(x, RatFunc):
        return json.dumps(x.to_json(), sort_keys=True)
    if isinstance(x, complex):
        return f"{x.real:.9f},{x.imag:.9f}".replace("-0.000000000", "0.000000000")
    if isinstance(x, (list, tuple)):
        return json.dumps([_canon(y) for y in x])
    return str(x)


def value_hash(x) -> str:
    return hashlib.sha256(_canon(x).encode()).hexdigest()[:16]


@dataclass
class IdentityCase:
    id: str
    params: dict
    left: object
    right: object
    verdict: str
    max_order_checked: int | None = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def lhs_hash(self) -> str:
        return value_hash(self.left)

    @property
    def rhs_hash(self) -> str:
        return value_hash(self.right)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "params": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.params.items()},
            "verdict": self.verdict,
            "lhs_hash": self.lhs_hash,
            "rhs_hash": self.rhs_hash,
            "max_order_checked": self.max_order_checked,
        }


def _exact_case(ident, params, left, right, order=None, **detail) -> IdentityCase:
    return IdentityCase(ident, params, left, right, "pass" if left == right else "fail", order, detail)


def _numeric_case(ident, params, left: complex, right: complex, tol: float, order=None) -> IdentityCase:
    err = abs(left - right) / max(1.0, abs(right))
    return IdentityCase(ident, params, left, right, "pass" if err <= tol else "fail", order, {"error": err})


# --------------------------------------------------------------------------
# Constant term of the Gaussian times the truncated theta function
# --------------------------------------------------------------------------

_ZT = flint.fmpz_mpoly_ctx.get(("Z", "t"), "lex")


def mehta_window(M: int) -> int:
    """X-window for the Gaussian expansion: ``2 ceil(sqrt M) + 4``."""
    return 2 * (math.isqrt(M - 1) + 1) + 4 if M > 0 else 4


def _delta_tail(Mq: int) -> list[list[tuple[int, int, int]]]:
    """``prod_{j>=1} (1-q^j Z)(1-q^j/Z) / ((1-q^j t Z)(1-q^j t/Z))`` mod ``q^Mq``.

    Returns, for each power ``q^e``, the terms ``(Z-exponent, t-degree, coeff)``.
    Internally the ``q^e`` coefficient is stored multiplied by ``Z^e`` so that
    only nonnegative ``Z`` powers occur.
    """
    one = _ZT.from_dict({(0, 0): 1})
    zero = _ZT.from_dict({})
    S = [one] + [zero] * (Mq - 1)

    def zt(a, b):
        return _ZT.from_dict({(a, b): 1})

    for j in range(1, Mq):
        up, down = zt(j + 1, 0), zt(j - 1, 0)
        for e in range(Mq - 1, j - 1, -1):   # times (1 - q^j Z)
            S[e] = S[e] - up * S[e - j]
        for e in range(Mq - 1, j - 1, -1):   # times (1 - q^j / Z)
            S[e] = S[e] - down * S[e - j]
        up_t, down_t = zt(j + 1, 1), zt(j - 1, 1)
        for e in range(j, Mq):               # over (1 - q^j t Z)
            S[e] = S[e] + up_t * S[e - j]
        for e in range(j, Mq):               # over (1 - q^j t / Z)
            S[e] = S[e] + down_t * S[e - j]
    out = []
    for e, p in enumerate(S):
        out.append([(z - e, d, int(c)) for (z, d), c in p.to_dict().items()])
    return out


def _lowest_factor_coeff(m: int) -> dict[int, int]:
    """``(1+t)`` times the ``Z^m`` coefficient of ``(1-Z)(1-1/Z)/((1-tZ)(1-t/Z))``."""
    if m == 0:
        return {0: 2}
    a = abs(m)
    return {a - 1: -1, a: 1}


def mehta_lhs(M: int, window: int | None = None) -> QSeries:
    """``(1+t) CT(gaussian^-1 * delta)`` truncated below ``u^M``."""
    Mq = -(-M // 4)
    window = mehta_window(M) if window is None else window
    r_max = math.isqrt(Mq - 1) if Mq > 0 else 0
    if window < 2 * r_max:
        raise WindowError(f"X-window {window} < {2 * r_max} needed for order {M}")
    tail = _delta_tail(Mq)
    acc: dict[tuple[int, int], int] = {}
    for r in range(-(window // 2), window // 2 + 1):
        base = r * r
        if base >= Mq:
            continue
        for e in range(Mq - base):
            for s, d, c in tail[e]:
                for dd, f in _lowest_factor_coeff(-r - s).items():
                    key = (base + e, d + dd)
                    acc[key] = acc.get(key, 0) + c * f
    coeffs: dict[int, dict[int, int]] = {}
    for (e, d), c in acc.items():
        if c:
            coeffs.setdefault(4 * e, {})[2 * d] = c
    return QSeries(M, coeffs)


def mehta_rhs(M: int) -> QSeries:
    """``2 prod_{j>=1} (1 - q^j t) / (1 - q^j t^2)``, i.e. ``(1+t)`` times the
    product over ``j >= 0``."""
    s = QSeries(M, {0: {0: 2}})
    j = 1
    while 4 * j < M:
        s = s.mul_binomial(4 * j, 2, -1).div_binomial(4 * j, 4, -1)
        j += 1
    return s


def mehta_const_term(M: int = 120, window: int | None = None) -> IdentityCase:
    if M > 200:
        raise ValueError("order is limited to 200")
    lhs, rhs = mehta_lhs(M, window), mehta_rhs(M)
    return _exact_case("mehta_const_term", {"order": M}, lhs, rhs, M)


# --------------------------------------------------------------------------
# Jackson-sum identity
# --------------------------------------------------------------------------

def _times_one_plus_t(s: QSeries) -> QSeries:
    out = {}
    for e, c in s.coeffs.items():
        d = dict(c)
        for k, x in c.items():
            d[k + 2] = d.get(k + 2, 0) + x
        out[e] = d
    return QSeries(s.order, out)


def jackson_lhs(M: int) -> QSeries:
    """``sum_j t^(-j/2) q^(j^2/4) (1-q^j t)/(1-t) prod_{l=1}^j (1-q^(l-1) t^2)/(1-q^l)``."""
    total = QSeries.one(M)
    j = 1
    while j * j < M:
        term = QSeries.monomial(M, j * j, -j)
        term = _times_one_plus_t(term.mul_binomial(4 * j, 2, -1))  # (1-t^2)/(1-t) = 1+t
        for l in range(2, j + 1):
            term = term.mul_binomial(4 * (l - 1), 4, -1)
        for l in range(1, j + 1):
            term = term.div_binomial(4 * l, 0, -1)
        total = total + term
        j += 1
    return total


def jackson_rhs(M: int) -> QSeries:
    s = QSeries.one(M)
    j = 1
    while 2 * j - 1 < M:
        s = s.mul_binomial(2 * j, 0, -1)
        s = s.mul_binomial(4 * j, 2, -1)
        s = s.mul_binomial(2 * j - 1, 1, 1)
        s = s.mul_binomial(2 * j - 1, -1, 1)
        s = s.div_binomial(4 * j, 0, -1)
        j += 1
    return s


def jackson_identity(M: int = 100) -> IdentityCase:
    if M > 200:
        raise ValueError("order is limited to 200")
    return _exact_case("jackson_identity", {"order": M}, jackson_lhs(M), jackson_rhs(M), M)


# --------------------------------------------------------------------------
# Root-of-unity sums
# --------------------------------------------------------------------------

class _Num:
    """Powers of ``q`` as complex numbers, ``q^(1/4)`` given."""

    def __init__(self, q4: complex):
        self.q4 = q4

    def qpow(self, e) -> complex:
        return self.q4 ** int(Fraction(e) * 4)


class _Cyc:
    """Powers of ``q`` in ``Q(zeta_order)`` with ``q^(1/4) = zeta^a``."""

    def __init__(self, order: int, a: int):
        self.order, self.a = order, a

    def qpow(self, e) -> Cyclotomic:
        x = Fraction(e) * 4 * self.a
        if x.denominator != 1:
            raise ValueError(f"q^{e} is not in the field")
        return Cyclotomic.zeta(self.order, int(x))


def _nonzero(x) -> bool:
    return abs(x) > 1e-9 if isinstance(x, complex) else bool(x)


def _gs_sides(N: int, k: int, ar):
    one = ar.qpow(0)
    lhs = one - one
    for j in range(N - 2 * k + 1):
        den = one - ar.qpow(k)
        term = ar.qpow(Fraction((k - j) ** 2, 4)) * (one - ar.qpow(j + k))
        for l in range(1, j + 1):
            d = one - ar.qpow(l)
            if not _nonzero(d):
                raise PoleError(f"1 - q^{l} vanishes")
            term = term * (one - ar.qpow(l + 2 * k - 1))
            den = den * d
        if not _nonzero(den):
            raise PoleError("vanishing denominator")
        lhs = lhs + term / den
    gsum = one - one
    for m in range(2 * N):
        gsum = gsum + ar.qpow(Fraction(m * m, 4))
    rhs = gsum
    for j in range(1, k + 1):
        rhs = rhs / (one - ar.qpow(j))
    return lhs, rhs


def gauss_selberg_root(N: int, k: int, tol: float = 1e-10) -> list[IdentityCase]:
    """Exact and numeric check at ``q = exp(2 pi i/N)``, ``t = q^k``.

    For ``k = [N/2]`` the classical value ``(1+i) sqrt N`` of
    ``sum_{m<2N} exp(pi i m^2/(2N))`` is checked as well.
    """
    if not (1 <= k and 2 * k <= N):
        raise ValueError("need 1 <= k <= N/2")
    params = {"N": N, "k": k}
    lhs, rhs = _gs_sides(N, k, _Cyc(4 * N, 1))
    out = [_exact_case("gauss_selberg_root", params, lhs, rhs)]
    nl, nr = _gs_sides(N, k, _Num(cmath.exp(2j * math.pi / (4 * N))))
    out.append(_numeric_case("gauss_selberg_root.numeric", params, nl, nr, tol))
    if k == N // 2:
        s = sum(cmath.exp(1j * math.pi * m * m / (2 * N)) for m in range(2 * N))
        out.append(_numeric_case("gauss_sum_2N", {"N": N}, s, (1 + 1j) * math.sqrt(N), tol))
    return out


# --------------------------------------------------------------------------
# Noncyclotomic Gaussian sum
# --------------------------------------------------------------------------

def _nc_sides(m: int, ar):
    kb = Fraction(-1, 2) - m
    one = ar.qpow(0)
    lhs = one - one
    d0 = one - ar.qpow(kb)
    if not _nonzero(d0):
        raise PoleError("1 - q^kbar vanishes")
    for j in range(m + 1):
        num = ar.qpow(j * j - kb * j) * (one - ar.qpow(2 * j + kb))
        den = d0
        for l in range(1, 2 * j + 1):
            d = one - ar.qpow(l)
            if not _nonzero(d):
                raise PoleError(f"1 - q^{l} vanishes")
            num = num * (one - ar.qpow(l + 2 * kb - 1))
            den = den * d
        lhs = lhs + num / den
    return lhs, _nc_product(m, ar)


def _nc_product(m: int, ar):
    kb = Fraction(-1, 2) - m
    one = ar.qpow(0)
    rhs = one
    for j in range(1, m + 1):
        d = one + ar.qpow(kb + 2 * j)
        if not _nonzero(d):
            raise PoleError("1 + q^(kbar+2j) vanishes")
        rhs = rhs * (one - ar.qpow(2 * kb + 2 * j)) / d
    return rhs


class _Formal:
    def qpow(self, e) -> RatFunc:
        return qpow(e)


def noncyclotomic_gauss(m: int, q: str | complex = "formal", tol: float = 1e-10) -> IdentityCase:
    """``kbar = -1/2 - m``; ``q`` is ``"formal"`` or a complex number (its
    square root ``q^(1/2)`` is taken as given by ``cmath.sqrt``)."""
    params = {"m": m, "q": "formal" if q == "formal" else f"{complex(q):.12g}"}
    if q == "formal":
        lhs, rhs = _nc_sides(m, _Formal())
        return _exact_case("noncyclotomic_gauss", params, lhs, rhs)
    q = complex(q)
    lhs, rhs = _nc_sides(m, _Num(cmath.sqrt(cmath.sqrt(q))))
    return _numeric_case("noncyclotomic_gauss.numeric", params, lhs, rhs, tol)


def noncyclotomic_random(m: int, samples: int = 20, seed: int = 0, tol: float = 1e-10,
                         max_tries: int = 1000) -> list[IdentityCase]:
    """The identity at ``samples`` random unimodular ``q``; a draw hitting a
    vanishing denominator is replaced by a fresh one (counted in ``retries``)."""
    rng = random.Random(seed)
    out: list[IdentityCase] = []
    retries = 0
    while len(out) < samples:
        if retries > max_tries:
            raise RuntimeError("too many singular draws")
        theta = rng.uniform(0, 2 * math.pi)
        q4 = cmath.exp(1j * theta / 2)  # q^(1/2) = exp(i theta)
        try:
            lhs, rhs = _nc_sides(m, _Num(q4))
        except PoleError:
            retries += 1
            continue
        case = _numeric_case("noncyclotomic_gauss.numeric", {"m": m, "theta": round(theta, 12)}, lhs, rhs, tol)
        case.detail["retries"] = retries
        out.append(case)
    return out


def little_reduction(N: int, k: int) -> IdentityCase:
    """At ``q^(1/2) = -exp(pi i/N)``, ``N = 2n+1``, ``m = n-k`` the product
    equals ``q^(-m(m+1)/4) prod_{j<m} (1 - q^(n-j))``."""
    if N % 2 == 0 or not 0 <= k <= (N - 1) // 2:
        raise ValueError("need odd N and 0 <= k <= (N-1)/2")
    n = (N - 1) // 2
    m = n - k
    ar = _Cyc(4 * N, N + 1)
    prod = _nc_product(m, ar)
    return _exact_case("noncyclotomic_reduction", {"N": N, "k": k, "m": m}, prod, reduced_product(N, m))


def reduced_product(N: int, m: int) -> Cyclotomic:
    n = (N - 1) // 2
    ar = _Cyc(4 * N, N + 1)
    out = ar.qpow(Fraction(-m * (m + 1), 4))
    for j in range(m):
        out = out * (ar.qpow(0) - ar.qpow(n - j))
    return out


def verlinde_crosscheck(N: int, k: int) -> IdentityCase:
    """The Gauss constant of the deformed module at the little-Verlinde root
    of unity against the reduced product."""
    from .verlinde import build_deformed, gaussian_and_sigma, little_root_field

    n = (N - 1) // 2
    m = n - k
    fld = little_root_field(N)
    const = gaussian_and_sigma(build_deformed(m, fld)).gauss_constant
    return _exact_case("verlinde_gauss_constant", {"N": N, "k": k, "m": m}, const, reduced_product(N, m))


def verlinde_crosscheck_formal(m: int) -> IdentityCase:
    """The same comparison with ``q`` formal: Gauss constant of the deformed
    module against the noncyclotomic product."""
    from .verlinde import build_deformed, gaussian_and_sigma

    const = gaussian_and_sigma(build_deformed(m)).gauss_constant
    return _exact_case("verlinde_gauss_constant.formal", {"m": m}, const, _nc_product(m, _Formal()))


# --------------------------------------------------------------------------
# Classical Gauss sum
# --------------------------------------------------------------------------

def classical_gauss(N: int, tol: float = 1e-10) -> list[IdentityCase]:
    """``sum_{j<N} q^(j^2) = q^(l^2) prod_{j=1}^n (1 - q^j)`` at ``q = exp(2 pi i/N)``,
    ``N = 2n+1``, ``l = n/2 mod N``; the value is ``sqrt N`` for even ``n`` and
    ``i sqrt N`` for odd ``n``."""
    if N % 2 == 0 or N < 3:
        raise ValueError("N must be odd and at least 3")
    n = (N - 1) // 2
    l = (n * (n + 1)) % N  # 2(n+1) = 1 mod N
    one = Cyclotomic.const(N, 1)
    lhs = Cyclotomic.const(N, 0)
    for j in range(N):
        lhs = lhs + Cyclotomic.zeta(N, j * j)
    prod = one
    for j in range(1, n + 1):
        prod = prod * (one - Cyclotomic.zeta(N, j))
    rhs = Cyclotomic.zeta(N, l * l) * prod
    params = {"N": N, "n": n, "l": l}
    out = [_exact_case("classical_gauss", params, lhs, rhs)]
    q = cmath.exp(2j * math.pi / N)
    nprod = 1
    for j in range(1, n + 1):
        nprod *= 1 - q ** j
    expect = math.sqrt(N) * (1 if n % 2 == 0 else 1j)
    out.append(_numeric_case("classical_gauss.modulus", params, complex(abs(nprod)), complex(math.sqrt(N)), tol))
    out.append(_numeric_case("classical_gauss.value", params, q ** (l * l) * nprod, expect, tol))
    return out


# --------------------------------------------------------------------------
# Suites
# --------------------------------------------------------------------------

def _gauss_tasks(Ns=None, m_exact: int = 6, m_numeric: int = 12, classical_max: int = 51) -> list[tuple]:
    tasks: list[tuple] = []
    for N in (Ns or range(2, 14)):
        for k in range(1, N // 2 + 1):
            tasks.append(("gauss_selberg_root", (N, k)))
    for m in range(m_exact + 1):
        tasks.append(("noncyclotomic_gauss", (m,)))
    for m in range(m_numeric + 1):
        tasks.append(("noncyclotomic_random", (m,)))
    for N in (Ns or range(3, 14, 2)):
        if N % 2:
            for k in range((N - 1) // 2 + 1):
                tasks.append(("little_reduction", (N, k)))
    for N, k in ((5, 1), (7, 1), (7, 2), (9, 2)):
        if not Ns or N in Ns:
            tasks.append(("verlinde_crosscheck", (N, k)))
    if not Ns:
        for m in range(4):
            tasks.append(("verlinde_crosscheck_formal", (m,)))
    for N in (Ns or range(3, classical_max + 1, 2)):
        if N % 2 and N >= 3:
            tasks.append(("classical_gauss", (N,)))
    if not Ns:
        for N in range(53, 102, 2):
            tasks.append(("classical_modulus", (N,)))
    return tasks


def _series_tasks(order: int) -> list[tuple]:
    lo = max(order - 20, 4)
    return [("mehta_const_term", (lo,)), ("mehta_const_term", (order,)),
            ("jackson_identity", (lo,)), ("jackson_identity", (order,))]


def _classical_modulus(N: int) -> list[IdentityCase]:
    return [c for c in classical_gauss(N) if c.id != "classical_gauss"]


_RUNNERS = {
    "gauss_selberg_root": gauss_selberg_root,
    "noncyclotomic_gauss": noncyclotomic_gauss,
    "noncyclotomic_random": noncyclotomic_random,
    "little_reduction": little_reduction,
    "verlinde_crosscheck": verlinde_crosscheck,
    "verlinde_crosscheck_formal": verlinde_crosscheck_formal,
    "classical_gauss": classical_gauss,
    "classical_modulus": _classical_modulus,
    "mehta_const_term": mehta_const_term,
    "jackson_identity": jackson_identity,
}


def _run_task(task: tuple) -> list[dict]:
    name, args = task
    res = _RUNNERS[name](*args)
    cases = res if isinstance(res, list) else [res]
    return [c.to_json() for c in cases]


def suite_tasks(suite: str = "all", order: int = 120, N: int | None = None) -> list[tuple]:
    if suite not in ("all", "gauss", "series"):
        raise ValueError(f"unknown suite {suite!r}")
    tasks: list[tuple] = []
    if suite in ("all", "gauss"):
        tasks += _gauss_tasks([N] if N else None)
    if suite in ("all", "series"):
        tasks += _series_tasks(order)
    return tasks


def run_suite(suite: str = "all", order: int = 120, N: int | None = None, jobs: int = 1) -> list[dict]:
    """Run a suite; returns the JSON records in task order (independent of ``jobs``)."""
    tasks = suite_tasks(suite, order, N)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    return [rec for chunk in chunks for rec in chunk]
