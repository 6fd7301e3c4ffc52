"""
Exact arithmetic in Z[2cos(pi/M)] and exact sign tests.

Elements are integer coefficient tuples over the power basis
``1, y, ..., y^(d-1)`` where ``y = 2cos(pi/M)`` and ``d`` is the degree of its
minimal polynomial. Every ``2cos(pi/m)`` with ``m | M`` is an integer polynomial
in ``y`` (Vieta-Lucas recurrence), so one ring serves a whole Coxeter graph.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath

__all__ = ["RealCyclotomic", "cyclotomic_poly", "two_cos_minpoly"]


def _polymul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    # den monic, coefficients low -> high
    num = list(num)
    dq = len(num) - len(den)
    quot = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        c = num[k + len(den) - 1]
        quot[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _vieta_lucas(k: int) -> list[int]:
    # V_k(y) with V_k(x + 1/x) = x^k + x^-k
    a, b = [2], [0, 1]
    if k == 0:
        return a
    for _ in range(k - 1):
        nxt = [0] + b
        for i, c in enumerate(a):
            nxt[i] -= c
        a, b = b, nxt
    return b


@lru_cache(maxsize=None)
def two_cos_minpoly(M: int) -> tuple[int, ...]:
    """Monic minimal polynomial (low to high) of ``2cos(pi/M)``."""
    if M == 1:
        return (2, 1)  # 2cos(pi) = -2
    phi = cyclotomic_poly(2 * M)
    d = (len(phi) - 1) // 2
    # phi(x) / x^d = c_d + sum_k c_{d+k} (x^k + x^-k), palindromic
    g = [0] * (d + 1)
    g[0] += phi[d]
    for k in range(1, d + 1):
        for i, c in enumerate(_vieta_lucas(k)):
            g[i] += phi[d + k] * c
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    return tuple(g)


class RealCyclotomic:
    """The ring Z[2cos(pi/M)] with elements as coefficient tuples."""

    def __init__(self, M: int):
        self.M = M
        self.minpoly = two_cos_minpoly(M)
        self.degree = len(self.minpoly) - 1
        self._y = 2 * math.cos(math.pi / M)
        self._powers = [self._y**i for i in range(self.degree)]
        self._prec_cache: dict[int, list] = {}

    def reduce(self, coeffs: list[int]) -> tuple[int, ...]:
        c = list(coeffs)
        d, mp = self.degree, self.minpoly
        for k in range(len(c) - 1, d - 1, -1):
            lead = c[k]
            if lead:
                for j in range(d + 1):
                    c[k - d + j] -= lead * mp[j]
        c = c[:d] + [0] * (d - len(c))
        return tuple(c)

    def from_int(self, n: int) -> tuple[int, ...]:
        return (n,) + (0,) * (self.degree - 1)

    def two_cos(self, m: int) -> tuple[int, ...]:
        """``2cos(pi/m)`` for ``m`` dividing ``M``."""
        if self.M % m:
            raise ValueError(f"{m} does not divide {self.M}")
        return self.reduce(_vieta_lucas(self.M // m))

    def mul(self, a, b) -> tuple[int, ...]:
        return self.reduce(_polymul(list(a), list(b)))

    def mul_matrix(self, a) -> tuple[tuple[int, ...], ...]:
        """Columns of multiplication by ``a`` in the power basis."""
        cols = []
        for i in range(self.degree):
            e = [0] * self.degree
            e[i] = 1
            cols.append(self.mul(a, e))
        return tuple(cols)

    def to_float(self, a) -> float:
        return sum(c * p for c, p in zip(a, self._powers))

    def sign(self, a) -> int:
        """Exact sign of the real number represented by ``a``."""
        if not any(a):
            return 0
        val = 0.0
        mag = 0.0
        for c, p in zip(a, self._powers):
            val += c * p
            mag += abs(c * p)
        if abs(val) > mag * 1e-12 + 1e-300:
            return 1 if val > 0 else -1
        # nonzero by irreducibility of the minimal polynomial; refine with intervals
        prec = 120
        while True:
            with mpmath.iv.workprec(prec):
                y = 2 * mpmath.iv.cos(mpmath.iv.pi / self.M)
                acc = mpmath.iv.mpf(0)
                pw = mpmath.iv.mpf(1)
                for c in a:
                    acc += c * pw
                    pw *= y
                if acc.a > 0:
                    return 1
                if acc.b < 0:
                    return -1
            prec *= 2
