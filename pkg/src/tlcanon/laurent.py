"""
Exact Laurent polynomials in one variable ``v`` with integer coefficients.

A polynomial is stored sparsely as ``{exponent: coefficient}`` with no zero
coefficients, so equality is a plain comparison of the term maps.

>>> qc = V + V.inv_unit()
>>> qc * qc
v^-2 + 2 + v^2
>>> (3 * V**2 - V**-1).bar()
3v^-2 - v
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly", "ZERO", "ONE", "V", "VINV", "Q", "QINV", "QC",
    "RINGS", "subring_membership", "mono",
]

Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    """An immutable element of Z[v, v^-1]."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        t: dict[int, int] = {}
        for e, c in items:
            e, c = int(e), int(c)
            c += t.get(e, 0)
            if c:
                t[e] = c
            else:
                t.pop(e, None)
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict[int, int]) -> LaurentPoly:
        # caller guarantees t has no zero values and is not shared
        p = object.__new__(cls)
        p._t = t
        p._hash = None
        return p

    # -- accessors ---------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def coeff(self, e: int) -> int:
        return self._t.get(e, 0)

    def is_zero(self) -> bool:
        return not self._t

    def degree(self) -> int | None:
        return max(self._t) if self._t else None

    def valuation(self) -> int | None:
        return min(self._t) if self._t else None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: Scalar) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly._raw({0: other}) if other else ZERO
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            c += t.get(e, 0)
            if c:
                t[e] = c
            else:
                del t[e]
        return LaurentPoly._raw(t)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other: Scalar) -> LaurentPoly:
        if isinstance(other, int):
            return self + (-other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other: Scalar) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({e: c * other for e, c in self._t.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((f, d),) = b.items()
            return LaurentPoly._raw({e + f: c * d for e, c in a.items()})
        t: dict[int, int] = {}
        get = t.get
        for f, d in b.items():
            for e, c in a.items():
                k = e + f
                t[k] = get(k, 0) + c * d
        return LaurentPoly._raw({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self._t) != 1:
                raise ValueError("only monomials are invertible")
            ((e, c),) = self._t.items()
            if c not in (1, -1):
                raise ValueError("only monomials with unit coefficient are invertible")
            return LaurentPoly._raw({e * n: c ** (-n)})
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``v**k``."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._t.items()})

    def inv_unit(self) -> LaurentPoly:
        return self ** -1

    def bar(self) -> LaurentPoly:
        """The ring involution v -> v^-1."""
        return LaurentPoly._raw({-e: c for e, c in self._t.items()})

    def negative_part(self) -> LaurentPoly:
        """Terms with strictly negative exponent."""
        return LaurentPoly._raw({e: c for e, c in self._t.items() if e < 0})

    def evaluate(self, x):
        return sum(c * x**e for e, c in self._t.items())

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._t == other._t
        if isinstance(other, int):
            return self._t == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._t)

    # -- formatting --------------------------------------------------------

    def __repr__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for e in sorted(self._t):
            c = self._t[e]
            if e == 0:
                body = str(abs(c))
            else:
                mon = "v" if e == 1 else f"v^{e}"
                body = mon if abs(c) == 1 else f"{abs(c)}{mon}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_latex(self) -> str:
        if not self._t:
            return "0"
        out = ""
        for i, e in enumerate(sorted(self._t)):
            c = self._t[e]
            mon = "" if e == 0 else ("v" if e == 1 else f"v^{{{e}}}")
            mag = str(abs(c)) if (abs(c) != 1 or not mon) else ""
            sign = "-" if c < 0 else ("+" if i else "")
            out += (f" {sign} " if i else sign) + mag + mon
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict[str, int]:
        """Exponent strings mapped to coefficients, exponents ascending."""
        return {str(e): self._t[e] for e in sorted(self._t)}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> LaurentPoly:
        return cls((int(k), int(c)) for k, c in data.items())

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> LaurentPoly:
        return cls.from_json(json.loads(text))


def mono(e: int, c: int = 1) -> LaurentPoly:
    """The monomial ``c * v**e``."""
    return LaurentPoly._raw({e: c} if c else {})


ZERO = LaurentPoly._raw({})
ONE = mono(0)
V = mono(1)
VINV = mono(-1)
Q = mono(2)
QINV = mono(-2)
QC = LaurentPoly._raw({1: 1, -1: 1})  # v + v^-1


def _in_a_minus(p):
    return all(e <= 0 for e in p._t)


def _in_a_plus(p):
    return all(e >= 0 for e in p._t)


def _in_z_of_q(p):
    return all(e >= 0 and e % 2 == 0 for e in p._t)


def _in_n_laurent(p):
    return all(c >= 0 for c in p._t.values())


def _in_vinv_a_minus(p):
    return all(e <= -1 for e in p._t)


RINGS = {
    "A_minus": _in_a_minus,
    "A_plus": _in_a_plus,
    "Z_of_q": _in_z_of_q,
    "N_of_v_vinv": _in_n_laurent,
    "v_inv_A_minus": _in_vinv_a_minus,
}


def subring_membership(p: LaurentPoly, ring: str) -> bool:
    """Whether ``p`` lies in the named subring (or submodule) of Z[v, v^-1].

    ``ring`` is one of ``A_minus`` (Z[v^-1]), ``A_plus`` (Z[v]), ``Z_of_q``
    (Z[v^2]), ``N_of_v_vinv`` (nonnegative coefficients) and
    ``v_inv_A_minus`` (v^-1 Z[v^-1]).
    """
    try:
        test = RINGS[ring]
    except KeyError:
        raise ValueError(f"unknown ring {ring!r}") from None
    return test(p)
