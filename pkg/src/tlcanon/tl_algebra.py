"""
The generalized Temperley-Lieb algebra TL(X) in its t-basis.

Vectors are plain dicts ``{word: LaurentPoly}`` keyed by canonical words of
non-complex elements. Products whose index is complex are rewritten at once
through :meth:`TLAlgebra.d_expand`, using ``t_{w_ij} = -sum_{y < w_ij} t_y``, so
no vector ever leaves the span of ``{t_w : w in W_c}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .coxeter import CoxeterGroup, Word, shortlex_key
from .laurent import ONE, Q, QC, QINV, VINV, ZERO, LaurentPoly, mono, subring_membership

__all__ = [
    "TLVec", "TLAlgebra", "TransitionTables",
    "add_into", "scale", "vec_equal", "vec_to_json", "vec_from_json",
    "to_mprime", "from_mprime", "tl_vec_dumps",
]

TLVec = dict[Word, LaurentPoly]

Q_MINUS_1 = Q - 1
QINV_MINUS_1 = QINV - 1


def add_into(acc: dict, vec: dict, c: LaurentPoly = ONE) -> dict:
    """``acc += c * vec`` in place, dropping zeros."""
    if not c:
        return acc
    unit = c == ONE
    for w, a in vec.items():
        b = a if unit else a * c
        old = acc.get(w)
        if old is None:
            acc[w] = b
        else:
            b = old + b
            if b:
                acc[w] = b
            else:
                del acc[w]
    return acc


def scale(vec: dict, c: LaurentPoly) -> dict:
    if not c:
        return {}
    return {w: a * c for w, a in vec.items()}


def vec_equal(a: dict, b: dict) -> bool:
    return {w: p for w, p in a.items() if p} == {w: p for w, p in b.items() if p}


def to_mprime(vec: dict) -> dict:
    """t-coordinates to coordinates over ``m'_x = v^-l(x) t_x``."""
    return {x: c.shift(len(x)) for x, c in vec.items()}


def from_mprime(vec: dict) -> dict:
    return {x: c.shift(-len(x)) for x, c in vec.items()}


def vec_to_json(vec: dict) -> dict:
    return {
        "coeffs": [
            {"word": list(w), "poly": vec[w].to_json()}
            for w in sorted(vec, key=shortlex_key) if vec[w]
        ]
    }


def vec_from_json(data: dict) -> dict:
    out = {}
    for item in data["coeffs"]:
        p = LaurentPoly.from_json(item["poly"])
        if p:
            out[tuple(item["word"])] = p
    return out


@dataclass
class TransitionTables:
    """Transition data between ``m'`` and the monomial basis.

    ``qtilde[(x, w)]`` is defined by
    ``v^-l(w) t_w = eps_w * sum_x eps_x * qtilde[x, w] * b_x``, and
    ``ptilde[(x, w)]`` by ``b_w = sum_x ptilde[x, w] * m'_x``.
    """
    elements: list[Word]
    qtilde: dict[tuple[Word, Word], LaurentPoly] = field(default_factory=dict)
    ptilde: dict[tuple[Word, Word], LaurentPoly] = field(default_factory=dict)

    def signed_q(self, x: Word, w: Word) -> LaurentPoly:
        c = self.qtilde.get((x, w), ZERO)
        return c if (len(x) + len(w)) % 2 == 0 else -c

    def triangularity_violations(self) -> list[tuple[Word, Word, LaurentPoly]]:
        """Entries off the diagonal not in v^-1 Z[v^-1], or a diagonal != 1."""
        bad = []
        for (x, w), c in sorted(self.qtilde.items(), key=lambda kv: (shortlex_key(kv[0][1]), shortlex_key(kv[0][0]))):
            if x == w:
                if c != ONE:
                    bad.append((x, w, c))
            elif not subring_membership(c, "v_inv_A_minus"):
                bad.append((x, w, c))
        return bad


class TLAlgebra:
    """TL(X) for one Coxeter group, with every expensive product memoized."""

    def __init__(self, group: CoxeterGroup):
        self.group = group
        self._dexp: dict[Word, TLVec] = {}
        self._lgen: dict[tuple[int, Word], TLVec] = {}
        self._rgen: dict[tuple[Word, int], TLVec] = {}
        self._bar_t: dict[Word, TLVec] = {(): {(): ONE}}
        self._mono: dict[Word, TLVec] = {(): {(): ONE}}

    # -- basis products ------------------------------------------------------

    def _gen_product(self, s: int, x: Word, side: str) -> TLVec:
        G = self.group
        if side == "left":
            key = (s, x)
            r = self._lgen.get(key)
            if r is not None:
                return r
            descent = s in G.left_descents(x)
            sx = G.left_mul(s, x)
        else:
            key = (x, s)
            r = self._rgen.get(key)
            if r is not None:
                return r
            descent = s in G.right_descents(x)
            sx = G.right_mul(x, s)
        if descent:
            # quadratic relation; sx is a factor of x so it is non-complex
            r = {sx: Q, x: Q_MINUS_1}
        else:
            r = self.d_expand(sx)
        (self._lgen if side == "left" else self._rgen)[key] = r
        return r

    def t_mul_gen(self, s: int, vec: TLVec, side: str = "left") -> TLVec:
        """``t_s * vec`` (``side="left"``) or ``vec * t_s``."""
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
        acc: TLVec = {}
        for x, c in vec.items():
            add_into(acc, self._gen_product(s, x, side), c)
        return acc

    def d_expand(self, w: Word) -> TLVec:
        """Coefficients ``D_{x,w}`` of ``t_w`` over ``{t_x : x in W_c}``."""
        r = self._dexp.get(w)
        if r is not None:
            return r
        G = self.group
        if G.in_wc(w):
            r = {w: ONE}
        else:
            x1, (i, j), x2 = G.complex_factorization(w)
            r = {y: -ONE for y in G.rank_two_proper(i, j)}
            for s in reversed(x1):
                r = self.t_mul_gen(s, r, "left")
            for s in x2:
                r = self.t_mul_gen(s, r, "right")
        self._dexp[w] = r
        return r

    def t(self, w: Word) -> TLVec:
        """The image of ``T_w``; equals ``{w: 1}`` when ``w`` is non-complex."""
        return dict(self.d_expand(w))

    def t_mul(self, a: TLVec, b: TLVec) -> TLVec:
        acc: TLVec = {}
        for y, c in b.items():
            part = a
            for s in y:
                part = self.t_mul_gen(s, part, "right")
            add_into(acc, part, c)
        return acc

    def projects_into_lattice(self, w: Word) -> bool:
        """Whether ``v^-l(w) t_w`` lies in the Z[v^-1]-span of the ``m'`` basis."""
        return all(c.shift(len(x) - len(w)).degree() <= 0 for x, c in self.d_expand(w).items())

    # -- bar involution ------------------------------------------------------

    def bar_t(self, w: Word) -> TLVec:
        """``bar(t_w) = t_{w^-1}^{-1}`` for ``w`` in W_c."""
        r = self._bar_t.get(w)
        if r is None:
            s, u = w[0], w[1:]
            bu = self.bar_t(u)
            # bar(t_s) = q^-1 t_s + (q^-1 - 1)
            r = scale(self.t_mul_gen(s, bu, "left"), QINV)
            add_into(r, bu, QINV_MINUS_1)
            self._bar_t[w] = r
        return r

    def tl_bar(self, vec: TLVec) -> TLVec:
        acc: TLVec = {}
        for x, c in vec.items():
            add_into(acc, self.bar_t(x), c.bar())
        return acc

    def bar_row(self, w: Word) -> dict[Word, LaurentPoly]:
        """Coordinates of ``bar(m'_w)`` over the ``m'`` basis."""
        return to_mprime(scale(self.bar_t(w), mono(len(w))))

    # -- monomial basis ------------------------------------------------------

    def b_gen_mul(self, s: int, vec: TLVec) -> TLVec:
        """``b_s * vec`` with ``b_s = v^-1 (t_s + t_e)``."""
        r = self.t_mul_gen(s, vec, "left")
        add_into(r, vec)
        return scale(r, VINV)

    def monomial(self, w: Word) -> TLVec:
        """``b_w`` over the canonical reduced word of ``w``."""
        r = self._mono.get(w)
        if r is None:
            if not self.group.in_wc(w):
                raise ValueError(f"{w} is complex; monomials are indexed by W_c")
            r = self.b_gen_mul(w[0], self.monomial(w[1:]))
            self._mono[w] = r
        return r

    def monomial_word(self, word) -> TLVec:
        """Product ``b_{s1} ... b_{sk}`` for an arbitrary sequence of generators."""
        r: TLVec = {(): ONE}
        for s in reversed(tuple(word)):
            r = self.b_gen_mul(s, r)
        return r

    def expand_in_monomials(self, vec: TLVec) -> TLVec:
        """Coordinates of ``vec`` over ``{b_x}`` by peeling the top term."""
        rest = dict(vec)
        out: TLVec = {}
        while rest:
            top = max(rest, key=shortlex_key)
            # b_top has leading term v^-l(top) t_top
            c = rest[top].shift(len(top))
            out[top] = c
            add_into(rest, self.monomial(top), -c)
        return out

    def monomial_structure_constants(self, x: Word, y: Word) -> TLVec:
        return self.expand_in_monomials(self.t_mul(self.monomial(x), self.monomial(y)))

    # -- transitions -----------------------------------------------------------

    def transition_tables(self, elements: list[Word]) -> TransitionTables:
        elems = sorted(elements, key=shortlex_key)
        present = set(elems)
        G = self.group
        for w in elems:
            for x in G.bruhat_ideal(w):
                if x not in present:
                    raise ValueError(f"element list is not closed under Bruhat ideals ({x} <= {w})")
        tables = TransitionTables(elems)
        for w in elems:
            mprime_w = {w: mono(-len(w))}
            for x, c in self.expand_in_monomials(mprime_w).items():
                tables.qtilde[(x, w)] = c if (len(x) + len(w)) % 2 == 0 else -c
            for x, c in to_mprime(self.monomial(w)).items():
                tables.ptilde[(x, w)] = c
        return tables


def tl_vec_dumps(vec: TLVec) -> str:
    return json.dumps(vec_to_json(vec), separators=(",", ":"))

