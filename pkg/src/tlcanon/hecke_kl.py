"""
The Hecke algebra in the T-basis, its Kazhdan-Lusztig basis and the
projection onto TL(X).

The KL basis is obtained from the same IC solver used for TL(X), with index
set W, ``m_w = T_w`` and ``r_w = -l(w)``; so ``C'_w`` comes out in
coordinates over ``v^-l(x) T_x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import CoxeterGroup, Word, shortlex_key, word_to_str
from .ic_solver import ICContext, ICTable, solve_ic
from .laurent import ONE, Q, QINV, LaurentPoly, mono
from .tl_algebra import TLAlgebra, add_into, from_mprime, scale, to_mprime, vec_equal

__all__ = ["HeckeVec", "HeckeAlgebra", "KernelReport", "kernel_analysis", "DEFAULT_BUDGET"]

HeckeVec = dict[Word, LaurentPoly]

DEFAULT_BUDGET = 10_000

Q_MINUS_1 = Q - 1
QINV_MINUS_1 = QINV - 1


class HeckeAlgebra:
    """H(X) with ``T_s T_w = T_sw`` or ``q T_sw + (q-1) T_w``."""

    def __init__(self, group: CoxeterGroup, tl: TLAlgebra | None = None):
        self.group = group
        self.tl = tl or TLAlgebra(group)
        self._lgen: dict[tuple[int, Word], HeckeVec] = {}
        self._rgen: dict[tuple[Word, int], HeckeVec] = {}
        self._bar_T: dict[Word, HeckeVec] = {(): {(): ONE}}
        self._kl: ICTable = ICTable()
        self._ctx = ICContext(key=shortlex_key, bar_row=self.bar_row)

    def _gen_product(self, s: int, x: Word, side: str) -> HeckeVec:
        G = self.group
        cache = self._lgen if side == "left" else self._rgen
        key = (s, x) if side == "left" else (x, s)
        r = cache.get(key)
        if r is None:
            if side == "left":
                descent, sx = s in G.left_descents(x), G.left_mul(s, x)
            else:
                descent, sx = s in G.right_descents(x), G.right_mul(x, s)
            r = {sx: Q, x: Q_MINUS_1} if descent else {sx: ONE}
            cache[key] = r
        return r

    def mul_gen(self, s: int, a: HeckeVec, side: str = "left") -> HeckeVec:
        acc: HeckeVec = {}
        for x, c in a.items():
            add_into(acc, self._gen_product(s, x, side), c)
        return acc

    def h_mul(self, a: HeckeVec, b: HeckeVec) -> HeckeVec:
        acc: HeckeVec = {}
        for y, c in b.items():
            part = a
            for s in y:
                part = self.mul_gen(s, part, "right")
            add_into(acc, part, c)
        return acc

    def bar_T(self, w: Word) -> HeckeVec:
        """``T_{w^-1}^{-1}`` as a product of the inverses ``T_s^-1``."""
        r = self._bar_T.get(w)
        if r is None:
            bu = self.bar_T(w[1:])
            r = scale(self.mul_gen(w[0], bu, "left"), QINV)
            add_into(r, bu, QINV_MINUS_1)
            self._bar_T[w] = r
        return r

    def h_bar(self, a: HeckeVec) -> HeckeVec:
        acc: HeckeVec = {}
        for x, c in a.items():
            add_into(acc, self.bar_T(x), c.bar())
        return acc

    def bar_row(self, w: Word) -> dict:
        return to_mprime(scale(self.bar_T(w), mono(len(w))))

    @property
    def context(self) -> ICContext:
        return self._ctx

    def kl_coords(self, w: Word) -> dict:
        """``C'_w`` over ``{v^-l(x) T_x}``."""
        if w not in self._kl:
            self._kl.coeffs[w] = solve_ic(self._ctx, [w])[w]
        return self._kl[w]

    def kl_basis(self, w: Word) -> HeckeVec:
        """``C'_w`` in the T-basis."""
        return from_mprime(self.kl_coords(w))

    def kl_polynomial(self, x: Word, w: Word) -> LaurentPoly:
        """``P_{x,w}`` in ``q = v^2``, read off ``C'_w = v^-l(w) sum P_{x,w} T_x``."""
        return self.kl_basis(w).get(x, LaurentPoly()).shift(len(w))

    def project(self, a: HeckeVec) -> dict:
        """The image of ``a`` in TL(X), over the t-basis."""
        acc: dict = {}
        for w, c in a.items():
            add_into(acc, self.tl.d_expand(w), c)
        return acc

    def rank_two_sum(self, i: int, j: int) -> HeckeVec:
        """The generator ``sum_{w in <s_i, s_j>} T_w`` of J(X)."""
        elems = self.group.rank_two_proper(i, j) + [self.group.rank_two_longest(i, j)]
        return {w: ONE for w in elems}


@dataclass
class KernelReport:
    graph: str
    order: int
    wc_count: int
    dim_J: int
    kl_in_kernel: int
    spanned: bool
    projected_equals_ic: bool
    witnesses: list[Word] = field(default_factory=list)
    # complex w with v^-l(w) t_w outside the lattice spanned by m'
    outside_lattice: list[Word] = field(default_factory=list)
    kernel_elements: list[Word] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "graph": self.graph,
            "dim_J": self.dim_J,
            "kl_in_kernel": self.kl_in_kernel,
            "spanned": self.spanned,
            "projected_equals_ic": self.projected_equals_ic,
            "witnesses": [list(w) for w in self.witnesses],
            "outside_lattice": [list(w) for w in self.outside_lattice],
        }


def kernel_analysis(hecke: HeckeAlgebra, ic_table: ICTable, budget: int = DEFAULT_BUDGET) -> KernelReport:
    """Compare J(X) with the KL basis elements it contains.

    KL elements are linearly independent, so J(X) is spanned by those it
    contains exactly when their number equals ``|W| - |W_c|``.
    """
    G = hecke.group
    if not G.graph.is_finite:
        raise ValueError("kernel analysis needs a finite Coxeter group")
    elements = [w for w, _ in G.enumerate()]
    if len(elements) > budget:
        raise ValueError(f"|W| = {len(elements)} exceeds the budget of {budget}")
    wc = [w for w in elements if G.in_wc(w)]
    in_kernel = []
    witnesses = []
    for w in elements:
        image = hecke.project(hecke.kl_basis(w))
        if not image:
            in_kernel.append(w)
        if G.in_wc(w) and not vec_equal(image, from_mprime(ic_table[w])):
            witnesses.append(w)
    dim_J = len(elements) - len(wc)
    return KernelReport(
        graph=str(G.graph),
        order=len(elements),
        wc_count=len(wc),
        dim_J=dim_J,
        kl_in_kernel=len(in_kernel),
        spanned=len(in_kernel) == dim_J,
        projected_equals_ic=not witnesses,
        witnesses=witnesses,
        outside_lattice=[w for w in elements
                         if not G.in_wc(w) and not hecke.tl.projects_into_lattice(w)],
        kernel_elements=in_kernel,
    )
