"""
IC (canonical) bases of a based module with a bar involution.

The module is described by an index set, a total order refining the partial
order, and the bar matrix: for each index ``w`` the coordinates of
``bar(m'_w)`` over ``{m'_x}``. Given a unitriangular bar matrix, the unique
``c_w = m'_w + sum_{x<w} h_{x,w} m'_x`` with ``h_{x,w}`` in ``v^-1 Z[v^-1]`` and
``bar(c_w) = c_w`` is found top-down: for each lower ``x`` the equation
``h - bar(h) = d`` has the single solution ``h = (negative part of d)``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable

from .coxeter import Word, shortlex_key
from .laurent import ONE, LaurentPoly, subring_membership
from .tl_algebra import TLAlgebra, add_into, from_mprime, to_mprime

__all__ = [
    "ICContext", "ICTable", "DefectError", "ICReport",
    "solve_ic", "verify_ic", "is_ic_element", "apply_bar", "tl_context",
    "expand_in_ic", "ic_to_t", "structure_constants",
    "all_ic_structure_constants",
]


class DefectError(ArithmeticError):
    """The defect equation had no solution; the bar matrix is inconsistent."""


@dataclass
class ICContext:
    """A based module: index order and bar matrix rows over ``m'``."""
    # total order refining the partial order; smaller key = lower
    key: Callable[[Hashable], object]
    # w -> {x: a_{x,w}} with bar(m'_w) = sum_x a_{x,w} m'_x
    bar_row: Callable[[Hashable], dict]
    # optional predicate restricting the index set (e.g. W_c)
    contains: Callable[[Hashable], bool] = lambda w: True
    _rows: dict = field(default_factory=dict, repr=False)

    def row(self, w) -> dict:
        r = self._rows.get(w)
        if r is None:
            r = self.bar_row(w)
            self._rows[w] = r
        return r

    def with_key(self, key) -> ICContext:
        """Same module under another total refinement (rows are shared)."""
        return ICContext(key, self.bar_row, self.contains, self._rows)


@dataclass
class ICTable:
    """``coeffs[w] = {x: h_{x,w}}`` with ``c_w = sum_x h_{x,w} m'_x``."""
    coeffs: dict = field(default_factory=dict)

    def __getitem__(self, w) -> dict:
        return self.coeffs[w]

    def __contains__(self, w) -> bool:
        return w in self.coeffs

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_json(self) -> list[dict]:
        return [
            {
                "w": list(w),
                "coeffs": [
                    {"x": list(x), "h": h[x].to_json()}
                    for x in sorted(h, key=shortlex_key)
                ],
            }
            for w, h in sorted(self.coeffs.items(), key=lambda kv: shortlex_key(kv[0]))
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> ICTable:
        table = cls()
        for entry in data:
            table.coeffs[tuple(entry["w"])] = {
                tuple(c["x"]): LaurentPoly.from_json(c["h"]) for c in entry["coeffs"]
            }
        return table

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def apply_bar(ctx: ICContext, coords: dict) -> dict:
    """Bar of a module element given over ``m'``."""
    acc: dict = {}
    for y, c in coords.items():
        add_into(acc, ctx.row(y), c.bar())
    return acc


def _solve_one(ctx: ICContext, w) -> dict:
    key = ctx.key
    row = ctx.row(w)
    if row.get(w) != ONE:
        raise DefectError(f"bar matrix diagonal at {w} is {row.get(w)}, not 1")
    h = {w: ONE}
    defect: dict = {}
    heap: list = []
    for x, a in row.items():
        if x != w:
            defect[x] = a
            heapq.heappush(heap, (_neg(key(x)), x))
    # pop from the top of the total order downwards
    while heap:
        _, x = heapq.heappop(heap)
        d = defect.pop(x, None)
        if d is None:
            continue
        # need h_x - bar(h_x) = d
        if d.coeff(0) or d.bar() != -d:
            raise DefectError(f"defect at ({x}, {w}) is not skew: {d}")
        hx = d.negative_part()
        if not hx:
            continue
        h[x] = hx
        hbar = hx.bar()
        for z, a in ctx.row(x).items():
            if z == x:
                continue
            old = defect.get(z)
            if old is None:
                heapq.heappush(heap, (_neg(key(z)), z))
                defect[z] = a * hbar
            else:
                defect[z] = old + a * hbar
    return h


class _neg:
    # reverses an arbitrary orderable key for heapq
    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return other.k < self.k

    def __eq__(self, other):
        return self.k == other.k


def solve_ic(ctx: ICContext, targets: Iterable) -> ICTable:
    """IC basis elements ``c_w`` for every ``w`` in ``targets``."""
    table = ICTable()
    for w in sorted(targets, key=ctx.key):
        table.coeffs[w] = _solve_one(ctx, w)
    return table


@dataclass
class ICReport:
    checked: int = 0
    violations: list[tuple[str, object, object, object]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_ic(ctx: ICContext, table: ICTable, *, bar: Callable[[dict], dict] | None = None,
              alt_key=None) -> ICReport:
    """Re-check every entry of ``table``.

    Checks the normalization, the lattice condition on lower coefficients and
    bar invariance (through ``bar`` if given, else through the bar matrix).
    With ``alt_key`` the table is also re-solved under that total order and
    compared entry by entry.
    """
    report = ICReport()
    bar = bar or (lambda coords: apply_bar(ctx, coords))
    for w, h in table.coeffs.items():
        report.checked += 1
        if h.get(w) != ONE:
            report.violations.append(("projection", w, w, h.get(w)))
        for x, c in h.items():
            if x != w and not subring_membership(c, "v_inv_A_minus"):
                kind = "projection" if c.coeff(0) and subring_membership(c, "A_minus") else "lattice"
                report.violations.append((kind, w, x, c))
            if not ctx.contains(x):
                report.violations.append(("index", w, x, c))
        barred = {x: c for x, c in bar(h).items() if c}
        if barred != {x: c for x, c in h.items() if c}:
            report.violations.append(("bar", w, None, None))
    if alt_key is not None:
        alt = solve_ic(ctx.with_key(alt_key), table.coeffs)
        for w in table.coeffs:
            if alt[w] != table[w]:
                report.violations.append(("uniqueness", w, None, None))
    return report


def is_ic_element(ctx: ICContext, coords: dict, w) -> bool:
    """Whether ``coords`` (over ``m'``) is the IC basis element indexed by ``w``."""
    coords = {x: c for x, c in coords.items() if c}
    if coords.get(w) != ONE:
        return False
    if any(x != w and not subring_membership(c, "v_inv_A_minus") for x, c in coords.items()):
        return False
    if any(ctx.key(x) > ctx.key(w) for x in coords):
        return False
    return {x: c for x, c in apply_bar(ctx, coords).items() if c} == coords


def expand_in_ic(ctx: ICContext, table: ICTable, coords: dict) -> dict:
    """Coordinates of an element (given over ``m'``) in the IC basis."""
    rest = {x: c for x, c in coords.items() if c}
    out = {}
    while rest:
        top = max(rest, key=ctx.key)
        if top not in table:
            raise KeyError(f"IC table does not cover {top}")
        c = rest[top]
        out[top] = c
        add_into(rest, table[top], -c)
    return out


def tl_context(tl: TLAlgebra, key=shortlex_key) -> ICContext:
    """TL(X) with ``m_w = t_w`` and ``r_w = -l(w)`` over W_c."""
    return ICContext(key=key, bar_row=tl.bar_row, contains=tl.group.in_wc)


def ic_to_t(table: ICTable, w: Word) -> dict:
    """``c_w`` in t-coordinates."""
    return from_mprime(table[w])



def _right_products(tl: TLAlgebra, a: dict, elements: Iterable[Word]) -> dict:
    """``a * t_z`` for every ``z``, reusing the product for the word prefix."""
    out = {(): a}
    for z in sorted(elements, key=shortlex_key):
        if z not in out:
            prefix = z[:-1]
            if prefix not in out:
                out[prefix] = tl.t_mul(a, {prefix: ONE})
            out[z] = tl.t_mul_gen(z[-1], out[prefix], "right")
    return out


def structure_constants(tl: TLAlgebra, basis: str, x: Word, y: Word,
                        table: ICTable | None = None, ctx: ICContext | None = None) -> dict:
    """Coefficients of ``B_x B_y`` over the basis ``B`` (``monomial`` or ``ic``)."""
    if basis == "monomial":
        return tl.monomial_structure_constants(x, y)
    if basis != "ic":
        raise ValueError(f"unknown basis {basis!r}")
    if table is None or x not in table or y not in table:
        raise KeyError("IC table does not cover the requested elements")
    ctx = ctx or tl_context(tl)
    prod = tl.t_mul(from_mprime(table[x]), from_mprime(table[y]))
    return expand_in_ic(ctx, table, to_mprime(prod))


def all_ic_structure_constants(tl: TLAlgebra, table: ICTable, ctx: ICContext | None = None) -> dict:
    """``{(x, y): {z: coefficient}}`` for all pairs indexed by the table."""
    ctx = ctx or tl_context(tl)
    elems = sorted(table.coeffs, key=shortlex_key)
    out = {}
    for x in elems:
        cx = from_mprime(table[x])
        right = _right_products(tl, cx, elems)
        for y in elems:
            acc: dict = {}
            for z, h in from_mprime(table[y]).items():
                add_into(acc, right[z], h)
            out[(x, y)] = expand_in_ic(ctx, table, to_mprime(acc))
    return out
