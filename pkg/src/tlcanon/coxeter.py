"""
Coxeter graphs and group elements in ShortLex normal form.

An element is represented by its ShortLex-least reduced word, a tuple of
generator labels ``1..n``. Normal forms come from the action of the group on
the dual of the reflection representation: an element ``w`` is encoded by the
vector ``(<w(rho), alpha_s>)_s`` where ``rho`` pairs to 1 with every simple
root. A generator ``s`` is a left descent of ``w`` exactly when that
coordinate is negative, and the encoding is faithful because ``rho`` lies in
the interior of the fundamental chamber.

>>> G = CoxeterGroup(parse_graph("A2"))
>>> G.right_mul((2, 1), 2)
(1, 2, 1)
>>> sorted(G.left_descents((1, 2, 1)))
[1, 2]
>>> [(w, fc) for w, fc in G.enumerate()][-1]
((1, 2, 1), False)
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping

from .cyclo import RealCyclotomic

__all__ = [
    "Word", "INF", "GraphError", "CoxeterGraph", "CoxeterGroup",
    "parse_graph", "shortlex_key", "word_to_str",
]

# a canonical (ShortLex-least reduced) word; the empty tuple is the identity
Word = tuple[int, ...]

INF = math.inf


class GraphError(ValueError):
    """Malformed or unknown Coxeter graph specification."""


def shortlex_key(w: Word) -> tuple[int, Word]:
    return (len(w), w)


def word_to_str(w: Word) -> str:
    return "e" if not w else " ".join(f"s{s}" for s in w)


@dataclass(frozen=True)
class CoxeterGraph:
    node_count: int
    # sorted ((i, j), m) with i < j and m >= 3 or m == INF; absent pairs commute
    bonds: tuple[tuple[tuple[int, int], float], ...]
    name: str = ""

    @classmethod
    def from_bonds(cls, n: int, bonds: Mapping[tuple[int, int], float], name: str = "") -> CoxeterGraph:
        if n < 1:
            raise GraphError("a Coxeter graph needs at least one node")
        clean: dict[tuple[int, int], float] = {}
        for (i, j), m in bonds.items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"node index out of range in edge ({i}, {j})")
            if i == j:
                raise GraphError(f"loop at node {i}")
            if m != INF and (m != int(m) or m < 2):
                raise GraphError(f"bond strength must be >= 2, got {m}")
            key = (min(i, j), max(i, j))
            if key in clean and clean[key] != m:
                raise GraphError(f"conflicting bond strengths on {key}")
            if m != 2:
                clean[key] = m if m == INF else int(m)
        return cls(n, tuple(sorted(clean.items())), name)

    @cached_property
    def _m(self) -> dict[tuple[int, int], float]:
        return dict(self.bonds)

    def m(self, i: int, j: int) -> float:
        if i == j:
            return 1
        return self._m.get((min(i, j), max(i, j)), 2)

    @property
    def generators(self) -> range:
        return range(1, self.node_count + 1)

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and self.m(i, j) != 2

    def braid_pairs(self) -> list[tuple[int, int]]:
        """Adjacent pairs with a finite bond; these define complex elements."""
        return [p for p, m in self.bonds if m != INF]

    def is_simply_laced(self) -> bool:
        return all(m == 3 for _, m in self.bonds)

    def gram_matrix(self):
        import numpy as np

        n = self.node_count
        B = np.eye(n)
        for (i, j), m in self.bonds:
            B[i - 1, j - 1] = B[j - 1, i - 1] = -1.0 if m == INF else -math.cos(math.pi / m)
        return B

    @cached_property
    def is_finite(self) -> bool:
        """Finite Coxeter group iff the Gram matrix is positive definite."""
        import numpy as np

        return bool(np.linalg.eigvalsh(self.gram_matrix()).min() > 1e-9)

    def to_json(self) -> dict:
        return {
            "nodes": self.node_count,
            "edges": [[i, j, 0 if m == INF else m] for (i, j), m in self.bonds],
        }

    @cached_property
    def canonical_hash(self) -> str:
        text = json.dumps(self.to_json(), separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def __str__(self) -> str:
        return self.name or json.dumps(self.to_json(), separators=(",", ":"))


def _chain(n: int, m_last: int = 3) -> dict[tuple[int, int], float]:
    bonds = {(i, i + 1): 3 for i in range(1, n)}
    if n >= 2:
        bonds[(n - 1, n)] = m_last
    return bonds


def _named(name: str) -> CoxeterGraph:
    m = re.fullmatch(r"([A-Za-z]+)(\d+)(?::(\d+))?", name.strip())
    if not m:
        raise GraphError(f"unknown Coxeter graph {name!r}")
    kind, n, extra = m.group(1), int(m.group(2)), m.group(3)
    if extra is not None and kind != "I":
        raise GraphError(f"unknown Coxeter graph {name!r}")
    if kind == "A" and n >= 1:
        return CoxeterGraph.from_bonds(n, _chain(n), name)
    if kind in ("B", "C") and n >= 2:
        return CoxeterGraph.from_bonds(n, _chain(n, 4), name)
    if kind == "D" and n >= 4:
        bonds = _chain(n - 1)
        bonds[(n - 2, n)] = 3
        return CoxeterGraph.from_bonds(n, bonds, name)
    if kind == "E" and n >= 6:
        # chain 1..n-1 plus one node (labelled n) attached to node 3
        bonds = _chain(n - 1)
        bonds[(3, n)] = 3
        return CoxeterGraph.from_bonds(n, bonds, name)
    if kind == "F" and n == 4:
        return CoxeterGraph.from_bonds(4, {(1, 2): 3, (2, 3): 4, (3, 4): 3}, name)
    if kind == "G" and n == 2:
        return CoxeterGraph.from_bonds(2, {(1, 2): 6}, name)
    if kind == "H" and n in (2, 3, 4):
        bonds = _chain(n)
        bonds[(1, 2)] = 5
        return CoxeterGraph.from_bonds(n, bonds, name)
    if kind == "I" and n == 2 and extra is not None:
        mm = int(extra)
        if mm < 2:
            raise GraphError(f"bond strength must be >= 2, got {mm}")
        return CoxeterGraph.from_bonds(2, {(1, 2): mm}, name)
    if kind == "affA" and n >= 1:
        if n == 1:
            return CoxeterGraph.from_bonds(2, {(1, 2): INF}, name)
        bonds = {(i, i + 1): 3 for i in range(1, n + 1)}
        bonds[(1, n + 1)] = 3
        return CoxeterGraph.from_bonds(n + 1, bonds, name)
    raise GraphError(f"unknown Coxeter graph {name!r}")


def parse_graph(spec: str | Mapping) -> CoxeterGraph:
    """Build a graph from a type name (``"D4"``, ``"I2:5"``, ``"affA3"``, ...)
    or from ``{"nodes": n, "edges": [[i, j, m], ...]}`` with ``m = 0`` for an
    infinite bond. JSON may be given as text."""
    if isinstance(spec, str):
        text = spec.strip()
        if not text.startswith("{"):
            return _named(text)
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"bad graph JSON: {exc}") from None
    try:
        n = int(spec["nodes"])
        edges = spec.get("edges", [])
        bonds = {}
        for i, j, mm in edges:
            bonds[(int(i), int(j))] = INF if int(mm) == 0 else int(mm)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"bad graph JSON: {exc}") from None
    return CoxeterGraph.from_bonds(n, bonds, spec.get("name", ""))


class CoxeterGroup:
    """Normal forms, descents, Bruhat order and complex elements for one graph.

    All results are cached; instances are meant to be shared.
    """

    def __init__(self, graph: CoxeterGraph):
        self.graph = graph
        self.n = graph.node_count
        finite_ms = [int(m) for _, m in graph.bonds if m != INF]
        M = math.lcm(*finite_ms) if finite_ms else 1
        self.field = RealCyclotomic(M)
        self._exact_int = self.field.degree == 1
        # a[s][t] = 2 B(alpha_s, alpha_t) for adjacent t
        self._nbrs: list[list[tuple[int, object]]] = [[] for _ in range(self.n)]
        for (i, j), m in graph.bonds:
            if m == INF:
                a = self.field.from_int(-2)
            else:
                a = tuple(-x for x in self.field.two_cos(int(m)))
            # degree-one rings are plain integers; otherwise store a multiplication matrix
            a = a[0] if self._exact_int else self.field.mul_matrix(a)
            self._nbrs[i - 1].append((j - 1, a))
            self._nbrs[j - 1].append((i - 1, a))
        one = 1 if self._exact_int else self.field.from_int(1)
        self._rho = (one,) * self.n
        self._vec_cache: dict[Word, tuple] = {(): self._rho}
        self._nf_cache: dict[tuple, Word] = {self._rho: ()}
        self._left: dict[tuple[int, Word], Word] = {}
        self._right: dict[tuple[Word, int], Word] = {}
        self._ldes: dict[Word, frozenset[int]] = {}
        self._rdes: dict[Word, frozenset[int]] = {}
        self._complex: dict[Word, bool] = {(): False}
        self._leq: dict[tuple[Word, Word], bool] = {}
        self._lower: dict[Word, frozenset[Word]] = {(): frozenset([()])}
        self._braid_pairs = graph.braid_pairs()

    # -- the numbers game --------------------------------------------------

    def _act(self, vec: tuple, s: int) -> tuple:
        i = s - 1
        c = vec[i]
        out = list(vec)
        if self._exact_int:
            out[i] = -c
            for j, a in self._nbrs[i]:
                out[j] = vec[j] - a * c
        else:
            out[i] = tuple(-x for x in c)
            for j, cols in self._nbrs[i]:
                prod = [0] * len(c)
                for k, ck in enumerate(c):
                    if ck:
                        for r, x in enumerate(cols[k]):
                            prod[r] += ck * x
                out[j] = tuple(x - y for x, y in zip(vec[j], prod))
        return tuple(out)

    def _negative(self, x) -> bool:
        if self._exact_int:
            return x < 0
        return self.field.sign(x) < 0

    def _vec(self, w: Word) -> tuple:
        vec = self._vec_cache.get(w)
        if vec is None:
            vec = self._rho
            for s in reversed(w):
                vec = self._act(vec, s)
            self._vec_cache[w] = vec
        return vec

    def _normal_form(self, vec: tuple) -> Word:
        w = self._nf_cache.get(vec)
        if w is not None:
            return w
        start = vec
        word = []
        while True:
            for i, x in enumerate(vec):
                if self._negative(x):
                    word.append(i + 1)
                    vec = self._act(vec, i + 1)
                    break
            else:
                break
        w = tuple(word)
        self._nf_cache[start] = w
        self._vec_cache.setdefault(w, start)
        return w

    def normal_form(self, word) -> Word:
        """Canonical word of the product of an arbitrary word of generators."""
        vec = self._rho
        for s in reversed(tuple(word)):
            self._check_gen(s)
            vec = self._act(vec, s)
        return self._normal_form(vec)

    def _check_gen(self, s: int) -> None:
        if not 1 <= s <= self.n:
            raise ValueError(f"generator {s} out of range 1..{self.n}")

    # -- multiplication and descents ----------------------------------------

    def left_mul(self, s: int, w: Word) -> Word:
        key = (s, w)
        r = self._left.get(key)
        if r is None:
            self._check_gen(s)
            if w and w[0] == s:
                r = w[1:]
            else:
                r = self._normal_form(self._act(self._vec(w), s))
            self._left[key] = r
        return r

    def right_mul(self, w: Word, s: int) -> Word:
        key = (w, s)
        r = self._right.get(key)
        if r is None:
            self._check_gen(s)
            vec = self._act(self._rho, s)
            for t in reversed(w):
                vec = self._act(vec, t)
            r = self._normal_form(vec)
            self._right[key] = r
        return r

    def mult_gen(self, w: Word, s: int, side: str = "left") -> Word:
        if side == "left":
            return self.left_mul(s, w)
        if side == "right":
            return self.right_mul(w, s)
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")

    def multiply(self, x: Word, y: Word) -> Word:
        for s in y:
            x = self.right_mul(x, s)
        return x

    def inverse(self, w: Word) -> Word:
        return self.normal_form(reversed(w))

    def left_descents(self, w: Word) -> frozenset[int]:
        d = self._ldes.get(w)
        if d is None:
            d = frozenset(i + 1 for i, x in enumerate(self._vec(w)) if self._negative(x))
            self._ldes[w] = d
        return d

    def right_descents(self, w: Word) -> frozenset[int]:
        d = self._rdes.get(w)
        if d is None:
            d = self.left_descents(self.inverse(w))
            self._rdes[w] = d
        return d

    # -- complex elements ----------------------------------------------------

    def rank_two_longest(self, i: int, j: int) -> Word:
        """Canonical word of the longest element of the parabolic <s_i, s_j>."""
        m = self.graph.m(i, j)
        if m == INF:
            raise ValueError(f"<s{i}, s{j}> is infinite")
        return self.normal_form((i, j) * (int(m) // 2) + ((i,) if m % 2 else ()))

    def rank_two_proper(self, i: int, j: int) -> list[Word]:
        """All elements of <s_i, s_j> strictly below its longest element."""
        m = int(self.graph.m(i, j))
        out = {()}
        for k in range(1, m):
            for a, b in ((i, j), (j, i)):
                out.add(self.normal_form(((a, b) * k)[:k]))
        return sorted(out, key=shortlex_key)

    def _bad_pair(self, desc: frozenset[int]) -> tuple[int, int] | None:
        for i, j in self._braid_pairs:
            if i in desc and j in desc:
                return (i, j)
        return None

    def is_complex(self, w: Word) -> bool:
        """Whether ``w = x1 * w_ij * x2`` with lengths adding, for some
        adjacent pair with a finite bond.

        Uses that ``w_ij`` is a right factor of a prefix ``p`` of ``w`` iff both
        ``s_i`` and ``s_j`` are right descents of ``p``.
        """
        r = self._complex.get(w)
        if r is None:
            desc = self.right_descents(w)
            r = self._bad_pair(desc) is not None or any(
                self.is_complex(self.right_mul(w, s)) for s in sorted(desc)
            )
            self._complex[w] = r
        return r

    def in_wc(self, w: Word) -> bool:
        return not self.is_complex(w)

    def complex_factorization(self, w: Word) -> tuple[Word, tuple[int, int], Word]:
        """``(x1, (i, j), x2)`` with ``w = x1 w_ij x2`` length-additively."""
        suffix: list[int] = []
        p = w
        while True:
            desc = self.right_descents(p)
            pair = self._bad_pair(desc)
            if pair is not None:
                break
            for s in sorted(desc):
                ps = self.right_mul(p, s)
                if self.is_complex(ps):
                    suffix.append(s)
                    p = ps
                    break
            else:
                raise ValueError(f"{word_to_str(w)} is not complex")
        x1 = p
        for s in reversed(self.rank_two_longest(*pair)):
            x1 = self.right_mul(x1, s)
        return x1, pair, tuple(reversed(suffix))

    # -- Bruhat order --------------------------------------------------------

    def bruhat_leq(self, x: Word, w: Word) -> bool:
        """Bruhat-Chevalley order via the lifting property."""
        while True:
            if len(x) > len(w):
                return False
            if not x:
                return True
            if len(x) == len(w):
                return x == w
            key = (x, w)
            r = self._leq.get(key)
            if r is not None:
                return r
            s, u = w[0], w[1:]
            if s in self.left_descents(x):
                r = self.bruhat_leq(self.left_mul(s, x), u)
            else:
                r = self.bruhat_leq(x, u)
            self._leq[key] = r
            return r

    def bruhat_lower(self, w: Word) -> frozenset[Word]:
        """All ``x <= w`` in W (subword closure)."""
        r = self._lower.get(w)
        if r is None:
            s, u = w[0], w[1:]
            below = self.bruhat_lower(u)
            r = below | {self.left_mul(s, y) for y in below}
            self._lower[w] = r
        return r

    def bruhat_ideal(self, w: Word) -> list[Word]:
        """``{x in W_c : x <= w}`` sorted by length then ShortLex."""
        return sorted((x for x in self.bruhat_lower(w) if self.in_wc(x)), key=shortlex_key)

    # -- enumeration ---------------------------------------------------------

    def _shells(self, cap: int | None, only_wc: bool) -> Iterator[list[Word]]:
        if cap is None and not self.graph.is_finite and not only_wc:
            raise ValueError("length cap required for an infinite Coxeter group")
        level = [()]
        length = 0
        while level:
            yield level
            if cap is not None and length >= cap:
                return
            nxt: set[Word] = set()
            for x in level:
                rd = self.right_descents(x)
                for s in self.graph.generators:
                    if s not in rd:
                        nxt.add(self.right_mul(x, s))
            if only_wc:
                keep = set(level)
                good = []
                for w in nxt:
                    desc = self.right_descents(w)
                    # prefixes of non-complex elements are non-complex
                    ok = self._bad_pair(desc) is None and all(
                        self.right_mul(w, s) in keep for s in desc)
                    self._complex[w] = not ok
                    if ok:
                        good.append(w)
                nxt = set(good)
            level = sorted(nxt)
            length += 1

    def enumerate(self, cap: int | None = None) -> list[tuple[Word, bool]]:
        """Elements of W with length <= cap (all of W if finite and no cap),
        each paired with membership in W_c, ordered by length then ShortLex."""
        out = []
        for level in self._shells(cap, only_wc=False):
            out.extend((w, self.in_wc(w)) for w in level)
        return out

    def enumerate_wc(self, cap: int | None = None) -> list[Word]:
        """Non-complex elements with length <= cap.

        Without a cap this terminates only when W_c is finite.
        """
        out = []
        for level in self._shells(cap, only_wc=True):
            out.extend(level)
        return out

    def order(self) -> int:
        if not self.graph.is_finite:
            raise ValueError("infinite Coxeter group")
        return sum(len(level) for level in self._shells(None, only_wc=False))
