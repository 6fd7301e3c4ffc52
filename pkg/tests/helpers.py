"""Shared fixtures data and independent oracles for the test suite."""

import itertools
from collections import deque
from functools import lru_cache

from tlcanon.coxeter import INF, CoxeterGroup, parse_graph
from tlcanon.hecke_kl import HeckeAlgebra
from tlcanon.ic_solver import solve_ic, tl_context
from tlcanon.tl_algebra import TLAlgebra


class Setup:
    def __init__(self, name, cap=None):
        self.graph = parse_graph(name)
        self.G = CoxeterGroup(self.graph)
        self.tl = TLAlgebra(self.G)
        self.ctx = tl_context(self.tl)
        self.hecke = HeckeAlgebra(self.G, self.tl)
        self.cap = cap
        self._wc = None
        self._table = None

    @property
    def wc(self):
        if self._wc is None:
            self._wc = self.G.enumerate_wc(self.cap)
        return self._wc

    @property
    def table(self):
        if self._table is None:
            self._table = solve_ic(self.ctx, self.wc)
        return self._table


@lru_cache(maxsize=None)
def setup_for(name, cap=None):
    return Setup(name, cap)


def all_reduced_words(G, w):
    """Every reduced word of w, by braid moves from one of them."""
    graph = G.graph
    moves = []
    for i, j in itertools.permutations(graph.generators, 2):
        m = graph.m(i, j)
        if m != INF:
            m = int(m)
            moves.append((((i, j) * m)[:m], ((j, i) * m)[:m]))
    seen = {w}
    queue = deque([w])
    while queue:
        word = queue.popleft()
        for a, b in moves:
            k = len(a)
            for p in range(len(word) - k + 1):
                if word[p:p + k] == a:
                    nw = word[:p] + b + word[p + k:]
                    if nw not in seen:
                        seen.add(nw)
                        queue.append(nw)
    return seen


def complex_by_words(G, w):
    words = all_reduced_words(G, w)
    for i, j in G.graph.braid_pairs():
        m = int(G.graph.m(i, j))
        for a in (((i, j) * m)[:m], ((j, i) * m)[:m]):
            for word in words:
                if any(word[p:p + m] == a for p in range(len(word) - m + 1)):
                    return True
    return False


def commutation_class_has_factor(G, w):
    """Commutation-class search: the check suggested for complex detection."""
    graph = G.graph
    seen = {w}
    queue = deque([w])
    while queue:
        word = queue.popleft()
        for i, j in graph.braid_pairs():
            m = int(graph.m(i, j))
            for a in (((i, j) * m)[:m], ((j, i) * m)[:m]):
                if any(word[p:p + m] == a for p in range(len(word) - m + 1)):
                    return True
        for p in range(len(word) - 1):
            if graph.m(word[p], word[p + 1]) == 2:
                nw = word[:p] + (word[p + 1], word[p]) + word[p + 2:]
                if nw not in seen:
                    seen.add(nw)
                    queue.append(nw)
    return False
