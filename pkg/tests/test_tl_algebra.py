import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tlcanon.laurent import ONE, Q, QC, QINV, V, VINV, ZERO, LaurentPoly, mono, subring_membership
from tlcanon.tl_algebra import (
    add_into, from_mprime, scale, tl_vec_dumps, to_mprime, vec_equal, vec_from_json, vec_to_json,
)

S, T = 1, 2


def test_gen_products_a2(get):
    tl = get("A2").tl
    assert tl.t_mul({(S,): ONE}, {(T,): ONE}) == {(S, T): ONE}
    assert tl.t_mul({(S,): ONE}, {(S,): ONE}) == {(): Q, (S,): Q - 1}
    got = tl.t_mul({(S,): ONE}, {(T, S): ONE})
    assert got == {w: -ONE for w in [(), (S,), (T,), (S, T), (T, S)]}
    a = {(S, T): V, (): QC}
    assert vec_equal(tl.t_mul({(): ONE}, a), a)


def test_length_additive_products_i2_4(get):
    tl = get("I2:4").tl
    left = tl.t_mul({(S,): ONE}, tl.t_mul({(T,): ONE}, {(S,): ONE}))
    right = tl.t_mul(tl.t_mul({(S,): ONE}, {(T,): ONE}), {(S,): ONE})
    assert left == right == {(S, T, S): ONE}


def test_t_mul_gen_rejects_bad_side(get):
    with pytest.raises(ValueError):
        get("A2").tl.t_mul_gen(1, {(): ONE}, "middle")


def test_bar_examples(get):
    tl = get("A2").tl
    assert tl.tl_bar({(): ONE}) == {(): ONE}
    assert tl.tl_bar({(S,): ONE}) == {(S,): QINV, (): QINV - 1}
    b_s = tl.monomial((S,))
    assert b_s == {(S,): VINV, (): VINV}
    assert tl.tl_bar(b_s) == b_s


def test_bar_row_examples(get):
    tl = get("A2").tl
    assert tl.bar_row(()) == {(): ONE}
    assert tl.bar_row((S,)) == {(S,): ONE, (): -(V - VINV)}
    row = tl.bar_row((S, T))
    assert row[(S, T)] == ONE
    assert set(row) <= {(), (S,), (T,), (S, T)}


def test_d_expand_examples(get):
    A2 = get("A2")
    assert A2.tl.d_expand((S, T)) == {(S, T): ONE}
    assert A2.tl.d_expand((S, T, S)) == {w: -ONE for w in [(), (S,), (T,), (S, T), (T, S)]}
    I4 = get("I2:4")
    d = I4.tl.d_expand((S, T, S, T))
    assert set(d) <= set(I4.wc) and len(I4.wc) == 7
    assert all(subring_membership(c, "Z_of_q") for c in d.values())
    # the rank-two relation itself
    assert d == {w: -ONE for w in I4.G.rank_two_proper(S, T)}


def test_monomial_examples(get):
    A2, I4 = get("A2"), get("I2:4")
    v2 = mono(-2)
    assert A2.tl.monomial((S, T)) == {w: v2 for w in [(), (S,), (T,), (S, T)]}
    v3 = mono(-3)
    assert I4.tl.monomial((S, T, S)) == {
        (S, T, S): v3, (S, T): v3, (T, S): v3, (T,): v3,
        (S,): (Q + 1) * v3, (): (Q + 1) * v3,
    }
    assert A2.tl.monomial(()) == {(): ONE}
    with pytest.raises(ValueError):
        A2.tl.monomial((S, T, S))


def test_structure_constant_examples(get):
    from tlcanon.ic_solver import structure_constants
    A2 = get("A2")
    assert structure_constants(A2.tl, "monomial", (S,), (S,)) == {(S,): QC}
    assert A2.tl.expand_in_monomials(A2.tl.monomial_word([S, T, S])) == {(S,): ONE}
    for name in ["A3", "I2:5", "B3"]:
        s = get(name)
        c = structure_constants(s.tl, "ic", (1,), (1,), s.table, s.ctx)
        assert c == {(1,): QC}
    with pytest.raises(ValueError):
        structure_constants(A2.tl, "bogus", (S,), (S,))


@pytest.mark.parametrize("name", ["A3", "D4"])
def test_temperley_lieb_relations(get, name):
    s = get(name)
    tl, graph = s.tl, s.graph
    for i in graph.generators:
        assert vec_equal(tl.monomial_word([i, i]), scale(tl.monomial((i,)), QC))
        for j in graph.generators:
            if i == j:
                continue
            if graph.m(i, j) == 2:
                assert vec_equal(tl.monomial_word([i, j]), tl.monomial_word([j, i]))
            else:
                assert vec_equal(tl.monomial_word([i, j, i]), tl.monomial((i,)))


# -- D_{x,w} ----------------------------------------------------------------------------


@pytest.mark.parametrize("name, cap", [("A3", None), ("I2:4", None), ("B3", None), ("affA3", 6)])
def test_d_expand_in_z_q(get, name, cap):
    s = get(name, cap)
    elems = s.G.enumerate(cap)
    wc = set(s.wc)
    for w, fc in elems:
        d = s.tl.d_expand(w)
        assert set(d) <= wc
        assert all(c and subring_membership(c, "Z_of_q") for c in d.values())
        if fc:
            assert d == {w: ONE}
        else:
            # every term is Bruhat-below w and strictly shorter
            assert all(len(x) < len(w) and s.G.bruhat_leq(x, w) for x in d)


def test_projects_into_lattice(get):
    s = get("I2:4")
    assert s.tl.projects_into_lattice((S, T, S, T))
    assert s.tl.projects_into_lattice((S,))
    a = get("affA3", 6)
    assert all(a.tl.projects_into_lattice(w) for w, _ in a.G.enumerate(6))


def _specialize(p, v=Fraction(2)):
    return sum((Fraction(c) * v ** e for e, c in p.items()), Fraction(0))


def _ideal_reductions(G, q=Fraction(4)):
    """Rewrite every complex T_w modulo J(X) at a numeric q, by linear algebra.

    J(X) is spanned by the two-sided translates of the rank-two sums; reducing
    with complex columns as pivots writes each complex T_w over non-complex ones.
    """
    elems = [w for w, _ in G.enumerate()]
    complex_ = [w for w, fc in G.enumerate() if not fc]
    order = complex_ + [w for w in elems if G.in_wc(w)]
    col = {w: k for k, w in enumerate(order)}

    def gen_mul(vec, s, side):
        out = {}
        for x, c in vec.items():
            if side == "right":
                desc, sx = s in G.right_descents(x), G.right_mul(x, s)
            else:
                desc, sx = s in G.left_descents(x), G.left_mul(s, x)
            if desc:
                out[sx] = out.get(sx, 0) + q * c
                out[x] = out.get(x, 0) + (q - 1) * c
            else:
                out[sx] = out.get(sx, 0) + c
        return {k: c for k, c in out.items() if c}

    pivots = {}  # pivot column -> row (dict), fully reduced on pivot columns

    def reduce(vec):
        vec = dict(vec)
        for p in sorted(pivots):
            c = vec.get(p)
            if c:
                for k, a in pivots[p].items():
                    vec[k] = vec.get(k, 0) - c * a
                vec = {k: a for k, a in vec.items() if a}
        return vec

    def insert(vec):
        vec = reduce(vec)
        if not vec:
            return False
        p = min(vec, key=col.get)
        lead = vec[p]
        vec = {k: a / lead for k, a in vec.items()}
        for r in pivots.values():
            c = r.get(p)
            if c:
                for k, a in vec.items():
                    r[k] = r.get(k, 0) - c * a
                for k in [k for k, a in r.items() if not a]:
                    del r[k]
        pivots[p] = vec
        return True

    queue = []
    for i, j in G.graph.braid_pairs():
        rel = {w: Fraction(1) for w in G.rank_two_proper(i, j) + [G.rank_two_longest(i, j)]}
        queue.append(rel)
    while queue:
        vec = queue.pop()
        if insert(vec):
            for s in G.graph.generators:
                queue.append(gen_mul(vec, s, "left"))
                queue.append(gen_mul(vec, s, "right"))
    return pivots, complex_


@pytest.mark.parametrize("name", ["A2", "A3", "I2:4", "I2:5", "B3"])
def test_d_expand_against_linear_algebra(get, name):
    s = get(name)
    pivots, complex_ = _ideal_reductions(s.G)
    assert len(pivots) == len(complex_)
    assert set(pivots) == set(complex_)
    for w in complex_:
        expected = {x: -a for x, a in pivots[w].items() if x != w}
        got = {x: _specialize(c) for x, c in s.tl.d_expand(w).items()}
        assert {x: a for x, a in got.items() if a} == expected


# -- algebra axioms ---------------------------------------------------------------------


def _random_vec(draw, elems):
    support = draw(st.lists(st.sampled_from(elems), max_size=4, unique=True))
    out = {}
    for w in support:
        terms = draw(st.dictionaries(st.integers(-3, 3), st.integers(-3, 3), max_size=3))
        p = LaurentPoly(terms)
        if p:
            out[w] = p
    return out


@st.composite
def tl_vectors(draw, name):
    from helpers import setup_for
    s = setup_for(name)
    return _random_vec(draw, s.wc)


@pytest.mark.parametrize("name", ["A2", "A3", "I2:4", "I2:5"])
def test_bar_is_involution(get, name):
    s = get(name)

    @settings(max_examples=25, deadline=None)
    @given(tl_vectors(name))
    def check(a):
        assert vec_equal(s.tl.tl_bar(s.tl.tl_bar(a)), a)

    check()


@pytest.mark.parametrize("name", ["A3", "I2:5"])
def test_bar_is_ring_homomorphism(get, name):
    s = get(name)

    @settings(max_examples=20, deadline=None)
    @given(tl_vectors(name), tl_vectors(name))
    def check(a, b):
        tl = s.tl
        assert vec_equal(tl.tl_bar(tl.t_mul(a, b)), tl.t_mul(tl.tl_bar(a), tl.tl_bar(b)))

    check()


@pytest.mark.parametrize("name", ["A3", "I2:4", "B3"])
def test_associativity(get, name):
    s = get(name)

    @settings(max_examples=15, deadline=None)
    @given(tl_vectors(name), tl_vectors(name), tl_vectors(name))
    def check(a, b, c):
        tl = s.tl
        assert vec_equal(tl.t_mul(tl.t_mul(a, b), c), tl.t_mul(a, tl.t_mul(b, c)))

    check()


def test_monomial_independent_of_reduced_word(get):
    from helpers import all_reduced_words
    s = get("A3")
    for w in s.wc:
        for word in all_reduced_words(s.G, w):
            assert vec_equal(s.tl.monomial_word(word), s.tl.monomial(w))


def test_monomials_bar_invariant(get):
    for name in ["A3", "I2:5", "B3"]:
        s = get(name)
        for w in s.wc:
            assert vec_equal(s.tl.tl_bar(s.tl.monomial(w)), s.tl.monomial(w))


def test_subword_monomial_bound_a3(get):
    """Dropping letters from a reduced word of w gives q_c^m b_x with m <= r - k - 1."""
    from helpers import all_reduced_words
    s = get("A3")
    checked = 0
    for w in s.wc:
        r = len(w)
        for word in all_reduced_words(s.G, w):
            for k in range(r):
                for idx in itertools.combinations(range(r), k):
                    sub = [word[i] for i in idx]
                    coords = s.tl.expand_in_monomials(s.tl.monomial_word(sub))
                    assert len(coords) == 1
                    (x, c), = coords.items()
                    assert s.G.in_wc(x)
                    m = 0
                    while c != ONE:
                        quotient = _divide_by_qc(c)
                        assert quotient is not None, c
                        c, m = quotient, m + 1
                    assert m <= r - k - 1
                    checked += 1
    assert checked == 93


def _divide_by_qc(p):
    """``p / (v + v^-1)`` if the division is exact, else None."""
    out, floor = ZERO, p.valuation() + 1
    while p:
        top = p.degree()
        if top - 1 < floor:
            return None
        term = mono(top - 1, p.coeff(top))
        out, p = out + term, p - term * QC
    return out


# -- transitions ------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["A3", "A4", "D4"])
def test_qtilde_triangular_in_ade(get, name):
    s = get(name)
    tables = s.tl.transition_tables(s.wc)
    assert tables.triangularity_violations() == []
    for (x, w) in tables.qtilde:
        assert s.G.bruhat_leq(x, w)


def test_qtilde_fails_in_i2_4(get):
    s = get("I2:4")
    tables = s.tl.transition_tables(s.wc)
    bad = tables.triangularity_violations()
    assert ((S,), (S, T, S), QINV - 1) in bad
    assert tables.ptilde[((S,), (S, T, S))] == 1 + mono(-2)


def test_transition_examples(get):
    s = get("A2")
    tables = s.tl.transition_tables(s.wc)
    # v^-1 t_s = b_s - v^-1 b_e
    assert tables.qtilde[((S,), (S,))] == ONE
    assert tables.qtilde[((), (S,))] == VINV
    assert tables.signed_q((), (S,)) == -VINV
    assert tables.ptilde[((), (S,))] == VINV


@pytest.mark.parametrize("name", ["A3", "I2:4", "B3"])
def test_ptilde_inverts_signed_qtilde(get, name):
    s = get(name)
    tables = s.tl.transition_tables(s.wc)
    elems = tables.elements
    for x in elems:
        for w in elems:
            acc = ZERO
            for y in elems:
                p = tables.ptilde.get((x, y))
                if p:
                    acc = acc + p * tables.signed_q(y, w)
            assert acc == (ONE if x == w else ZERO)


def test_transition_tables_need_closed_set(get):
    s = get("A2")
    with pytest.raises(ValueError):
        s.tl.transition_tables([(S, T)])


# -- serialization ----------------------------------------------------------------------


def test_vec_json_round_trip(get):
    s = get("A2")
    b = s.tl.monomial((S, T))
    assert vec_from_json(vec_to_json(b)) == b
    assert tl_vec_dumps({(S,): VINV}) == '{"coeffs":[{"word":[1],"poly":{"-1":1}}]}'
    assert from_mprime(to_mprime(b)) == b


def test_add_into_drops_zeros():
    acc = {(1,): ONE}
    add_into(acc, {(1,): ONE}, -ONE)
    assert acc == {}
