from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from racg.graph import DefiningGraph
from racg.words import (NormalForm, WordError, csupp, cyclic_decompose, is_finite_order, is_reduced,
                        left_descents, max_join_subword, max_star_subword, min_double_coset, normalize,
                        parse_word, product_membership, right_descents, special_membership, support)

import oracles
from strategies import graph_and_word, graph_and_words, graphs


def _matrix(g, w):
    mats = oracles.tits_generators(g.vertices, g.edges)
    return oracles.word_matrix(mats, list(w), len(g)).tobytes()


def _special_elements(g, names, radius):
    """Every element of G_names up to ``radius``, by brute-force multiplication."""
    e = NormalForm.identity(g)
    seen = {e}
    layer = [e]
    for _ in range(radius):
        layer = [x * normalize(g, s) for x in layer for s in names]
        layer = [x for x in layer if x not in seen]
        seen.update(layer)
    return seen


class TestParsing:
    def test_string_and_sequence(self, square):
        assert parse_word(square, "a b  c") == (0, 1, 2)
        assert parse_word(square, ["a", "b"]) == (0, 1)
        assert parse_word(square, "") == ()

    def test_unknown_letter(self, square):
        with pytest.raises(WordError, match="unknown vertex"):
            parse_word(square, "a z")


class TestNormalForm:
    def test_square_examples(self, square):
        assert str(normalize(square, "a a")) == ""
        assert str(normalize(square, "b a")) == "a b"
        assert str(normalize(square, "a b a")) == "b"
        assert str(normalize(square, "a c a")) == "a c a"
        assert not is_reduced(square, "a b a") and is_reduced(square, "a c a")

    def test_pentagon_is_free_of_relations_between_far_letters(self, pentagon):
        w = normalize(pentagon, "a c a c")
        assert len(w) == 4 and w.power(3) != NormalForm.identity(pentagon)

    @settings(max_examples=300, deadline=None)
    @given(graph_and_word())
    def test_canonical_is_lex_least_reduced_spelling(self, gw):
        g, w = gw
        nf = normalize(g, w)
        assert is_reduced(g, nf.letters)
        orbit = oracles.transpose_orbit(nf.codes, lambda x, y: g.adj[x] >> y & 1)
        assert nf.codes == min(orbit)
        assert _matrix(g, w) == _matrix(g, nf.letters)

    @settings(max_examples=300, deadline=None)
    @given(graph_and_words(k=2))
    def test_equal_elements_share_canonical_form(self, gws):
        g, (u, v) = gws
        same = _matrix(g, u) == _matrix(g, v)
        assert (normalize(g, u) == normalize(g, v)) == same

    @settings(max_examples=200, deadline=None)
    @given(graph_and_words(k=3))
    def test_group_axioms(self, gws):
        g, (u, v, w) = gws
        x, y, z = (normalize(g, t) for t in (u, v, w))
        e = NormalForm.identity(g)
        assert (x * y) * z == x * (y * z)
        assert x * x.inverse() == e == x.inverse() * x
        assert x * e == x == e * x
        assert str(x.inverse()) == str(normalize(g, list(reversed(u))))
        assert x.conjugate(y) == y * x * y.inverse()

    @settings(max_examples=200, deadline=None)
    @given(graph_and_word())
    def test_descents(self, gw):
        g, w = gw
        x = normalize(g, w)
        left, right = left_descents(x), right_descents(x)
        for s in range(len(g)):
            assert bool(left >> s & 1) == (len(x.letter_times(s)) < len(x))
            assert bool(right >> s & 1) == (len(x.times_letter(s)) < len(x))

    def test_ordering(self, square):
        a, b, ab = (normalize(square, w) for w in ("a", "b", "a b"))
        assert sorted([ab, b, a]) == [a, b, ab]


class TestCyclicReduction:
    def test_conjugate_of_a_letter(self, pentagon):
        x = normalize(pentagon, "c d a d c")
        dec = cyclic_decompose(x)
        assert str(dec.core) == "a" and str(dec.conjugator) == "c d"
        assert csupp(x) == {"a"} and support(x) == {"a", "c", "d"}
        assert is_finite_order(x)

    @settings(max_examples=300, deadline=None)
    @given(graph_and_word())
    def test_decomposition(self, gw):
        g, w = gw
        x = normalize(g, w)
        dec = cyclic_decompose(x)
        assert dec.element() == x
        assert len(x) == 2 * len(dec.conjugator) + len(dec.core)
        for s in range(len(g)):
            t = NormalForm(g, (s,))
            assert len(t * dec.core * t) >= len(dec.core)

    @settings(max_examples=200, deadline=None)
    @given(graph_and_word())
    def test_finite_order_means_an_involution(self, gw):
        g, w = gw
        x = normalize(g, w)
        e = NormalForm.identity(g)
        if is_finite_order(x):
            assert x * x == e
        else:
            assert x * x != e and len(x.power(4)) > len(x.power(2))

    def test_special_membership(self, square):
        assert special_membership(normalize(square, "a c a"), "ac")
        assert not special_membership(normalize(square, "a b"), "ac")


class TestDoubleCosets:
    @settings(max_examples=120, deadline=None)
    @given(graphs(max_n=5), st.data())
    def test_minimal_representative(self, g, data):
        w = data.draw(st.lists(st.sampled_from(g.vertices), max_size=7))
        A = data.draw(st.sets(st.sampled_from(g.vertices)))
        B = data.draw(st.sets(st.sampled_from(g.vertices)))
        x = normalize(g, w)
        m = min_double_coset(x, A, B)
        ga = _special_elements(g, sorted(A), len(x))
        gb = _special_elements(g, sorted(B), len(x))
        coset = {p * x * q for p in ga for q in gb}
        assert m in coset
        assert len(m) == min(len(y) for y in coset)

    @settings(max_examples=120, deadline=None)
    @given(graphs(max_n=5), st.data())
    def test_product_membership_matches_brute_force(self, g, data):
        w = data.draw(st.lists(st.sampled_from(g.vertices), max_size=6))
        k = data.draw(st.sampled_from([2, 3]))
        factors = [data.draw(st.sets(st.sampled_from(g.vertices))) for _ in range(k)]
        x = normalize(g, w)
        balls = [_special_elements(g, sorted(f), len(x)) for f in factors]
        if k == 2:
            truth = any(p.inverse() * x in balls[1] for p in balls[0])
        else:
            mid = set(balls[1])
            truth = any(p.inverse() * x * q.inverse() in mid for p, q in product(balls[0], balls[2]))
        # the middle ball only reaches |x|, enough because decompositions can be length-additive
        assert product_membership(x, factors) == truth

    def test_product_arity(self, square):
        with pytest.raises(WordError):
            product_membership(normalize(square, "a"), [["a"]])


class TestWindows:
    @settings(max_examples=150, deadline=None)
    @given(graph_and_word(max_n=5, max_len=10))
    def test_longest_join_and_star_windows(self, gw):
        g, w = gw
        x = normalize(g, w)
        G = oracles.nx_graph(g.vertices, g.edges)
        letters = x.letters
        assume(letters)
        best_join = best_star = 0
        for i in range(len(letters)):
            for j in range(i + 1, len(letters) + 1):
                piece = set(letters[i:j])
                if oracles.brute_in_join(G, piece):
                    best_join = max(best_join, j - i)
                if oracles.brute_in_star(G, piece):
                    best_star = max(best_star, j - i)
        assert max_join_subword(x).length == best_join
        assert max_star_subword(x).length == best_star

    def test_window_slice(self, pentagon):
        x = normalize(pentagon, "a c e b d")
        win = max_star_subword(x)
        assert win.length == 2 and len(win.slice(x)) == 2


def test_identity_letters():
    g = DefiningGraph(["x"], [])
    e = NormalForm.identity(g)
    assert str(e) == "" and len(e) == 0 and e.letters == ()
