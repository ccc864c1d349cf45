import json

import networkx as nx
import pytest
from hypothesis import given, settings

from racg.families import omega
from racg.graph import (DefiningGraph, GraphError, contained_in_join, contained_in_star, distance_table,
                        four_cycle_graph, four_cycle_graph_to_dot, graph_distance, graph_to_dot,
                        induced_four_cycles, is_cfs, is_connected, is_induced_four_cycle, is_join,
                        join_decomposition, load_graph, rank_of_pair)

import oracles
from strategies import graph_and_subset, graphs


def _nx(g):
    return oracles.nx_graph(g.vertices, g.edges)


class TestConstruction:
    def test_basic_attributes(self, square):
        assert square.vertices == ("a", "b", "c", "d")
        assert len(square) == 4
        assert square.adjacent("a", "b") and not square.adjacent("a", "c")
        assert square.link("a") == {"b", "d"}
        assert square.star("a") == {"a", "b", "d"}

    @pytest.mark.parametrize("vertices, edges, message", [
        (["a", "a"], [], "duplicate"),
        (["a"], [("a", "a")], "loop"),
        (["a", "b"], [("a", "z")], "unknown"),
        ([], [], "empty"),
    ])
    def test_rejects_malformed(self, vertices, edges, message):
        with pytest.raises(GraphError, match=message):
            DefiningGraph(vertices, edges)

    def test_unknown_vertex_lookup(self, square):
        with pytest.raises(GraphError):
            square.index("z")

    def test_load_graph_forms(self):
        doc = {"vertices": ["x", "y", "z"], "edges": [["x", "y"]]}
        a = load_graph(doc)
        b = load_graph(json.dumps(doc))
        c = load_graph({"graph": doc})
        assert a.edges == b.edges == c.edges == (("x", "y"),)
        assert load_graph(a.to_document()).edges == a.edges

    def test_induced(self, square):
        sub = square.induced(["a", "b", "c"])
        assert sub.vertices == ("a", "b", "c")
        assert set(sub.edges) == {("a", "b"), ("b", "c")}


class TestDistances:
    def test_pentagon(self, pentagon):
        assert graph_distance(pentagon, "a", "c") == 2
        assert graph_distance(pentagon, "a", "a") == 0

    def test_disconnected_is_infinite(self):
        g = DefiningGraph(["a", "b"], [])
        assert graph_distance(g, "a", "b") == float("inf")
        assert not is_connected(g)

    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_distance_table_matches_networkx(self, g):
        table = distance_table(g)
        lengths = dict(nx.all_pairs_shortest_path_length(_nx(g)))
        for i, u in enumerate(g.vertices):
            for j, v in enumerate(g.vertices):
                assert table[i][j] == lengths[u].get(v, float("inf"))
        assert is_connected(g) == nx.is_connected(_nx(g))


class TestJoins:
    def test_square_is_join(self, square):
        assert is_join(square)
        assert set(join_decomposition(square, "abcd")) == {frozenset("ac"), frozenset("bd")}

    def test_pentagon_is_not_join(self, pentagon):
        assert not is_join(pentagon)
        ok, wit = contained_in_join(pentagon, "ac")
        assert ok and wit.cone == "b"
        assert contained_in_join(pentagon, "acd")[0] is False
        assert contained_in_star(pentagon, "ac") == (True, "b")
        assert contained_in_star(pentagon, "abd") == (False, None)

    @settings(max_examples=120, deadline=None)
    @given(graph_and_subset())
    def test_contained_in_join_matches_brute_force(self, gs):
        g, A = gs
        assert contained_in_join(g, A)[0] == oracles.brute_in_join(_nx(g), A)

    @settings(max_examples=120, deadline=None)
    @given(graph_and_subset())
    def test_join_witness_verifies(self, gs):
        g, A = gs
        ok, wit = contained_in_join(g, A)
        if not ok:
            return
        if wit.cone is not None:
            assert wit.cone not in A and A <= g.link(wit.cone)
        else:
            left, right = (frozenset(x) for x in wit.split)
            assert left and right and left | right == A
            assert all(g.adjacent(u, v) for u in left for v in right)

    @settings(max_examples=120, deadline=None)
    @given(graph_and_subset())
    def test_contained_in_star_matches_brute_force(self, gs):
        g, A = gs
        ok, v = contained_in_star(g, A)
        assert ok == oracles.brute_in_star(_nx(g), A)
        if ok:
            assert A <= g.star(v)


class TestFourCycles:
    @settings(max_examples=80, deadline=None)
    @given(graphs(max_n=7))
    def test_enumeration_matches_brute_force(self, g):
        found = {frozenset().union(*c) for c in induced_four_cycles(g)}
        assert found == oracles.brute_four_cycles(_nx(g))
        for verts in found:
            assert is_induced_four_cycle(g, verts)

    def test_square(self, square):
        fcg = four_cycle_graph(square)
        assert len(fcg.nodes) == 1 and fcg.supports == (frozenset("abcd"),)
        assert is_cfs(square)
        dot = four_cycle_graph_to_dot(square, fcg)
        assert 'label="a c | b d"' in dot and "component=0" in dot

    def test_shared_diagonal_links_cycles(self):
        # two squares a-x-b-y and a-x-b-z share the diagonal {a, b}
        g = DefiningGraph(["a", "b", "x", "y", "z"],
                          [("a", "x"), ("x", "b"), ("b", "y"), ("y", "a"), ("b", "z"), ("z", "a")])
        fcg = four_cycle_graph(g)
        assert len(fcg.nodes) == 3
        assert len(fcg.components) == 1
        assert is_cfs(g)

    def test_omega_is_not_cfs(self):
        g = omega(3)
        fcg = four_cycle_graph(g)
        assert not is_cfs(g)
        assert not any({"a_3", "b_3"} & s for s in fcg.supports)


class TestRank:
    def test_square_pair_has_rank_zero(self, square):
        # the common link {b, d} is a non-adjacent pair, and b, d have links {a, c}
        assert rank_of_pair(square, "a", "c").rank == 0

    def test_hyperbolic_pairs_reach_the_cap(self, pentagon):
        r = rank_of_pair(pentagon, "a", "c")
        assert r.at_cap and str(r) == ">=5"
        wide = rank_of_pair(pentagon, "a", "c", cap=10)
        assert (wide.rank, wide.at_cap) == (10, True)

    def test_pentagon_has_no_four_cycles(self, pentagon):
        assert four_cycle_graph(pentagon).nodes == () and not is_cfs(pentagon)
        assert join_decomposition(pentagon, "abcde") is None

    def test_adjacent_pair_rejected(self, square):
        with pytest.raises(GraphError):
            rank_of_pair(square, "a", "b")

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_omega_pairs_have_rank_exactly_m_minus_one(self, d):
        g = omega(d)
        for m in range(3, d + 1):
            for s, t in ((f"a_{m}", f"b_{m}"), (f"a_{m}", "c"), (f"b_{m}", "c")):
                r = rank_of_pair(g, s, t, cap=d + 2)
                assert (r.rank, r.at_cap) == (m - 1, False)


def test_graph_dot(square):
    dot = graph_to_dot(square)
    assert dot.startswith("graph Gamma {")
    assert '"a" -- "b";' in dot and '"a" -- "c"' not in dot
