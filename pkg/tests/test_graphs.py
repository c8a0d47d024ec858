"""Tests for app.services.refinement.graphs."""

import random
from fractions import Fraction

import networkx as nx
import pytest

from app.errors import GraphError
from app.services.refinement.graphs import (
    Graph,
    graph_equitable,
    graph_factor_check,
    load_graph,
    parse_graph,
    practional_iso,
)


def nx_graph(graph: nx.Graph) -> Graph:
    return Graph.from_edges(graph.number_of_nodes(), graph.edges)


def disjoint_union(*graphs: Graph) -> Graph:
    return nx_graph(nx.disjoint_union_all([graph.to_networkx() for graph in graphs]))


def cycle(n: int) -> Graph:
    return nx_graph(nx.cycle_graph(n))


def complete(n: int) -> Graph:
    return nx_graph(nx.complete_graph(n))


def path_graph(n: int) -> Graph:
    return nx_graph(nx.path_graph(n))


class TestGraph:
    def test_normalizes_edges(self):
        assert Graph.from_edges(3, [[1, 0], [2, 1]]).edges == frozenset({(0, 1), (1, 2)})

    def test_rejects_loops(self):
        with pytest.raises(GraphError, match="loop"):
            Graph.from_edges(2, [[1, 1]])

    def test_rejects_out_of_range_endpoint(self):
        with pytest.raises(GraphError, match="outside"):
            Graph.from_edges(2, [[0, 2]])

    def test_parse_rejects_repeated_edges(self):
        with pytest.raises(GraphError, match="repeated"):
            parse_graph({"n": 2, "edges": [[0, 1], [1, 0]]})

    def test_parse_reports_field(self):
        with pytest.raises(GraphError, match="n"):
            parse_graph({"n": 0, "edges": []})

    def test_load_graph(self, tmp_path):
        path = tmp_path / "p3.json"
        path.write_text('{"n": 3, "edges": [[0, 1], [1, 2]]}')
        assert load_graph(path) == path_graph(3)

    def test_to_networkx_keeps_isolated_vertices(self):
        graph = Graph.from_edges(4, [[0, 1]]).to_networkx()
        assert graph.number_of_nodes() == 4
        assert list(graph.edges) == [(0, 1)]

    def test_induced_subgraph(self):
        assert cycle(4).induced([0, 1, 2]).edges == frozenset({(0, 1), (1, 2)})


class TestGraphEquitable:
    def test_cycle_is_one_class(self):
        _, template = graph_equitable(cycle(4))
        assert template.p == (1,)
        assert template.D == ((2,),)

    def test_path_on_three_vertices(self):
        _, template = graph_equitable(path_graph(3))
        assert template.p == (Fraction(2, 3), Fraction(1, 3))
        assert template.D == ((0, 1), (2, 0))

    def test_star(self):
        _, template = graph_equitable(nx_graph(nx.star_graph(3)))
        assert template.p == (Fraction(3, 4), Fraction(1, 4))
        assert template.D == ((0, 1), (3, 0))


class TestPractionalIso:
    def test_cubic_graphs(self):
        assert practional_iso(complete(4), nx_graph(nx.complete_bipartite_graph(3, 3)))

    def test_two_regular_graphs(self):
        assert practional_iso(disjoint_union(cycle(6), cycle(4)), cycle(10))

    def test_path_vs_triangle(self):
        assert not practional_iso(path_graph(3), cycle(3))


class TestGraphFactorCheck:
    def test_two_regular_union(self):
        assert graph_factor_check(disjoint_union(cycle(6), cycle(4)), cycle(10))

    def test_unequal_class_fractions(self):
        assert not graph_factor_check(disjoint_union(complete(4), cycle(3)), disjoint_union(complete(4), complete(4)))

    def test_reflexive(self):
        graph = disjoint_union(path_graph(3), cycle(5))
        assert graph_factor_check(graph, graph)

    def test_matches_practional_iso_on_random_graphs(self):
        rng = random.Random(2718)
        for index in range(120):
            n = rng.randint(1, 12)
            g = nx_graph(nx.gnp_random_graph(n, rng.random(), seed=rng.randrange(10**6)))
            if index % 2:
                relabel = list(range(n))
                rng.shuffle(relabel)
                h = Graph(n, frozenset((relabel[a], relabel[b]) for a, b in g.edges))
            else:
                h = nx_graph(nx.gnp_random_graph(n, rng.random(), seed=rng.randrange(10**6)))
            assert graph_factor_check(g, h) == practional_iso(g, h)
