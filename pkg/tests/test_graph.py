from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from supersat.catalog import (
    by_name, canonical_form, canonical_graph6, clique_minus_edge, complete, cycle, fig2, is_isomorphic, kst_plus,
    turan_edges, turan_graph,
)
from supersat.graph import Graph, GraphFormatError, encode_graph, parse_edge_list, parse_graph, parse_graph6, to_graph6

from oracles import to_nx


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, b in zip(pairs, mask) if b])


def test_edge_list_roundtrip_keeps_isolated_vertices():
    g = Graph(5, [(0, 1), (2, 3)])
    assert parse_edge_list(encode_graph(g)) == g


def test_edge_list_without_header_infers_n():
    assert parse_edge_list("0 1\n1 2\n").n == 3


@pytest.mark.parametrize("text, line", [
    ("0 1\n1 1\n", 2),
    ("0 1\n1 0\n", 2),
    ("3\n0 5\n", 2),
    ("0 x\n", 1),
    ("0 1 2\n", 1),
    ("-1 2\n", 1),
])
def test_edge_list_errors_carry_line_numbers(text, line):
    with pytest.raises(GraphFormatError) as exc:
        parse_edge_list(text)
    assert exc.value.line == line


def test_comments_and_blank_lines_ignored():
    g = parse_edge_list("# triangle\n3\n\n0 1  # first\n1 2\n0 2\n")
    assert g == complete(3)


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=12))
def test_graph6_matches_networkx(g):
    assert to_graph6(g) == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert parse_graph6(to_graph6(g)) == g


@pytest.mark.parametrize("n", [62, 63, 64, 100])
def test_graph6_long_size_field(n):
    g = Graph(n, [(i, i + 1) for i in range(n - 1)])
    code = to_graph6(g)
    assert code == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert parse_graph6(code) == g


@pytest.mark.parametrize("bad", ["", "A_?", "B~~", "Bw!"])
def test_graph6_rejects_malformed(bad):
    with pytest.raises(GraphFormatError):
        parse_graph6(bad)


def test_graph6_header_accepted():
    assert parse_graph6(">>graph6<<Bw") == complete(3)


def test_parse_graph_dispatch():
    assert parse_graph("Bw", "graph6") == complete(3)
    with pytest.raises(ValueError):
        parse_graph("", "sparse6")


def test_graph_rejects_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=8), st.randoms(use_true_random=False))
def test_canonical_form_is_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert canonical_graph6(g) == canonical_graph6(h)
    assert nx.is_isomorphic(to_nx(canonical_form(g)), to_nx(g))


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=7), graphs(max_n=7))
def test_isomorphism_agrees_with_networkx(g, h):
    assert is_isomorphic(g, h) == nx.is_isomorphic(to_nx(g), to_nx(h))


def test_catalog_names():
    assert by_name("K_4-e") == clique_minus_edge(2)
    assert by_name("K4−e") == clique_minus_edge(2)
    assert by_name("K_{3,4}^+") == kst_plus(3, 4)
    assert by_name("C5") == cycle(5)
    assert by_name("K3") == complete(3)
    assert by_name("fig2") == fig2()
    with pytest.raises(KeyError):
        by_name("dodecahedron")


def test_catalog_shapes():
    assert kst_plus(3, 4).m == 13 and kst_plus(3, 4).adj(0, 1)
    assert clique_minus_edge(3).m == 9 and not clique_minus_edge(3).adj(0, 1)
    assert fig2().m == 11


@pytest.mark.parametrize("n, r", [(5, 2), (6, 2), (7, 3), (8, 3), (9, 4)])
def test_turan_graph_matches_networkx(n, r):
    g = turan_graph(n, r)
    assert g.m == turan_edges(n, r) == nx.turan_graph(n, r).number_of_edges()
    assert nx.is_isomorphic(to_nx(g), nx.turan_graph(n, r))
