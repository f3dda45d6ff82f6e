from __future__ import annotations

import pytest
from hypothesis import given, settings

from supersat.catalog import clique_minus_edge, complete, cycle, fig2, kst_plus, petersen
from supersat.coloring import (
    NotColorCritical, SizeLimitExceeded, automorphism_count, chromatic_number, criticality, is_colorable,
    is_pair_free, proper_colorings,
)
from supersat.graph import Graph

from oracles import automorphisms, chromatic_number as chromatic_reference, chromatic_polynomial_value
from test_graph import graphs


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=7))
def test_chromatic_number_matches_deletion_contraction(g):
    if g.n == 0:
        return
    assert chromatic_number(g) == chromatic_reference(g)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=6))
def test_coloring_count_is_chromatic_polynomial(g):
    for k in (1, 2, 3):
        assert len(proper_colorings(g, k)) == chromatic_polynomial_value(g, k)


def test_pins_restrict_colorings():
    tri = complete(3)
    cols = proper_colorings(tri, 3, {0: 2})
    assert len(cols) == 2 and all(c[0] == 2 for c in cols)
    assert proper_colorings(tri, 3, {0: 4}) == []
    assert not is_colorable(tri, 3, {0: 1, 1: 1})


@pytest.mark.parametrize("g, want", [
    (complete(3), 6), (complete(5), 120), (cycle(5), 10), (petersen(), 120),
    (clique_minus_edge(2), 4), (kst_plus(3, 4), 48), (fig2(), 12),
])
def test_automorphism_counts(g, want):
    assert automorphism_count(g) == want == automorphisms(g)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7))
def test_automorphisms_match_networkx(g):
    assert automorphism_count(g) == automorphisms(g)


@pytest.mark.parametrize("g, r, n_crit", [
    (complete(4), 3, 6), (cycle(7), 2, 7), (clique_minus_edge(3), 3, 3), (kst_plus(2, 3), 2, 1), (fig2(), 2, 1),
])
def test_criticality(g, r, n_crit):
    cs = criticality(g)
    assert cs.r == r
    assert len(cs.critical_edges) == n_crit
    for e in cs.critical_edges:
        assert is_colorable(g.without_edges(e), r)


@pytest.mark.parametrize("g", [cycle(6), petersen(), Graph(3)])
def test_not_color_critical(g):
    with pytest.raises(NotColorCritical):
        criticality(g)


def test_pattern_size_limit():
    with pytest.raises(SizeLimitExceeded):
        criticality(cycle(11))


def test_pair_freeness():
    assert is_pair_free(kst_plus(3, 4), criticality(kst_plus(3, 4)))[0]
    assert is_pair_free(cycle(5), criticality(cycle(5)))[0]
    free, wit = is_pair_free(fig2(), criticality(fig2()))
    assert not free
    e1, e2 = wit.edges
    assert not set(e1) & set(e2)  # the two edges are disjoint
    col = wit.coloring
    assert all(col[v] == 1 for v in (*e1, *e2))
    rest = fig2().without_edges(e1, e2)
    assert all(col[a] != col[b] for a, b in rest.edges)
