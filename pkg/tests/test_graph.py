import random

from conftest import matrices, shuffled
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from facetlab import (
    GraphClass,
    IncidenceMatrix,
    circulant,
    classify_graph,
    column_graph,
    facet_subgraph,
    is_two_connected,
    vertex_graph,
    vertex_set_closure,
)
from facetlab.graph import _from_edges, is_connected
from facetlab.generators import cone, polygon, product, segment, simplex


def graph_of(A):
    return vertex_graph(vertex_set_closure(A))


def test_square_is_four_cycle():
    G = graph_of(circulant(4, 2))
    assert G.edges() == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert classify_graph(G) == GraphClass.CYCLE


def test_simplex_graph_is_complete():
    G = graph_of(circulant(4, 3))
    assert G.edge_count() == 6
    assert classify_graph(G) == GraphClass.COMPLETE


def test_cone_single_node():
    G = graph_of(cone(4).matrix)
    assert G.nodes == (0,) and G.edge_count() == 0
    assert classify_graph(G) == GraphClass.PATH


def test_segment_edge():
    assert graph_of(segment().matrix).edges() == [(0, 1)]


def test_fig1_graph(fig1):
    G = graph_of(fig1)
    assert G.edges() == [(0, 1), (0, 3), (1, 2), (2, 3)]
    F = vertex_set_closure(fig1)
    assert classify_graph(facet_subgraph(F, G, fig1.rows[0])) == GraphClass.CYCLE
    side = facet_subgraph(F, G, {0, 1})
    assert side.nodes == (0, 1) and classify_graph(side) == GraphClass.PATH


def test_cube_facets_are_four_cycles():
    Q = product(segment(), polygon(4))
    F = Q.family
    G = vertex_graph(F)
    assert G.edge_count() == 12
    assert all(classify_graph(facet_subgraph(F, G, R)) == GraphClass.CYCLE for R in Q.matrix.rows)


def test_classify_small_graphs():
    assert classify_graph(_from_edges(range(3), [(0, 1), (1, 2), (0, 2)])) == GraphClass.COMPLETE
    assert classify_graph(_from_edges(range(1), [])) == GraphClass.PATH
    assert classify_graph(_from_edges(range(2), [(0, 1)])) == GraphClass.PATH
    assert classify_graph(_from_edges(range(2), [])) == GraphClass.OTHER
    assert classify_graph(_from_edges(range(4), [(0, 1), (1, 2), (2, 3)])) == GraphClass.PATH
    star = _from_edges(range(4), [(0, 1), (0, 2), (0, 3)])
    assert classify_graph(star) == GraphClass.OTHER
    two_triangles = _from_edges(range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert classify_graph(two_triangles) == GraphClass.OTHER


def test_column_graph_examples(fig1):
    G, d = column_graph(circulant(7, 3))
    assert d == 3 and classify_graph(G) == GraphClass.CYCLE
    G, d = column_graph(circulant(5, 4))
    assert d == 4 and classify_graph(G) == GraphClass.COMPLETE
    assert column_graph(fig1) is None
    assert column_graph(polygon(3).matrix) is not None


def test_is_two_connected():
    assert is_two_connected(graph_of(polygon(6).matrix))
    assert is_two_connected(graph_of(simplex(4).matrix))
    assert not is_two_connected(_from_edges(range(4), [(0, 1), (1, 2), (2, 3)]))
    assert not is_two_connected(_from_edges(range(2), [(0, 1)]))
    bowtie = _from_edges(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert not is_two_connected(bowtie)


def test_dot_and_lists(fig1):
    G = graph_of(fig1)
    dot = G.to_dot(one_indexed=True)
    assert dot.splitlines()[0] == "graph G {" and "  1 -- 2;" in dot
    assert G.adjacency_lists() == {0: [1, 3], 1: [0, 2], 2: [1, 3], 3: [0, 2]}


@st.composite
def constant_sum_square(draw):
    # M(n, d) under random 2x2 switches, which keep every line sum, then shuffled
    n = draw(st.integers(3, 9))
    d = draw(st.integers(1, n))
    rng = random.Random(draw(st.integers(0, 10**6)))
    bits = circulant(n, d).bits.copy()
    for _ in range(draw(st.integers(0, 30))):
        r1, r2 = rng.sample(range(n), 2)
        c1, c2 = rng.sample(range(n), 2)
        if bits[r1, c1] and bits[r2, c2] and not bits[r1, c2] and not bits[r2, c1]:
            bits[r1, c1] = bits[r2, c2] = False
            bits[r1, c2] = bits[r2, c1] = True
    B, _, _ = shuffled(IncidenceMatrix.from_bits(bits), rng)
    return B


@settings(max_examples=300)
@given(constant_sum_square())
def test_connected_column_graph_is_cycle_or_complete(A):
    G, d = column_graph(A)
    assume(is_connected(G))
    assert classify_graph(G) in (GraphClass.CYCLE, GraphClass.COMPLETE)


def test_shuffled_circulant_column_graphs(rng):
    for n, d in [(6, 2), (8, 3), (9, 4), (5, 4), (7, 1)]:
        B, _, _ = shuffled(circulant(n, d), rng)
        G, dd = column_graph(B)
        assert dd == d and is_connected(G)
        expected = GraphClass.COMPLETE if d in (1, n - 1) else GraphClass.CYCLE
        assert classify_graph(G) == expected


@given(matrices(max_n=7, max_m=7))
def test_vertex_graph_edges_are_members(A):
    F = vertex_set_closure(A)
    G = vertex_graph(F)
    for v, w in G.edges():
        assert A.n == 2 or frozenset({v, w}) in F
