import pytest
from hypothesis import given, settings, strategies as st

from tdlc.graphs import (BallGraph, FiniteDigraph, FiniteGraph, GraphError, QuotientMap,
                         barycentric_subdivision, build_tree_ball, cartesian_product_digraph,
                         enumerate_s_arcs, graph_from_json, graph_to_json, line_graph, quotient_graph)


def cycle(n):
    return FiniteGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_tree_ball_counts():
    assert build_tree_ball((3, 3), 2).n == 10
    assert build_tree_ball((3, 2), 2, root_side=0).n == 7
    star = build_tree_ball((5, 5), 1)
    assert star.n == 6 and star.graph.degree(star.root) == 5
    assert build_tree_ball(4, 0).n == 1


def test_tree_ball_rejects_bad_input():
    with pytest.raises(GraphError):
        build_tree_ball((0, 3), 2)
    with pytest.raises(GraphError):
        build_tree_ball(3, -1)


def test_graph_validation():
    with pytest.raises(GraphError):
        FiniteGraph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        FiniteGraph.from_edges(2, [(0, 2)])
    with pytest.raises(GraphError):
        FiniteDigraph.from_arcs(2, [(1, 1)])


def test_line_graph():
    path = FiniteGraph.from_edges(3, [(0, 1), (1, 2)])
    lg = line_graph(path)
    assert lg.n == 2 and lg.edges == frozenset({(0, 1)})
    for d in (3, 4, 5):
        ball = build_tree_ball(d, 3)
        g = ball.graph
        lg = line_graph(g)
        edges = sorted(g.edges)
        interior = [i for i, (u, v) in enumerate(edges) if ball.is_interior(u) and ball.is_interior(v)]
        assert interior and all(lg.degree(i) == 2 * d - 2 for i in interior)


def test_line_graph_biregular():
    ball = build_tree_ball((3, 4), 3)
    g = ball.graph
    lg = line_graph(g)
    root_edges = [i for i, e in enumerate(sorted(g.edges)) if ball.root in e]
    assert all(lg.degree(i) == 3 + 4 - 2 for i in root_edges)


def test_cartesian_product():
    arc = FiniteDigraph.from_arcs(2, [(0, 1)])
    one = cartesian_product_digraph([arc])
    assert one.arcs == arc.arcs
    sq = cartesian_product_digraph([arc, arc])
    assert sq.n == 4 and len(sq.arcs) == 4
    # out-2 and out-3 directed stars: the root gets out-degree 5 in two colour classes
    s2 = FiniteDigraph.from_arcs(3, [(0, 1), (0, 2)])
    s3 = FiniteDigraph.from_arcs(4, [(0, 1), (0, 2), (0, 3)])
    p = cartesian_product_digraph([s2, s3])
    assert len(p.out_neighbours(0)) == 5
    assert sorted(set(p.colours.values())) == [0, 1]


def test_quotients():
    c6 = cycle(6)
    q = QuotientMap.from_labels([i % 3 for i in range(6)])
    tri = quotient_graph(c6, q)
    assert tri.n == 3 and len(tri.edges) == 3
    c4 = cycle(4)
    q4 = QuotientMap.from_labels([i % 2 for i in range(4)])
    assert len(quotient_graph(c4, q4).edges) == 1
    ident = QuotientMap.from_labels(range(6))
    assert quotient_graph(c6, ident).edges == c6.edges


def test_quotient_map_validation():
    with pytest.raises(GraphError):
        QuotientMap(3, ((0, 1),))
    with pytest.raises(GraphError):
        quotient_graph(cycle(4), QuotientMap.from_labels([0, 0, 1]))


def test_dropped_loops():
    c4 = cycle(4)
    q = QuotientMap.from_labels([0, 0, 1, 1])
    assert q.dropped_loops(c4) == [0, 1]


def test_s_arcs():
    ball = build_tree_ball(3, 2)
    assert len(enumerate_s_arcs(ball.graph, 0)) == ball.n
    assert len(enumerate_s_arcs(ball.graph, 2, ball.root)) == 6
    from tdlc.models import DirectedTree
    g = DirectedTree.out_in(3, 2).descendants(4)[0].graph
    for s in range(5):
        assert len(enumerate_s_arcs(g, s, 0)) == 3 ** s
    with pytest.raises(GraphError):
        enumerate_s_arcs(ball.graph, -1)


def test_subdivision():
    g, mid = barycentric_subdivision(cycle(3))
    assert g.n == 6 and len(g.edges) == 6 and set(mid) == {(0, 1), (1, 2), (0, 2)}


def test_json_round_trip():
    ball = build_tree_ball(3, 2)
    assert graph_from_json(graph_to_json(ball)) == ball
    dg = FiniteDigraph.from_arcs(3, [(0, 1), (1, 2)], [(0, "a"), (1, "b")])
    back = graph_from_json(graph_to_json(dg))
    assert back == dg and back.colour(0, 1) == (0, "a")
    assert graph_from_json(graph_to_json(cycle(5))) == cycle(5)


def test_bipartition_and_distances():
    assert cycle(6).bipartition() is not None
    assert cycle(5).bipartition() is None
    g = FiniteGraph.from_edges(4, [(0, 1), (2, 3)])
    assert not g.is_connected() and g.distances_from(0)[2] is None


def test_ball_dist_checked():
    g = FiniteGraph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(GraphError):
        BallGraph(g, 0, 1).dist


# -- properties -----------------------------------------------------------------

@given(st.integers(2, 5), st.integers(2, 5), st.integers(1, 4), st.integers(0, 1))
@settings(max_examples=40, deadline=None)
def test_layer_recursion(d0, d1, r, side):
    ball = build_tree_ball((d0, d1), r, side)
    sizes = [len(ball.layer(k)) for k in range(r + 1)]
    degs = [(d0, d1)[(side + k) % 2] for k in range(r + 1)]
    assert sizes[0] == 1 and (r == 0 or sizes[1] == degs[0])
    for k in range(1, r):
        assert sizes[k + 1] == sizes[k] * (degs[k] - 1)


@st.composite
def circulants(draw):
    n = draw(st.integers(4, 24))
    S = draw(st.sets(st.integers(1, n // 2), min_size=1, max_size=3))
    k = draw(st.sampled_from([k for k in range(1, n + 1) if n % k == 0]))
    edges = {tuple(sorted((i, (i + s) % n))) for i in range(n) for s in S if (i + s) % n != i}
    return FiniteGraph.from_edges(n, sorted(edges)), QuotientMap.from_labels([i % k for i in range(n)])


@given(circulants())
@settings(max_examples=80, deadline=None)
def test_quotient_never_raises_degree(gq):
    g, q = gq
    qg = quotient_graph(g, q)
    for v in range(g.n):
        assert qg.degree(q.class_of[v]) <= g.degree(v)


@given(st.integers(2, 4), st.integers(0, 3))
@settings(max_examples=20, deadline=None)
def test_s_arc_extension(d, s):
    g = build_tree_ball(d, 4).graph
    shorter = enumerate_s_arcs(g, s, 0)
    longer = enumerate_s_arcs(g, s + 1, 0)
    ext = [w + (x,) for w in shorter for x in g.neighbours(w[-1]) if len(w) < 2 or x != w[-2]]
    assert sorted(ext) == sorted(longer)
