import pytest

from tdlc.lattice import PositiveRational
from tdlc.models import DirectedProduct, DirectedTree, FullAut
from tdlc.propertyz import (ZMorphism, ZMorphismError, arc_fibre_transitivity_check, build_red_blue_tree_ball,
                            verify_z_morphism, z_morphism)


def test_red_blue_ball_shapes():
    b = build_red_blue_tree_ball(2, 3, 1, descendants_only=True)
    g = b.graph
    assert len(g.out_neighbours(b.root)) == 5
    colours = sorted(g.colour(b.root, v) for v in g.out_neighbours(b.root))
    assert colours == ["blue"] * 3 + ["red"] * 2
    line = build_red_blue_tree_ball(1, 1, 3)
    assert all(len(line.graph.out_neighbours(v)) == 2 for v in line.interior())
    full = build_red_blue_tree_ball(2, 3, 2)
    assert all(full.undirected.degree(v) == 2 + 3 + 2 for v in full.interior())
    with pytest.raises(ValueError):
        build_red_blue_tree_ball(0, 1, 2)


def test_red_blue_morphism():
    m = DirectedTree.red_blue(2, 3)
    zm = z_morphism(m, r=3)
    assert zm.target_rank == 2
    assert zm.keys == (("out", "red"), ("out", "blue"))
    assert zm.basis == (PositiveRational(2), PositiveRational(3))
    ball = m.canonical_cayley_abels(3)
    g = ball.graph
    for u, v in g.arcs:
        step = tuple(b - a for a, b in zip(zm.values[u], zm.values[v]))
        assert step == ((1, 0) if g.colour(u, v) == "red" else (0, 1))


def test_checks_and_growth():
    m = DirectedTree.red_blue(2, 3)
    fib = []
    for r in (2, 3, 4):
        ball = m.canonical_cayley_abels(r)
        chk = verify_z_morphism(z_morphism(m, ball), ball)
        assert chk.is_morphism and chk.collapse_is_property_z and chk.bipartite
        fib.append(chk.base_fibre)
    assert fib[0] < fib[2]


def test_product_coordinates():
    m = DirectedProduct([DirectedTree.out_in(2, 1), DirectedTree.out_in(3, 1)])
    ball = m.canonical_cayley_abels(3)
    zm = z_morphism(m, ball)
    assert zm.keys == ((0, ("out", "arc")), (1, ("out", "arc")))
    assert verify_z_morphism(zm, ball).is_morphism
    # each coordinate is the height in one factor
    for v, x in zm.values.items():
        a, b = ball.labels[v]
        h = [sum(1 if t[0] == "out" else -1 for t, _ in w) for w in (a, b)]
        assert list(x) == h


def test_unimodular_is_rejected():
    with pytest.raises(ZMorphismError):
        z_morphism(DirectedTree.out_in(2, 2), r=2)
    with pytest.raises(ZMorphismError):
        z_morphism(FullAut(3), r=2)
    with pytest.raises(ZMorphismError):
        z_morphism(DirectedTree.red_blue(2, 4), r=2)     # labels 2 and 4 are dependent


def test_line_and_corrupted_maps():
    m = DirectedTree.out_in(1, 1)
    ball = m.canonical_cayley_abels(4)
    values = {v: (sum(1 if t[0] == "out" else -1 for t, _ in ball.labels[v]),) for v in range(ball.n)}
    zm = ZMorphism(1, (("out", "arc"),), (PositiveRational(1),), values, ball.root)
    chk = verify_z_morphism(zm, ball)
    assert chk.is_morphism and set(chk.fibre_sizes.values()) == {1}
    rb = DirectedTree.red_blue(2, 3)
    rball = rb.canonical_cayley_abels(2)
    good = z_morphism(rb, rball)
    bad_values = dict(good.values)
    victim = rball.layer(1)[0]
    bad_values[victim] = (5, 5)
    chk = verify_z_morphism(ZMorphism(2, good.keys, good.basis, bad_values, good.base), rball)
    assert not chk.is_morphism and victim in chk.bad_arc


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4), (4, 5), (3, 5)])
def test_collapse_equals_signed_height(p, q):
    m = DirectedTree.red_blue(p, q)
    ball = m.canonical_cayley_abels(3)
    zm = z_morphism(m, ball)
    for v, x in zm.values.items():
        height = sum(1 if t[0] == "out" else -1 for t, _ in ball.labels[v])
        assert sum(x) == height


def test_arc_fibres():
    rep = arc_fibre_transitivity_check(DirectedTree.out_in(3, 2), 3)
    assert rep.coprime and [(f.arcs, f.orbits) for f in rep.fibres] == [(27, 1)]
    rb = arc_fibre_transitivity_check(DirectedTree.red_blue(2, 3), 2)
    by_word = {f.word: (f.arcs, f.orbits) for f in rb.fibres}
    assert by_word[("red", "blue")] == (6, 1)
    ctrl = arc_fibre_transitivity_check(DirectedTree.out_in(2, 2), 3)
    assert not ctrl.coprime and ctrl.fibres[0].arcs == 8
    with pytest.raises(ValueError):
        arc_fibre_transitivity_check(DirectedTree.out_in(3, 2), -1)


@pytest.mark.parametrize("p,q", [(3, 2), (5, 2), (4, 3), (2, 1), (5, 3), (3, 1)])
def test_coprime_fibres_are_single_orbits(p, q):
    m = DirectedTree.out_in(p, q)
    for s in range(1, 5):
        rep = arc_fibre_transitivity_check(m, s)
        assert rep.transitive and rep.fibres[0].arcs == p ** s
