from collections import Counter

import pytest

from tdlc.graphs import FiniteGraph, QuotientMap, build_tree_ball
from tdlc.localstructure import (build_exhaustion, exhaustion_factors, local_action_discreteness,
                                 local_simple_content, md_lower_bound_lsc, md_lower_bound_prime,
                                 quotient_degree_check)
from tdlc.models import AutPlus, BMUniversal, DirectedTree, EndStab, FiniteOracle, FullAut
from tdlc.oracles import point_stabilizer_factors
from tdlc.perm import Alternating, Cyclic, PermGroup, dihedral, from_cycles, named_group


def cycle(n):
    return FiniteGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_exhaustion_shapes():
    assert build_exhaustion(build_tree_ball(3, 0)).pivots == ()
    e = build_exhaustion(FullAut(3).canonical_cayley_abels(2))
    assert e.pivots == (0, 1, 2, 3)
    assert [len(n) for n in e.new_vertices] == [3, 2, 2, 2]
    e5 = build_exhaustion(build_tree_ball(5, 1))
    assert len(e5.pivots) == 1 and len(e5.new_vertices[0]) == 5
    assert build_exhaustion(FullAut(3).canonical_cayley_abels(2), "reverse").pivots == (0, 3, 2, 1)
    with pytest.raises(ValueError):
        build_exhaustion(build_tree_ball(3, 1), "dfs")


def test_step_groups():
    m = FullAut(3)
    steps = exhaustion_factors(m, build_exhaustion(m.canonical_cayley_abels(2)))
    assert steps[0].group.order() == 6 and all(s.group.order() == 2 for s in steps[1:])
    m6 = FullAut(6)
    steps = exhaustion_factors(m6, build_exhaustion(m6.canonical_cayley_abels(2)), steps=3)
    assert all(s.factors == Counter({Alternating(5): 1, Cyclic(2): 1}) for s in steps[1:])
    c3 = BMUniversal(PermGroup.cyclic(3), "C3")
    steps = exhaustion_factors(c3, build_exhaustion(c3.canonical_cayley_abels(2)))
    assert steps[0].group.order() == 3 and all(s.group.order() == 1 for s in steps[1:])


def test_local_simple_content_examples():
    assert local_simple_content(FullAut(5)).stable_factors == {Cyclic(2), Cyclic(3)}
    assert local_simple_content(FullAut(6)).stable_factors == {Alternating(5), Cyclic(2)}
    assert local_simple_content(BMUniversal(named_group("S3"))).stable_factors == {Cyclic(2)}
    with pytest.raises(ValueError):
        local_simple_content(FullAut(3), depth=1)


def test_bounds():
    rep4, rep5, rep6 = (local_simple_content(FullAut(d)) for d in (4, 5, 6))
    assert md_lower_bound_lsc(rep4).value == 4
    assert md_lower_bound_lsc(rep5).value == 4
    assert md_lower_bound_prime(rep6).value == 6 and rep6.primes == {2, 3, 5}
    assert md_lower_bound_prime(rep5).value == 4
    empty = local_simple_content(BMUniversal(PermGroup.cyclic(3), "C3"))
    assert md_lower_bound_lsc(empty).value == 1
    assert md_lower_bound_prime(empty).value == 0


def test_discreteness():
    assert local_action_discreteness(PermGroup(3, [])) == "Regular"
    assert local_action_discreteness(PermGroup.cyclic(4)) == "FreeOnArcs"
    assert local_action_discreteness(PermGroup.symmetric(3)) == "Inconclusive"


def test_regular_local_action_means_trivial_stabilizer():
    rot = from_cycles(6, tuple(range(6)))
    m = FiniteOracle(PermGroup(6, [rot]), cycle(6))
    assert local_action_discreteness(m.local_action()) == "Regular"
    G = m.stabilizer_in_ball(2)
    ball = m.canonical_cayley_abels(2)
    assert all(G.orbit(v) == {v} for v in ball.interior())


def test_quotient_degree_examples():
    r6 = quotient_degree_check(cycle(6), QuotientMap.from_labels([i % 3 for i in range(6)]))
    assert (r6.degree_before, r6.degree_after, r6.witness) == (2, 2, None) and r6.equal
    r4 = quotient_degree_check(cycle(4), QuotientMap.from_labels([i % 2 for i in range(4)]))
    assert (r4.degree_before, r4.degree_after) == (2, 1) and r4.witness is not None
    u, v = r4.witness
    assert cycle(4).distances_from(u)[v] == 2
    same = quotient_degree_check(cycle(5), QuotientMap.from_labels(range(5)))
    assert same.equal and same.witness is None


TRANSITIVE = [("S3", PermGroup.symmetric(3)), ("C4", PermGroup.cyclic(4)), ("D4", dihedral(4)),
              ("A4", named_group("A4")), ("S4", PermGroup.symmetric(4)), ("C5", PermGroup.cyclic(5)),
              ("D5", dihedral(5)), ("AGL1_5", named_group("AGL1_5")), ("A5", PermGroup.alternating(5)),
              ("S5", PermGroup.symmetric(5)), ("C6", PermGroup.cyclic(6)), ("D6", dihedral(6)),
              ("A6", PermGroup.alternating(6)), ("S6", PermGroup.symmetric(6))]


@pytest.mark.parametrize("name,F", TRANSITIVE, ids=[t[0] for t in TRANSITIVE])
def test_uf_content_is_point_stabilizer_factors(name, F):
    rep = local_simple_content(BMUniversal(F, name), depth=3)
    assert set(rep.stable_factors) == set(point_stabilizer_factors(F.generators, F.degree))


@pytest.mark.parametrize("m,r", [(FullAut(3), 3), (FullAut(5), 2), (BMUniversal(named_group("A4")), 3),
                                 (EndStab(3, 3), 2), (AutPlus(3), 2), (DirectedTree.red_blue(2, 3), 2)],
                         ids=repr)
def test_jordan_holder_stability(m, r):
    unions = []
    for order in ("bfs", "reverse"):
        e = build_exhaustion(m.canonical_cayley_abels(r), order)
        total = Counter()
        for s in exhaustion_factors(m, e):
            total += s.factors
        unions.append(total)
    assert unions[0] == unions[1]


@pytest.mark.parametrize("m", [FullAut(3), FullAut(6), EndStab(3, 3), EndStab(4, 3), AutPlus(3),
                               BMUniversal(named_group("S5")), DirectedTree.red_blue(2, 3)], ids=repr)
def test_local_bounds_are_sound(m):
    rep = local_simple_content(m)
    assert md_lower_bound_lsc(rep).value <= m.degree
    assert md_lower_bound_prime(rep).value <= m.degree
