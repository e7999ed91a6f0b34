import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from tdlc.oracles import brute_composition_factors, closure
from tdlc.perm import (Alternating, Cyclic, Other, OrderBoundExceeded, PermGroup, PermGroupError,
                       composition_factors, conjugate, coset_graph, derived_subgroup, dihedral,
                       from_cycles, group_from_json, group_to_json, identity, induced_action, inv,
                       min_symmetric_subquotient_degree, mul, named_group, normal_closure, orbit,
                       point_stabilizer, quotient_group)


def test_mul_is_left_to_right():
    a = from_cycles(3, (0, 1))
    b = from_cycles(3, (1, 2))
    # 0 -a-> 1 -b-> 2
    assert mul(a, b)[0] == 2
    assert mul(a, inv(a)) == identity(3)


def test_orbits():
    assert orbit(PermGroup(3, []), 1) == {1}
    assert orbit(PermGroup(3, [from_cycles(3, (0, 1, 2))]), 0) == {0, 1, 2}
    assert orbit(PermGroup.symmetric(4), 2) == {0, 1, 2, 3}


def test_stabilizers():
    assert point_stabilizer(PermGroup.symmetric(3), 0).order() == 2
    assert point_stabilizer(PermGroup.cyclic(5), 0).order() == 1
    assert point_stabilizer(PermGroup.symmetric(4), 0).order() == 6


def test_orders():
    assert PermGroup(4, []).order() == 1
    assert PermGroup.symmetric(5).order() == 120
    assert PermGroup(4, [from_cycles(4, (0, 1)), from_cycles(4, (2, 3))]).order() == 4
    for n in range(1, 9):
        assert PermGroup.symmetric(n).order() == math.factorial(n)
        if n >= 2:
            assert PermGroup.alternating(n).order() == math.factorial(n) // 2


def test_induced_action():
    G = PermGroup(4, [from_cycles(4, (0, 1), (2, 3))])
    img, faithful = induced_action(G, [0, 1])
    assert img.order() == 2 and faithful
    img, faithful = induced_action(PermGroup(4, [from_cycles(4, (2, 3))]), [0, 1])
    assert img.order() == 1 and not faithful
    S4 = PermGroup.symmetric(4)
    img, faithful = induced_action(S4, range(4))
    assert img.order() == 24 and faithful


def test_normal_closure():
    S3, S4 = PermGroup.symmetric(3), PermGroup.symmetric(4)
    assert normal_closure(S3, [identity(3)]).order() == 1
    assert normal_closure(S3, [from_cycles(3, (0, 1, 2))]).order() == 3
    assert normal_closure(S4, [from_cycles(4, (1, 2, 3))]).same_group(PermGroup.alternating(4))


def test_derived_and_quotient():
    S4 = PermGroup.symmetric(4)
    assert derived_subgroup(S4).order() == 12
    Q = quotient_group(S4, PermGroup.alternating(4))
    assert Q.order() == 2


def test_composition_factors_examples():
    assert composition_factors(PermGroup.symmetric(4)) == Counter({Cyclic(2): 3, Cyclic(3): 1})
    assert composition_factors(PermGroup.symmetric(5)) == Counter({Alternating(5): 1, Cyclic(2): 1})
    assert composition_factors(PermGroup(3, [])) == Counter()
    assert composition_factors(PermGroup.alternating(6)) == Counter({Alternating(6): 1})
    assert composition_factors(PermGroup.symmetric(8)) == Counter({Alternating(8): 1, Cyclic(2): 1})


def test_order_bound():
    with pytest.raises(OrderBoundExceeded):
        composition_factors(PermGroup.symmetric(5), order_bound=10)


def test_min_symmetric_degree():
    assert min_symmetric_subquotient_degree(Cyclic(2)) == 2
    assert min_symmetric_subquotient_degree(Alternating(5)) == 5
    assert min_symmetric_subquotient_degree(Cyclic(7)) == 7
    with pytest.raises(PermGroupError):
        min_symmetric_subquotient_degree(Other(168))


def test_simple_id_validation():
    with pytest.raises(PermGroupError):
        Cyclic(4)
    with pytest.raises(PermGroupError):
        Alternating(4)
    assert str(Alternating(5)) == "A5" and Alternating(5).order == 60


def test_coset_graphs():
    S3 = PermGroup.symmetric(3)
    U = PermGroup(3, [from_cycles(3, (0, 1))])
    g, act = coset_graph(S3, U, [from_cycles(3, (0, 1, 2))])
    assert g.n == 3 and len(g.edges) == 3
    g, _ = coset_graph(S3, S3, [])
    assert g.n == 1 and not g.edges
    C4 = PermGroup.cyclic(4)
    g, _ = coset_graph(C4, PermGroup(4, []), [C4.generators[0]])
    assert g.n == 4 and all(g.degree(v) == 2 for v in range(4)) and g.is_connected()


def test_named_groups_and_json():
    assert named_group("AGL1_5").order() == 20
    assert dihedral(5).order() == 10
    assert named_group("C3").order() == 3
    with pytest.raises(PermGroupError):
        named_group("X7")
    G = named_group("S5")
    assert group_from_json(group_to_json(G)).same_group(G)


def test_invalid_permutations():
    with pytest.raises(PermGroupError):
        PermGroup(3, [(0, 0, 1)])
    with pytest.raises(PermGroupError):
        PermGroup(3, [(0, 1)])


# -- properties against the element-enumeration oracle ----------------------------

@st.composite
def small_groups(draw):
    n = draw(st.integers(2, 6))
    k = draw(st.integers(1, 3))
    gens = [tuple(draw(st.permutations(range(n)))) for _ in range(k)]
    return PermGroup(n, gens)


@given(small_groups())
@settings(max_examples=60, deadline=None)
def test_order_matches_enumeration(G):
    assert G.order() == len(closure(G.generators, G.degree))


@given(small_groups(), st.data())
@settings(max_examples=60, deadline=None)
def test_orbit_stabilizer(G, data):
    p = data.draw(st.integers(0, G.degree - 1))
    assert len(orbit(G, p)) * point_stabilizer(G, p).order() == G.order()


@given(small_groups())
@settings(max_examples=60, deadline=None)
def test_factors_match_oracle_and_orders(G):
    cf = composition_factors(G)
    assert math.prod(s.order ** k for s, k in cf.items()) == G.order()
    assert cf == brute_composition_factors(closure(G.generators, G.degree))


@given(small_groups(), st.data())
@settings(max_examples=40, deadline=None)
def test_factors_conjugation_invariant(G, data):
    h = tuple(data.draw(st.permutations(range(G.degree))))
    H = PermGroup(G.degree, [conjugate(g, h) for g in G.generators])
    assert composition_factors(H) == composition_factors(G)


@given(small_groups())
@settings(max_examples=30, deadline=None)
def test_coset_graph_vertex_transitive(G):
    U = point_stabilizer(G, 0)
    elems = list(G.generators)
    g, action = coset_graph(G, U, elems)
    assert g.is_connected()
    assert len(action.orbit(0)) == g.n


def test_random_element_in_group():
    G = named_group("D5")
    rng = random.Random(1)
    for _ in range(20):
        assert G.random_element(rng) in G
