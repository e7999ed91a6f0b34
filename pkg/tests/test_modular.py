import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from tdlc.graphs import FiniteGraph
from tdlc.lattice import PositiveRational, QPlusLattice
from tdlc.models import (AutPlus, BMUniversal, DirectedProduct, DirectedTree, EndStab, FiniteOracle, FullAut)
from tdlc.modular import (LabellingError, SearchBoundExceeded, arc_labelling, md_lower_bound_modular,
                          modular_image, path_delta, random_walk_between)
from tdlc.perm import dihedral, named_group


def test_unimodular_labels():
    for m in (FullAut(3), FullAut(5), BMUniversal(named_group("A4")), AutPlus(3)):
        lab = arc_labelling(m)
        assert all(v == 1 for v in lab.labels.values())
        assert modular_image(m).is_trivial()
    c4 = FiniteOracle(dihedral(4), FiniteGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))
    assert all(v == 1 for v in arc_labelling(c4, r=2).labels.values())


@pytest.mark.parametrize("d,d2", [(3, 2), (3, 3), (4, 3), (5, 2)])
def test_end_stabilizer_labels(d, d2):
    k = (d - 1) * (d2 - 1)
    m = EndStab(d, d2)
    lab = arc_labelling(m)
    assert lab.labels["toward_end"] == PositiveRational(1, k)
    assert lab.labels["away_from_end"] == PositiveRational(k)
    assert modular_image(m) == QPlusLattice.generated_by([PositiveRational(1, k)])


def test_path_delta_examples():
    m = EndStab(3, 2)
    ball = m.canonical_cayley_abels(3)
    lab = arc_labelling(m, ball)
    assert path_delta(lab, [ball.root]) == 1
    up1 = ball.index[((("up", "A"), 0), (("up", "B"), 0))]
    up2 = ball.index[((("up", "A"), 0), (("up", "B"), 0)) * 2]
    assert path_delta(lab, [ball.root, up1, up2]) == PositiveRational(1, 4)
    assert path_delta(lab, [ball.root, up1, ball.root]) == 1
    with pytest.raises(LabellingError):
        path_delta(lab, [ball.root, up2])


def test_red_blue_image():
    H = modular_image(DirectedTree.red_blue(2, 3))
    assert H == QPlusLattice.generated_by([2, 3]) and H.rank == 2
    prod = DirectedProduct([DirectedTree.out_in(2, 1), DirectedTree.out_in(3, 1)])
    assert modular_image(prod) == QPlusLattice.generated_by([2, 3])


def test_min_cost_examples():
    assert md_lower_bound_modular(QPlusLattice.generated_by([PositiveRational(1, 4)])).value == 5
    assert md_lower_bound_modular(QPlusLattice.generated_by([2, 3])).value == 7
    assert md_lower_bound_modular(QPlusLattice.generated_by([6])).value == 7
    triv = md_lower_bound_modular(QPlusLattice.trivial())
    assert triv.value == 0 and triv.trivial


def test_search_bound_reports_best():
    H = QPlusLattice.generated_by([2, 3, 5])
    with pytest.raises(SearchBoundExceeded) as info:
        md_lower_bound_modular(H, max_nodes=2)
    assert info.value.best == 13


def _brute_min_cost(H):
    """Cheapest generating subset among all fractions of H up to the basis cost."""
    cap = sum(b.cost for b in H.basis_rationals())
    cands = [PositiveRational(p, s - p) for s in range(3, cap + 1) for p in range(1, s)
             if math.gcd(p, s - p) == 1 and PositiveRational(p, s - p) in H]
    best = cap
    for k in range(1, 4):
        for combo in combinations(cands, k):
            c = sum(x.cost for x in combo)
            if c < best and QPlusLattice.generated_by(combo) == H:
                best = c
    return best


@given(st.lists(st.builds(PositiveRational, st.integers(1, 12), st.integers(1, 12)), min_size=1, max_size=2)
       .filter(lambda g: not QPlusLattice.generated_by(g).is_trivial()))
@settings(max_examples=40, deadline=None)
def test_min_cost_matches_brute_force(gens):
    H = QPlusLattice.generated_by(gens)
    res = md_lower_bound_modular(H)
    assert res.value == _brute_min_cost(H)
    assert res.value <= sum(g.cost for g in gens if g != 1)
    assert QPlusLattice.generated_by(res.generators) == H


@given(st.integers(1, 29).flatmap(lambda p: st.tuples(st.just(p), st.integers(1, 30 - p)))
       .filter(lambda pq: math.gcd(*pq) == 1 and sum(pq) >= 3))
@settings(max_examples=50, deadline=None)
def test_rank_one_cost(pq):
    p, q = pq
    assert md_lower_bound_modular(QPlusLattice.generated_by([PositiveRational(p, q)])).value == p + q


@pytest.mark.parametrize("m", [EndStab(3, 3), DirectedTree.red_blue(2, 3), EndStab(4, 2)], ids=repr)
def test_path_independence_and_reversal(m):
    ball = m.canonical_cayley_abels(4)
    lab = arc_labelling(m, ball)
    rng = random.Random(7)
    for _ in range(150):
        a, b = rng.randrange(ball.n), rng.randrange(ball.n)
        w1, w2 = random_walk_between(ball, a, b, rng), random_walk_between(ball, a, b, rng)
        assert path_delta(lab, w1) == path_delta(lab, w2)
        assert path_delta(lab, w1[::-1]) == path_delta(lab, w1).inverse()


def test_image_independent_of_radius():
    for m in (EndStab(3, 3), DirectedTree.red_blue(2, 3)):
        assert modular_image(m, r=2) == modular_image(m, r=3)


@pytest.mark.parametrize("m", [FullAut(4), EndStab(3, 3), EndStab(4, 3), DirectedTree.red_blue(2, 3),
                               DirectedTree.out_in(3, 2), AutPlus(3)], ids=repr)
def test_modular_bound_is_sound(m):
    assert md_lower_bound_modular(modular_image(m)).value <= m.degree
