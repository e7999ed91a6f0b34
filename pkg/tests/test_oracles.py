from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from tdlc.oracles import brute_composition_factors, closure, conjugacy_classes, normal_subgroups, \
    point_stabilizer_factors
from tdlc.perm import Alternating, Cyclic, PermGroup, dihedral, from_cycles


def test_closure_sizes():
    assert len(closure([from_cycles(4, (0, 1)), from_cycles(4, (0, 1, 2, 3))], 4)) == 24
    assert len(closure([from_cycles(5, (0, 1, 2)), from_cycles(5, (2, 3, 4))], 5)) == 60
    assert len(closure([], 3)) == 1


def test_class_and_normal_counts():
    s4 = closure([from_cycles(4, (0, 1)), from_cycles(4, (0, 1, 2, 3))], 4)
    assert sorted(len(c) for c in conjugacy_classes(s4)) == [1, 3, 6, 6, 8]
    assert [len(N) for N in normal_subgroups(s4)] == [1, 4, 12, 24]


def test_known_factors():
    s4 = closure([from_cycles(4, (0, 1)), from_cycles(4, (0, 1, 2, 3))], 4)
    assert brute_composition_factors(s4) == Counter({Cyclic(2): 3, Cyclic(3): 1})
    a5 = closure([from_cycles(5, (0, 1, 2)), from_cycles(5, (0, 1, 2, 3, 4))], 5)
    assert brute_composition_factors(a5) == Counter({Alternating(5): 1})
    # point stabilizer of S4 is S3
    assert point_stabilizer_factors([from_cycles(4, (0, 1)), from_cycles(4, (0, 1, 2, 3))], 4) == \
        Counter({Cyclic(2): 1, Cyclic(3): 1})


def test_oracle_refuses_large_groups():
    with pytest.raises(ValueError):
        closure(PermGroup.symmetric(8).generators, 8)


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 9))
def test_dihedral_factor_product(n):
    D = dihedral(n)
    f = brute_composition_factors(closure(D.generators, n))
    prod = 1
    for k, v in f.items():
        prod *= k.order ** v
    assert prod == 2 * n
