from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tdlc.lattice import PositiveRational, QPlusLattice, hermite_normal_form, parse_rational

rationals = st.builds(PositiveRational, st.integers(1, 60), st.integers(1, 60))


def test_positive_rational_basics():
    x = PositiveRational(6, 4)
    assert (x.p, x.q, x.cost) == (3, 2, 5)
    assert x.exponents == {3: 1, 2: -1}
    assert str(x.inverse()) == "2/3"
    assert parse_rational(" 12/18 ") == PositiveRational(2, 3)
    with pytest.raises(ValueError):
        PositiveRational(0)
    with pytest.raises(ValueError):
        PositiveRational(-1, 2)


def test_hnf_shape():
    H = hermite_normal_form([[2, 1], [1, 2]])
    assert H == [[1, 2], [0, 3]]
    assert hermite_normal_form([[0, 0]]) == []
    assert hermite_normal_form([[4], [6]]) == [[2]]


def test_lattice_examples():
    H = QPlusLattice.generated_by([2, 3])
    assert H.rank == 2 and PositiveRational(2, 3) in H and PositiveRational(5) not in H
    assert QPlusLattice.generated_by([PositiveRational(1, 4)]) == QPlusLattice.generated_by([4])
    assert QPlusLattice.generated_by([1]).is_trivial()
    assert QPlusLattice.trivial().rank == 0
    assert PositiveRational(2) not in QPlusLattice.generated_by([4])


@given(rationals, rationals)
@settings(max_examples=100, deadline=None)
def test_exponents_are_additive(a, b):
    ab = a * b
    for p in set(a.exponents) | set(b.exponents):
        assert ab.exponents.get(p, 0) == a.exponents.get(p, 0) + b.exponents.get(p, 0)
    assert (a / b) * b == a
    assert a ** 3 == a * a * a


@given(st.lists(rationals, min_size=1, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_lattice_membership_and_canonical_form(gens, coeffs):
    H = QPlusLattice.generated_by(gens)
    x = PositiveRational(1)
    for g, c in zip(gens, coeffs):
        x = x * g ** c
    assert x in H
    # canonical: order and redundant products do not change the result
    assert QPlusLattice.generated_by(list(reversed(gens)) + [x]) == H
    assert QPlusLattice.generated_by(H.basis_rationals()) == H
    # basis rows: positive pivots, entries above each pivot reduced
    for i, row in enumerate(H.basis):
        c = next(j for j, e in enumerate(row) if e)
        assert row[c] > 0
        for prev in H.basis[:i]:
            assert 0 <= prev[c] < row[c]


@given(st.lists(rationals, min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_coordinates_reconstruct(gens):
    H = QPlusLattice.generated_by(gens)
    for g in gens:
        coords = H.coordinates(g)
        y = PositiveRational(1)
        for b, c in zip(H.basis_rationals(), coords):
            y = y * b ** c
        assert y == g


def test_to_doc():
    doc = QPlusLattice.generated_by([PositiveRational(1, 6)]).to_doc()
    assert doc == {"primes": [2, 3], "basis": [[1, 1]], "generators": ["6/1"], "rank": 1}
    assert Fraction(6) == PositiveRational(6).value
