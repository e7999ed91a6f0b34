"""Brute-force reference computations for small permutation groups.

Everything here works on explicit element sets and shares no code with the
Schreier-Sims engine, so it can serve as an independent check.  Only use it
for groups of a few hundred elements.
"""
from __future__ import annotations

import math
from collections import Counter
from itertools import combinations

from sympy import isprime

from .perm import Alternating, Cyclic, Other, SimpleId

MAX_ORACLE_ORDER = 5000


def _compose(p, q):
    return tuple(q[i] for i in p)


def _inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def closure(gens, degree: int) -> frozenset:
    """All products of ``gens``, by breadth-first multiplication."""
    e = tuple(range(degree))
    gens = [tuple(g) for g in gens]
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > MAX_ORACLE_ORDER:
            raise ValueError(f"group has more than {MAX_ORACLE_ORDER} elements")
        frontier = nxt
    return frozenset(seen)


def stabilizer_elements(elems: frozenset, point: int) -> frozenset:
    return frozenset(g for g in elems if g[point] == point)


def conjugacy_classes(elems: frozenset) -> list[frozenset]:
    left = set(elems)
    out = []
    while left:
        x = min(left)
        cls = frozenset(_compose(_compose(_inverse(g), x), g) for g in elems)
        out.append(cls)
        left -= cls
    return out


def normal_subgroups(elems: frozenset) -> list[frozenset]:
    """Every normal subgroup, as joins of normal closures of conjugacy classes."""
    degree = len(next(iter(elems)))
    found = {closure(c, degree) for c in conjugacy_classes(elems)}
    changed = True
    while changed:
        changed = False
        for a, b in combinations(list(found), 2):
            j = closure(a | b, degree)
            if j not in found:
                found.add(j)
                changed = True
    return sorted(found, key=len)


def _name(order: int) -> SimpleId:
    if isprime(order):
        return Cyclic(order)
    for k in range(5, 12):
        if math.factorial(k) // 2 == order:
            return Alternating(k)
    return Other(order)


def brute_composition_factors(elems: frozenset) -> Counter:
    """Composition factors via a chain of maximal normal subgroups."""
    out: Counter = Counter()
    G = elems
    while len(G) > 1:
        proper = [N for N in normal_subgroups(G) if len(N) < len(G)]
        N = max(proper, key=len)       # largest proper normal subgroup is maximal
        out[_name(len(G) // len(N))] += 1
        G = N
    return out


def point_stabilizer_factors(gens, degree: int, point: int = 0) -> Counter:
    """Composition factors of the stabilizer of ``point`` in the group generated by ``gens``."""
    return brute_composition_factors(stabilizer_elements(closure(gens, degree), point))
