"""Finite permutation groups.

Permutations are tuples of images: ``p[x]`` is the image of ``x``.  Groups act on
the right, so ``mul(p, q)`` means "first ``p``, then ``q``".  Orders and
membership come from a Schreier-Sims stabilizer chain.
"""
from __future__ import annotations

import json
import math
import random
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from sympy import factorint, isprime

from .graphs import FiniteGraph

DEFAULT_ORDER_BOUND = 10**7


class PermGroupError(ValueError):
    pass


class OrderBoundExceeded(PermGroupError):
    pass


# -- permutations ---------------------------------------------------------

def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def mul(p, q):
    return tuple(map(q.__getitem__, p))


def inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_identity(p) -> bool:
    return all(i == x for i, x in enumerate(p))


def check_perm(p, n: int | None = None):
    if sorted(p) != list(range(len(p))) or (n is not None and len(p) != n):
        raise PermGroupError(f"not a permutation of {n if n is not None else len(p)} points: {p}")


def from_cycles(n: int, *cycles: Sequence[int]):
    """``from_cycles(4, (0, 1, 2))`` is the 3-cycle 0->1->2->0 on 4 points."""
    out = list(range(n))
    for c in cycles:
        for i, x in enumerate(c):
            out[x] = c[(i + 1) % len(c)]
    return tuple(out)


def perm_power(p, k: int):
    r = identity(len(p))
    base = p if k >= 0 else inv(p)
    for _ in range(abs(k)):
        r = mul(r, base)
    return r


def cycle_string(p) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c, j = [i], p[i]
        while j != i:
            seen.add(j)
            c.append(j)
            j = p[j]
        out.append("(" + " ".join(map(str, c)) + ")")
    return "".join(out) or "()"


# -- stabilizer chain -----------------------------------------------------

class _Chain:
    """Base, strong generators per level and explicit transversals."""

    def __init__(self, n, gens, base_prefix=(), order=None, rng=None):
        self.n = n
        self.id = identity(n)
        base = list(dict.fromkeys(base_prefix))
        S = [g for g in dict.fromkeys(gens) if not is_identity(g)]
        for g in S:
            if all(g[b] == b for b in base):
                base.append(next(i for i in range(n) if g[i] != i))
        self.base = base
        self.strong = [[g for g in S if all(g[b] == b for b in base[:i])]
                       for i in range(len(base))]
        self.trans = [self._transversal(i) for i in range(len(base))]
        if order is None:
            self._build()
        else:
            self._build_random(S, order, rng or random.Random(0))

    def _transversal(self, i):
        b = self.base[i]
        t = {b: (self.id, self.id)}
        queue = deque([b])
        while queue:
            x = queue.popleft()
            u = t[x][0]
            for s in self.strong[i]:
                y = s[x]
                if y not in t:
                    w = mul(u, s)
                    t[y] = (w, inv(w))
                    queue.append(y)
        return t

    def sift(self, g, start=0):
        for level in range(start, len(self.base)):
            b = g[self.base[level]]
            entry = self.trans[level].get(b)
            if entry is None:
                return g, level
            if b != self.base[level]:
                g = mul(g, entry[1])
        return g, len(self.base)

    def _build(self):
        i = len(self.base) - 1
        while i >= 0:
            restart = False
            for beta, (u, _) in list(self.trans[i].items()):
                for s in list(self.strong[i]):
                    img = s[beta]
                    h = mul(mul(u, s), self.trans[i][img][1])
                    if h == self.id:
                        continue
                    y, j = self.sift(h, i + 1)
                    if j < len(self.base) or y != self.id:
                        if j == len(self.base):
                            self.base.append(next(k for k in range(self.n) if y[k] != k))
                            self.strong.append([])
                            self.trans.append(None)
                        for level in range(i + 1, j + 1):
                            self.strong[level].append(y)
                            self.trans[level] = self._transversal(level)
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    def _add_residue(self, y, j):
        if j == len(self.base):
            self.base.append(next(k for k in range(self.n) if y[k] != k))
            self.strong.append([])
            self.trans.append(None)
        for level in range(j + 1):
            if all(y[b] == b for b in self.base[:level]) and y not in self.strong[level]:
                self.strong[level].append(y)
                self.trans[level] = self._transversal(level)

    def _build_random(self, gens, order, rng, max_misses=100000):
        """Randomized Schreier-Sims; exact because the target order is known."""
        if order == 1:
            return
        if not gens:
            raise PermGroupError("no generators for a group of declared order > 1")
        slots = list(gens) * max(1, -(-10 // max(1, len(gens))))
        acc = self.id
        misses = 0
        while self.order() < order:
            i, j = rng.sample(range(len(slots)), 2)
            slots[i] = mul(slots[i], slots[j])
            acc = mul(acc, slots[i])
            y, lvl = self.sift(acc)
            if lvl < len(self.base) or y != self.id:
                self._add_residue(y, lvl)
                misses = 0
            else:
                misses += 1
                if misses > max_misses:
                    raise PermGroupError("generators do not reach the declared group order")
        if self.order() != order:
            raise PermGroupError("declared group order is smaller than the generated group")

    def order(self):
        return math.prod(len(t) for t in self.trans)

    def contains(self, g):
        y, j = self.sift(g)
        return j == len(self.base) and y == self.id

    def level_generators(self, k):
        """Generators of the pointwise stabilizer of ``base[:k]``."""
        if k >= len(self.base):
            return []
        return list(self.strong[k])


# -- groups ----------------------------------------------------------------

class PermGroup:
    """A permutation group on ``range(degree)`` given by generators."""

    def __init__(self, degree: int, generators: Iterable = (), base: Sequence[int] = (),
                 order: int | None = None):
        """``order``, when known, switches to randomized (still exact) Schreier-Sims."""
        self.degree = degree
        self.known_order = order
        gens = []
        for g in generators:
            g = tuple(g)
            check_perm(g, degree)
            if not is_identity(g) and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)
        self._base_prefix = tuple(base)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"

    @classmethod
    def symmetric(cls, n: int) -> "PermGroup":
        if n < 2:
            return cls(n)
        gens = [from_cycles(n, (0, 1))]
        if n > 2:
            gens.append(from_cycles(n, tuple(range(n))))
        return cls(n, gens)

    @classmethod
    def alternating(cls, n: int) -> "PermGroup":
        return cls(n, [from_cycles(n, (0, 1, i)) for i in range(2, n)])

    @classmethod
    def cyclic(cls, n: int) -> "PermGroup":
        return cls(n, [from_cycles(n, tuple(range(n)))] if n > 1 else [])

    @cached_property
    def chain(self) -> _Chain:
        return _Chain(self.degree, self.generators, self._base_prefix, self.known_order)

    def with_base(self, base: Sequence[int]) -> "PermGroup":
        return PermGroup(self.degree, self.generators, base, self.known_order or self.order())

    def order(self) -> int:
        return self.chain.order()

    def is_trivial(self) -> bool:
        return not self.generators

    def __contains__(self, g) -> bool:
        return len(g) == self.degree and self.chain.contains(tuple(g))

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(g in other for g in self.generators)

    def same_group(self, other: "PermGroup") -> bool:
        return (self.degree == other.degree and self.order() == other.order()
                and self.is_subgroup_of(other))

    def orbit(self, p: int) -> set[int]:
        return orbit(self, p)

    def orbits(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for p in range(self.degree):
            if p not in seen:
                o = orbit(self, p)
                seen |= o
                out.append(tuple(sorted(o)))
        return out

    def is_transitive(self) -> bool:
        return self.degree == 0 or len(orbit(self, 0)) == self.degree

    def elements(self):
        """Every group element, enumerated from the transversals."""
        ch = self.chain
        elems = [ch.id]
        for t in reversed(ch.trans):
            elems = [mul(e, u) for e in elems for (u, _) in t.values()]
        return elems

    def random_element(self, rng: random.Random):
        g = self.chain.id
        for t in reversed(self.chain.trans):
            g = mul(g, rng.choice(list(t.values()))[0])
        return g


def orbit(G: PermGroup, p: int) -> set[int]:
    if not 0 <= p < G.degree:
        raise PermGroupError(f"point {p} not in 0..{G.degree - 1}")
    seen = {p}
    queue = deque([p])
    while queue:
        x = queue.popleft()
        for g in G.generators:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def orbit_of_items(items: Iterable, gens, act) -> list[set]:
    """Orbits of generators on arbitrary hashable items under ``act(item, g)``."""
    todo = set(items)
    out = []
    while todo:
        start = todo.pop()
        o = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = act(x, g)
                if y not in o:
                    o.add(y)
                    queue.append(y)
        todo -= o
        out.append(o)
    return out


def pointwise_stabilizer(G: PermGroup, points: Sequence[int]) -> PermGroup:
    points = list(dict.fromkeys(points))
    ch = G.with_base(points).chain
    k = len(points)
    return PermGroup(G.degree, ch.level_generators(k), order=math.prod(len(t) for t in ch.trans[k:]))


def point_stabilizer(G: PermGroup, p: int) -> PermGroup:
    """Generators of ``G_p`` (strong generators of the chain with base ``[p, ...]``)."""
    if not 0 <= p < G.degree:
        raise PermGroupError(f"point {p} not in 0..{G.degree - 1}")
    return pointwise_stabilizer(G, [p])


def group_order(G: PermGroup) -> int:
    return G.order()


def restrict(g, points: Sequence[int], index: dict):
    return tuple(index[g[p]] for p in points)


def induced_action(G: PermGroup, S: Iterable[int]) -> tuple[PermGroup, bool]:
    """Image of the restriction to the invariant set ``S`` (renumbered in sorted order).

    The flag is True iff the pointwise stabilizer of ``S`` is trivial.
    """
    pts = sorted(set(S))
    index = {p: i for i, p in enumerate(pts)}
    for g in G.generators:
        if any(g[p] not in index for p in pts):
            raise PermGroupError("set is not invariant under the group")
    image = PermGroup(len(pts), [restrict(g, pts, index) for g in G.generators])
    faithful = image.order() == G.order()
    return image, faithful


def conjugate(g, h):
    """``h^-1 g h``."""
    return mul(mul(inv(h), g), h)


def normal_closure(G: PermGroup, elems: Iterable) -> PermGroup:
    gens = [tuple(e) for e in elems if not is_identity(tuple(e))]
    N = PermGroup(G.degree, gens)
    queue = deque(N.generators)
    while queue:
        n = queue.popleft()
        for g in G.generators:
            c = conjugate(n, g)
            if c not in N:
                N = PermGroup(G.degree, N.generators + (c,))
                queue.append(c)
    return N


def derived_subgroup(G: PermGroup) -> PermGroup:
    gens = G.generators
    comms = [mul(mul(inv(a), inv(b)), mul(a, b)) for i, a in enumerate(gens) for b in gens[i + 1:]]
    return normal_closure(G, comms)


class _CosetKey:
    """Canonical representatives of right cosets ``N g``."""

    def __init__(self, N: PermGroup):
        self.ch = N.chain

    def __call__(self, g):
        h = g
        for level, b in enumerate(self.ch.base):
            best = None
            for x, (u, _) in self.ch.trans[level].items():
                if best is None or h[x] < best[0]:
                    best = (h[x], u)
            h = mul(best[1], h)
        return h


def coset_action(G: PermGroup, N: PermGroup, limit: int | None = None):
    """Action of ``G`` on the right cosets of ``N``; returns (group, coset reps)."""
    key = _CosetKey(N)
    start = key(identity(G.degree))
    reps = [start]
    index = {start: 0}
    images = [[] for _ in G.generators]
    i = 0
    while i < len(reps):
        r = reps[i]
        for k, s in enumerate(G.generators):
            c = key(mul(r, s))
            if c not in index:
                index[c] = len(reps)
                reps.append(c)
                if limit is not None and len(reps) > limit:
                    raise OrderBoundExceeded("too many cosets")
            images[k].append(index[c])
        i += 1
    return PermGroup(len(reps), images), reps


def quotient_group(G: PermGroup, N: PermGroup) -> PermGroup:
    """``G/N`` realized as the action on right cosets; ``N`` must be normal."""
    return coset_action(G, N)[0]


# -- composition factors ---------------------------------------------------

@dataclass(frozen=True, order=True)
class SimpleId:
    kind: str          # "cyclic" | "alternating" | "other"
    param: int         # prime, degree, or order

    def __post_init__(self):
        if self.kind == "cyclic" and not isprime(self.param):
            raise PermGroupError("cyclic simple factor must have prime order")
        if self.kind == "alternating" and self.param < 5:
            raise PermGroupError("alternating simple factor needs degree >= 5")

    @property
    def order(self) -> int:
        if self.kind == "cyclic":
            return self.param
        if self.kind == "alternating":
            return math.factorial(self.param) // 2
        return self.param

    def __str__(self):
        return {"cyclic": "C", "alternating": "A", "other": "Simple#"}[self.kind] + str(self.param)


def Cyclic(p: int) -> SimpleId:
    return SimpleId("cyclic", p)


def Alternating(k: int) -> SimpleId:
    return SimpleId("alternating", k)


def Other(order: int) -> SimpleId:
    return SimpleId("other", order)


def _alternating_degree(order: int) -> int | None:
    k, f = 5, 60
    while f < order:
        k += 1
        f = math.factorial(k) // 2
    return k if f == order else None


def identify_simple(G: PermGroup) -> SimpleId:
    """Name a group already known to be simple."""
    o = G.order()
    if isprime(o):
        return Cyclic(o)
    k = _alternating_degree(o)
    if k is None:
        return Other(o)
    for orb in G.orbits():
        if len(orb) == k and induced_action(G, orb)[1]:
            return Alternating(k)
    # 20160 is the only order shared by A_k and a non-isomorphic simple group
    if k != 8:
        return Alternating(k)
    return Other(o)


def _proper_normal_closure(G: PermGroup, rng: random.Random):
    o = G.order()
    cands = list(G.generators)
    cands += [mul(a, b) for a in G.generators for b in G.generators]
    if o <= 2000:
        cands += G.elements()
    else:
        cands += [G.random_element(rng) for _ in range(60)]
    best = None
    tried = set()
    for g in cands:
        if is_identity(g) or g in tried:
            continue
        tried.add(g)
        if best is not None and g in best:
            continue
        N = normal_closure(G, [g])
        no = N.order()
        if 1 < no < o and (best is None or no < best.order()):
            best = N
    return best


def _factors(G: PermGroup, bound: int, rng) -> list[SimpleId]:
    o = G.order()
    if o == 1:
        return []
    if isprime(o):
        return [Cyclic(o)]
    moved = [orb for orb in G.orbits() if len(orb) > 1]
    if len(moved) > 1:
        K = pointwise_stabilizer(G, moved[0])
        if not K.is_trivial():
            image, _ = induced_action(G, moved[0])
            return _factors(K, bound, rng) + _factors(image, bound, rng)
    D = derived_subgroup(G)
    do = D.order()
    if do < o:
        abelian = [Cyclic(p) for p, e in factorint(o // do).items() for _ in range(e)]
        return _factors(D, bound, rng) + abelian
    N = _proper_normal_closure(G, rng)
    if N is not None:
        return _factors(N, bound, rng) + _factors(quotient_group(G, N), bound, rng)
    return [identify_simple(G)]


def composition_factors(G: PermGroup, order_bound: int = DEFAULT_ORDER_BOUND) -> Counter:
    """Multiset ``SimpleId -> multiplicity`` of the composition factors of ``G``."""
    if G.order() > order_bound:
        raise OrderBoundExceeded(f"group order {G.order()} exceeds bound {order_bound}")
    return Counter(_factors(G, order_bound, random.Random(0)))


def min_symmetric_subquotient_degree(s: SimpleId) -> int:
    """Least ``n`` such that ``s`` is a subquotient of ``S_n``."""
    if s.kind in ("cyclic", "alternating"):
        return s.param
    raise PermGroupError(f"unsupported simple group {s}: minimal symmetric degree unknown")


# -- coset graphs ----------------------------------------------------------

def coset_graph(G: PermGroup, U: PermGroup, elems: Sequence) -> tuple[FiniteGraph, PermGroup]:
    """Graph on the right cosets ``U g`` with edges the G-orbits of ``{U, U g_i}``.

    Returns the graph and the permutation action of ``G`` on its vertices.
    """
    if not U.is_subgroup_of(G):
        raise PermGroupError("U is not a subgroup of G")
    elems = [tuple(e) for e in elems]
    for e in elems:
        if e not in G:
            raise PermGroupError("element not in G")
    action, reps = coset_action(G, U)
    key = _CosetKey(U)
    index = {r: i for i, r in enumerate(reps)}
    u_elems = U.elements()
    edges = set()
    for i, r in enumerate(reps):
        for e in elems:
            for x in (e, inv(e)):
                for u in u_elems:
                    j = index[key(mul(mul(x, u), r))]
                    if j != i:
                        edges.add((min(i, j), max(i, j)))
    return FiniteGraph.from_edges(len(reps), edges), action


# -- JSON format -----------------------------------------------------------

def group_to_json(G: PermGroup) -> str:
    return json.dumps({"points": G.degree, "generators": [list(g) for g in G.generators]},
                      sort_keys=True)


def group_from_doc(doc: dict) -> PermGroup:
    return PermGroup(doc["points"], [tuple(g) for g in doc.get("generators", [])])


def group_from_json(text: str) -> PermGroup:
    return group_from_doc(json.loads(text))


def dihedral(n: int) -> PermGroup:
    """Symmetries of an n-gon on its vertices (order 2n)."""
    if n < 3:
        return PermGroup.symmetric(n)
    return PermGroup(n, [from_cycles(n, tuple(range(n))),
                         tuple((-i) % n for i in range(n))])


def affine_group(p: int) -> PermGroup:
    """AGL(1, p) acting on the p points of the prime field."""
    g = next(a for a in range(2, p) if len({pow(a, k, p) for k in range(1, p)}) == p - 1) if p > 2 else 1
    return PermGroup(p, [tuple((x + 1) % p for x in range(p)), tuple((g * x) % p for x in range(p))])


def named_group(name: str) -> PermGroup:
    """``S5``, ``A4``, ``C3``, ``D5`` or ``AGL1_5`` style names."""
    name = name.strip()
    if name.upper().startswith("AGL1_"):
        p = int(name[5:])
        if not isprime(p):
            raise PermGroupError("AGL1_p needs a prime p")
        return affine_group(p)
    kind, num = name[:1].upper(), name[1:]
    if not num.isdigit() or int(num) < 1:
        raise PermGroupError(f"unknown group name {name!r}")
    n = int(num)
    makers = {"S": PermGroup.symmetric, "A": PermGroup.alternating,
              "C": PermGroup.cyclic, "D": dihedral}
    if kind not in makers:
        raise PermGroupError(f"unknown group name {name!r}")
    if kind == "A" and n < 3:
        return PermGroup(n)
    return makers[kind](n)
