"""Digraph morphisms onto the directed integer lattice built from the modular function.

If the arcs of a digraph fall into n orbits whose labels are independent in
Q+, sending each vertex to the coordinates of the modular value of a path
from the base vertex turns every arc into a unit step of Z^n.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction

from .graphs import BallGraph, FiniteDigraph
from .lattice import PositiveRational, QPlusLattice
from .models import DirectedTree, GroupModel
from .modular import arc_labelling, path_delta


class ZMorphismError(ValueError):
    """The rank/orbit hypothesis for building the morphism fails."""


def build_red_blue_tree_ball(p: int, q: int, r: int, descendants_only: bool = False) -> BallGraph:
    """Ball of the tree with one red and one blue in-arc and p red, q blue out-arcs per vertex."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be at least 1")
    m = DirectedTree.red_blue(p, q)
    if descendants_only:
        return m.descendants(r)[0]
    return m.canonical_cayley_abels(r)


@dataclass
class ZMorphism:
    target_rank: int
    keys: tuple                 # arc-orbit keys, in basis order
    basis: tuple                # their labels, mapped to e_1..e_n
    values: dict                # ball vertex -> integer tuple
    base: int

    def to_doc(self) -> dict:
        return {"rank": self.target_rank, "base": self.base,
                "basis": [{"arc_orbit": str(k), "label": str(b)} for k, b in zip(self.keys, self.basis)],
                "values": {str(v): list(x) for v, x in sorted(self.values.items())}}


def _solve(rows: list[list[int]], target: list[int]) -> list[Fraction] | None:
    """Solve ``sum c_i rows[i] = target`` exactly; None if inconsistent."""
    n, m = len(rows), len(target)
    # augmented system: columns are primes, unknowns are the c_i
    A = [[Fraction(rows[i][j]) for i in range(n)] + [Fraction(target[j])] for j in range(m)]
    piv_cols, r = [], 0
    for c in range(n):
        k = next((i for i in range(r, m) if A[i][c] != 0), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    if any(all(x == 0 for x in A[i][:n]) and A[i][n] != 0 for i in range(m)):
        return None
    sol = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        sol[c] = A[i][n]
    return sol


def z_morphism(m: GroupModel, ball: BallGraph | None = None, base: int | None = None, r: int = 3
               ) -> ZMorphism:
    """Vertex values from path products of arc labels, written in the arc-label basis."""
    ball = ball or m.canonical_cayley_abels(r)
    g = ball.graph
    if not isinstance(g, FiniteDigraph):
        raise ZMorphismError("a digraph ball is needed")
    base = ball.root if base is None else base
    lab = arc_labelling(m, ball)
    fwd = sorted({lab.key(u, v) for u, v in g.arcs}, key=lambda k: (lab.labels[k].value, str(k)))
    labels = [lab.labels[k] for k in fwd]
    H = QPlusLattice.generated_by(lab.labels.values())
    if H.rank == 0:
        raise ZMorphismError("the modular function is trivial (rank 0)")
    if QPlusLattice.generated_by(labels).rank != len(fwd) or H.rank != len(fwd):
        raise ZMorphismError(f"{len(fwd)} arc orbits but the image has rank {H.rank}; "
                             "labels are not independent generators")
    primes = H.primes
    rows = [[x.exponents.get(p, 0) for p in primes] for x in labels]
    und = ball.undirected
    parent = {base: None}
    queue = deque([base])
    order = []
    while queue:
        x = queue.popleft()
        order.append(x)
        for y in und.neighbours(x):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    values = {}
    for v in order:
        walk = [v]
        while parent[walk[-1]] is not None:
            walk.append(parent[walk[-1]])
        delta = path_delta(lab, walk[::-1])
        c = _solve(rows, [delta.exponents.get(p, 0) for p in primes])
        if c is None or any(x.denominator != 1 for x in c):
            raise ZMorphismError(f"value at vertex {v} is not an integer combination of the basis")
        values[v] = tuple(int(x) for x in c)
    return ZMorphism(len(fwd), tuple(fwd), tuple(labels), values, base)


@dataclass(frozen=True)
class ZCheck:
    is_morphism: bool
    bad_arc: tuple | None
    collapse_is_property_z: bool
    bipartite: bool
    fibre_sizes: dict
    base_fibre: int

    def to_doc(self) -> dict:
        return {"is_morphism": self.is_morphism, "bad_arc": self.bad_arc,
                "collapse_is_property_z": self.collapse_is_property_z, "bipartite": self.bipartite,
                "base_fibre": self.base_fibre,
                "fibre_sizes": {",".join(map(str, k)): v for k, v in sorted(self.fibre_sizes.items())}}


def verify_z_morphism(zm: ZMorphism, ball: BallGraph) -> ZCheck:
    g = ball.graph
    n = zm.target_rank
    bad = None
    for u, v in sorted(g.arcs):
        diff = [b - a for a, b in zip(zm.values[u], zm.values[v])]
        if sorted(diff) != [0] * (n - 1) + [1]:
            bad = (u, v)
            break
    level = {v: sum(x) for v, x in zm.values.items()}
    collapse = all(level[v] - level[u] == 1 for u, v in g.arcs)
    und = ball.undirected
    bip = all((level[u] - level[v]) % 2 == 1 for u, v in und.edges) and und.bipartition() is not None
    fib = Counter(zm.values.values())
    return ZCheck(bad is None, bad, collapse, bip, dict(fib), fib[zm.values[zm.base]])


@dataclass(frozen=True)
class FibreCount:
    word: tuple
    arcs: int
    orbits: int


@dataclass(frozen=True)
class ArcFibreReport:
    s: int
    coprime: bool
    out_degree: int
    in_degree: int
    fibres: tuple

    @property
    def transitive(self) -> bool:
        return all(f.orbits == 1 for f in self.fibres)

    def to_doc(self) -> dict:
        return {"s": self.s, "coprime": self.coprime, "out_degree": self.out_degree,
                "in_degree": self.in_degree, "transitive": self.transitive,
                "fibres": [{"word": list(f.word), "arcs": f.arcs, "orbits": f.orbits} for f in self.fibres]}


def arc_fibre_transitivity_check(m: DirectedTree, s: int) -> ArcFibreReport:
    """Orbits of the root stabilizer on directed s-arcs from the root, split by colour word."""
    if s < 0:
        raise ValueError("s must be non-negative")
    ball, G = m.descendants(s)
    by_word: dict = {}
    for v in range(ball.n):
        if ball.dist[v] == s:
            word = tuple(t[1] for t, _ in ball.labels[v])
            by_word.setdefault(word, []).append(v)
    fibres = []
    for word in sorted(by_word):
        pts = by_word[word]
        seen, orbits = set(), 0
        for v in pts:
            if v not in seen:
                seen |= G.orbit(v)
                orbits += 1
        fibres.append(FibreCount(word, len(pts), orbits))
    cop = math.gcd(m.out_degree, m.in_degree) == 1
    return ArcFibreReport(s, cop, m.out_degree, m.in_degree, tuple(fibres))
