"""Exhaustion series of a vertex stabilizer and what they reveal.

Growing a subgraph one neighbourhood at a time, ``Gamma_0 = {root}`` and
``Gamma_i = Gamma_{i-1} + neighbours(alpha_i)``, gives a descending chain of
pointwise stabilizers.  Each quotient ``G_(Gamma_{i-1}) / G_(Gamma_i)`` is the
permutation group induced on the new neighbours of ``alpha_i``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from sympy import primefactors

from .graphs import BallGraph, FiniteGraph, GraphError, QuotientMap, quotient_graph
from .models import GroupModel, ModelError
from .perm import (DEFAULT_ORDER_BOUND, PermGroup, PermGroupError, SimpleId, composition_factors,
                   min_symmetric_subquotient_degree, point_stabilizer, restrict)


@dataclass(frozen=True)
class Exhaustion:
    ball: BallGraph
    pivots: tuple
    new_vertices: tuple            # per step, in the order they join
    order: str = "bfs"

    @property
    def base_order(self) -> list[int]:
        out = [self.ball.root]
        for new in self.new_vertices:
            out.extend(new)
        return out

    def step_subgraphs(self) -> list[frozenset]:
        out = [frozenset([self.ball.root])]
        for new in self.new_vertices:
            out.append(out[-1] | frozenset(new))
        return out


def build_exhaustion(ball: BallGraph, order: str = "bfs") -> Exhaustion:
    """Pivots are the interior vertices in BFS order.

    ``order="reverse"`` runs the BFS with neighbours in reverse index order,
    giving a second, different exhaustion of the same ball.
    """
    if order not in ("bfs", "reverse"):
        raise ValueError("order must be 'bfs' or 'reverse'")
    g = ball.undirected
    if not g.is_connected():
        raise GraphError("ball is disconnected")
    rev = order == "reverse"
    nbrs = (lambda v: sorted(g.neighbours(v), reverse=rev))
    seen = {ball.root}
    queue = [ball.root]
    pivots, news = [], []
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        if not ball.is_interior(x):
            continue
        new = [y for y in nbrs(x) if y not in seen]
        for y in nbrs(x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
        if new:
            pivots.append(x)
            news.append(tuple(new))
    return Exhaustion(ball, tuple(pivots), tuple(news), order)


@dataclass
class StepFactor:
    step: int
    pivot: int
    new_vertices: tuple
    group: PermGroup
    factors: Counter = field(default_factory=Counter)


def exhaustion_factors(m: GroupModel, e: Exhaustion, steps: int | None = None,
                       order_bound: int = DEFAULT_ORDER_BOUND) -> list[StepFactor]:
    """Groups induced on the new neighbours at each step, with composition factors."""
    G = m.stabilizer_in_ball(e.ball.radius)
    if G.degree != e.ball.n:
        raise ModelError("exhaustion ball does not match the model's ball at this radius")
    chain = G.with_base(e.base_order).chain
    out = []
    level = 1
    for i, (pivot, new) in enumerate(zip(e.pivots, e.new_vertices), start=1):
        if steps is not None and i > steps:
            break
        gens = chain.level_generators(level)
        index = {p: k for k, p in enumerate(new)}
        image = PermGroup(len(new), [restrict(g, new, index) for g in gens])
        out.append(StepFactor(i, pivot, tuple(new), image, composition_factors(image, order_bound)))
        level += len(new)
    return out


@dataclass
class SimpleContentReport:
    depth: int
    radius: int
    steps: list
    stable_factors: frozenset
    primes: frozenset

    def to_doc(self) -> dict:
        return {
            "depth": self.depth,
            "radius": self.radius,
            "steps": [{"step": s.step, "pivot": s.pivot, "points": len(s.new_vertices),
                       "order": s.group.order(),
                       "factors": {str(k): v for k, v in sorted(s.factors.items())}}
                      for s in self.steps],
            "stable_factors": sorted(str(f) for f in self.stable_factors),
            "primes": sorted(self.primes),
        }


def _radius_for(m: GroupModel, depth: int) -> int:
    r = 1
    while True:
        ball = m.canonical_cayley_abels(r)
        if len(ball.interior()) >= depth:
            return r
        if r > 64 or len(ball.interior()) == ball.n:
            raise ModelError(f"no ball of this model has {depth} interior vertices")
        r += 1


def local_simple_content(m: GroupModel, depth: int = 3, order: str = "bfs",
                         order_bound: int = DEFAULT_ORDER_BOUND) -> SimpleContentReport:
    """Simple factors present at every exhaustion step from 2 up to ``depth``.

    Appearing at every step of a finite window is the finite stand-in for
    occurring with infinite multiplicity; the report records the window.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    r = _radius_for(m, depth)
    e = build_exhaustion(m.canonical_cayley_abels(r), order)
    steps = exhaustion_factors(m, e, depth, order_bound)
    later = [set(s.factors) for s in steps[1:depth]]
    stable = frozenset(set.intersection(*later)) if later else frozenset()
    primes = frozenset(p for s in stable for p in primefactors(s.order))
    return SimpleContentReport(depth, r, steps, stable, primes)


@dataclass(frozen=True)
class Bound:
    value: int | None
    note: str = ""


def md_lower_bound_lsc(report: SimpleContentReport) -> Bound:
    """One more than the least n with every stable factor a subquotient of S_n."""
    if not report.stable_factors:
        return Bound(1, "empty local simple content")
    try:
        n = max(min_symmetric_subquotient_degree(s) for s in report.stable_factors)
    except PermGroupError as exc:
        return Bound(None, f"unknown: {exc}")
    return Bound(n + 1)


def md_lower_bound_prime(report: SimpleContentReport) -> Bound:
    if not report.primes:
        return Bound(0, "no local primes: no information")
    return Bound(max(report.primes) + 1)


def local_action_discreteness(L: PermGroup) -> str:
    """``Regular`` (trivial local action), ``FreeOnArcs`` (free local action) or ``Inconclusive``."""
    if L.order() == 1:
        return "Regular"
    if all(point_stabilizer(L, p).order() == 1 for p in range(L.degree)):
        return "FreeOnArcs"
    return "Inconclusive"


@dataclass(frozen=True)
class QuotientDegreeResult:
    degree_before: int
    degree_after: int
    witness: tuple | None          # same-class pair at distance <= 2, if any
    dropped_loops: int

    @property
    def equal(self) -> bool:
        return self.degree_before == self.degree_after


def quotient_degree_check(g: FiniteGraph, q: QuotientMap, vertex: int = 0) -> QuotientDegreeResult:
    """Compare the degree at ``vertex`` with the degree of its class in the quotient.

    The witness is a pair of distinct vertices in one class at distance at most
    2, searched over the whole graph.
    """
    if q.n != g.n:
        raise GraphError("partition and graph sizes differ")
    qg = quotient_graph(g, q)
    cls = q.class_of
    witness = None
    for u in range(g.n):
        near = set(g.neighbours(u))
        for v in list(near):
            near.update(g.neighbours(v))
        near.discard(u)
        hits = sorted(v for v in near if cls[v] == cls[u])
        if hits:
            witness = (u, hits[0])
            break
    return QuotientDegreeResult(g.degree(vertex), qg.degree(cls[vertex]), witness,
                                len(q.dropped_loops(g)))
