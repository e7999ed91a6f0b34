"""The modular function on a Cayley-Abels graph.

An arc ``(a, b)`` is labelled by ``|b G_a| / |a G_b|``.  The product of labels
along any walk depends only on its endpoints, and the labels generate the
image of the modular function in Q+.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graphs import BallGraph
from .lattice import PositiveRational, QPlusLattice, hermite_normal_form
from .models import GroupModel


class LabellingError(ValueError):
    pass


class SearchBoundExceeded(RuntimeError):
    """The min-cost search hit its node bound; ``best`` is the best value found."""

    def __init__(self, best: int, generators, nodes: int):
        super().__init__(f"search bound exceeded after {nodes} nodes; best found {best}")
        self.best = best
        self.generators = generators
        self.nodes = nodes


@dataclass
class ArcLabelling:
    model: GroupModel
    ball: BallGraph
    labels: dict                       # arc-orbit key -> PositiveRational
    representatives: dict = field(default_factory=dict)   # key -> (u, v) ball arc

    def key(self, u: int, v: int):
        if not self.ball.undirected.has_edge(u, v):
            raise LabellingError(f"({u}, {v}) is not an arc of the ball")
        return self.model.arc_key(self.ball.labels[u], self.ball.labels[v])

    def label(self, u: int, v: int) -> PositiveRational:
        k = self.key(u, v)
        if k not in self.labels:
            raise LabellingError(f"arc orbit {k!r} is missing from the labelling")
        return self.labels[k]

    def to_doc(self) -> dict:
        return {"labels": {str(k): str(v) for k, v in sorted(self.labels.items(), key=lambda kv: str(kv[0]))}}


def _direct_label(m: GroupModel, a, b) -> PositiveRational:
    return PositiveRational(m.suborbit_between(a, b), m.suborbit_between(b, a))


def arc_labelling(m: GroupModel, ball: BallGraph | None = None, r: int = 2,
                  samples: int = 300, seed: int = 0) -> ArcLabelling:
    """One label per arc orbit, cross-checked on sampled arcs of the ball."""
    ball = ball or m.canonical_cayley_abels(r)
    if ball.radius < 1:
        raise LabellingError("a labelled ball needs radius >= 1")
    g = ball.undirected
    labels, reps = {}, {}
    # representatives: arcs at the root first, so every orbit is met near the centre
    arcs = sorted(g.arcs(), key=lambda a: (min(ball.dist[a[0]], ball.dist[a[1]]), a))
    for u, v in arcs:
        k = m.arc_key(ball.labels[u], ball.labels[v])
        if k not in labels:
            labels[k] = _direct_label(m, ball.labels[u], ball.labels[v])
            reps[k] = (u, v)
    lab = ArcLabelling(m, ball, labels, reps)
    rng = random.Random(seed)
    check = arcs if len(arcs) <= samples else rng.sample(arcs, samples)
    for u, v in check:
        direct = _direct_label(m, ball.labels[u], ball.labels[v])
        if lab.label(u, v) != direct:
            raise LabellingError(f"labels are not invariant: arc ({u}, {v}) has {direct}, "
                                 f"its orbit has {lab.label(u, v)}")
        if lab.label(v, u) != direct.inverse():
            raise LabellingError(f"reverse of arc ({u}, {v}) does not carry the inverse label")
    return lab


def path_delta(l: ArcLabelling, walk: Sequence[int]) -> PositiveRational:
    out = PositiveRational(1)
    for u, v in zip(walk, walk[1:]):
        out = out * l.label(u, v)
    return out


def random_walk_between(ball: BallGraph, a: int, b: int, rng: random.Random, extra: int = 6):
    """A random walk from ``a`` to ``b`` inside the ball (wanders, then heads home)."""
    g = ball.undirected
    walk = [a]
    for _ in range(rng.randrange(extra + 1)):
        walk.append(rng.choice(g.neighbours(walk[-1])))
    dist = g.distances_from(b)
    while walk[-1] != b:
        x = walk[-1]
        walk.append(min((y for y in g.neighbours(x) if dist[y] == dist[x] - 1),
                        key=lambda y: (rng.random(), y)))
    return walk


def modular_image(m: GroupModel, ball: BallGraph | None = None, r: int = 2) -> QPlusLattice:
    lab = arc_labelling(m, ball, r)
    return QPlusLattice.generated_by(lab.labels.values())


def _coprime_candidates(H: QPlusLattice, cap: int) -> list[PositiveRational]:
    out = []
    for s in range(3, cap + 1):
        for p in range(1, s):
            q = s - p
            if math.gcd(p, q) == 1:
                x = PositiveRational(p, q)
                if x in H:
                    out.append(x)
    return out


@dataclass(frozen=True)
class MinCostResult:
    value: int
    generators: tuple
    nodes: int
    trivial: bool = False


def md_lower_bound_modular(H: QPlusLattice, cap: int | None = None, max_nodes: int = 2_000_000
                           ) -> MinCostResult:
    """Least total cost ``sum(p_i + q_i)`` of fractions ``p_i/q_i`` generating ``H``.

    Depth-first branch-and-bound over sets of candidate fractions in ``H``,
    cheapest first, pruning on cost and requiring each new fraction to enlarge
    the generated lattice.  The trivial group gives 0 (no information).
    """
    if H.is_trivial():
        return MinCostResult(0, (), 0, trivial=True)
    basis = H.basis_rationals()
    default_cap = sum(b.cost for b in basis)
    cap = default_cap if cap is None else cap
    best = [default_cap, tuple(basis)] if default_cap <= cap else [cap + 1, None]
    cands = _coprime_candidates(H, min(cap, best[0] - 1))
    primes = H.primes
    vecs = [[c.exponents.get(p, 0) for p in primes] for c in cands]
    nodes = 0

    def lattice(rows):
        return tuple(tuple(r) for r in hermite_normal_form(rows))

    target = H.basis

    def search(start, rows, cost, chosen):
        nonlocal nodes
        for i in range(start, len(cands)):
            c = cands[i].cost
            if cost + c >= best[0]:
                break          # candidates are sorted by cost
            nodes += 1
            if nodes > max_nodes:
                raise SearchBoundExceeded(best[0], best[1], nodes)
            new_rows = [list(r) for r in rows] + [vecs[i]]
            L = lattice(new_rows)
            if len(L) == len(rows) and L == rows:
                continue       # adds nothing
            if L == target:
                best[0], best[1] = cost + c, tuple(chosen + [cands[i]])
                return
            search(i + 1, L, cost + c, chosen + [cands[i]])

    search(0, (), 0, [])
    if best[1] is None:
        raise SearchBoundExceeded(cap + 1, None, nodes)
    return MinCostResult(best[0], best[1], nodes)
