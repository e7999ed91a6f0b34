"""Scale of an element from the growth of suborbits along its powers.

``s(g) = lim |(alpha g^n) G_alpha|^(1/n)``.  Only finitely many terms are ever
computed, so every estimate carries a convergence flag and the window it used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import primefactors

from .models import GroupModel, ModelError, ProductWithFinite
from .perm import identity, orbit_of_items, point_stabilizer
from .trees import TreeAutomorphism


class InsufficientDepth(ValueError):
    pass


@dataclass(frozen=True)
class GrowthSequence:
    sizes: tuple

    def __post_init__(self):
        if not self.sizes or self.sizes[0] != 1 or any(s < 1 for s in self.sizes):
            raise ValueError("growth sizes start at 1 and stay positive")

    @property
    def ratios(self) -> tuple:
        return tuple(Fraction(b, a) for a, b in zip(self.sizes, self.sizes[1:]))


def _orbit_points(m: GroupModel, g, alpha, N: int) -> list:
    """Labels of ``alpha g^n`` for n = 0..N."""
    if isinstance(g, TreeAutomorphism):
        ball = g.ball
        v = ball.index[alpha] if alpha is not None else ball.root
        out = [ball.labels[v]]
        for n in range(N):
            if v not in g.map:
                raise InsufficientDepth(f"portrait leaves the ball after {n} steps")
            v = g.map[v]
            out.append(ball.labels[v])
        return out
    if isinstance(g, tuple):        # an element of a finite oracle group
        x = 0 if alpha is None else alpha
        out = [x]
        for _ in range(N):
            x = g[x]
            out.append(x)
        return out
    start = () if alpha is None else alpha
    return [g.power_label(start, n) for n in range(N + 1)]


def orbit_growth(m: GroupModel, g, alpha=None, N: int = 4) -> GrowthSequence:
    """Exact sizes ``|(alpha g^n) G_alpha|`` for n = 0..N."""
    pts = _orbit_points(m, g, alpha, N)
    return GrowthSequence(tuple(m.suborbit_between(pts[0], p) for p in pts))


@dataclass(frozen=True)
class ScaleEstimate:
    value: Fraction | int | None
    converged: bool
    heuristic: bool
    window: int
    ratios: tuple

    def to_doc(self) -> dict:
        v = self.value
        return {"value": None if v is None else (str(v) if isinstance(v, Fraction) and v.denominator != 1 else int(v)),
                "converged": self.converged, "bounded_heuristic": self.heuristic,
                "window": self.window, "ratios": [str(r) for r in self.ratios]}


def scale_estimate(s: GrowthSequence, window: int = 3) -> ScaleEstimate:
    """Stable ratio over the last ``window`` steps, else a bounded-growth guess, else nothing.

    The bounded case (no new maximum inside the window) is a heuristic and is
    flagged as such.
    """
    if len(s.sizes) < 3:
        raise ValueError("need at least 3 terms")
    rat = s.ratios
    k = min(window, len(rat))
    tail = rat[-k:]
    if len(set(tail)) == 1:
        v = tail[0]
        return ScaleEstimate(int(v) if v.denominator == 1 else v, True, False, k, rat)
    if max(s.sizes[-k:]) <= max(s.sizes[:-k]):
        return ScaleEstimate(1, True, True, k, rat)
    return ScaleEstimate(None, False, False, k, rat)


@dataclass(frozen=True)
class TidyCertificate:
    p: int
    q: int
    coprime: bool
    scale: int | None
    highly_arc_transitive: bool

    def to_doc(self) -> dict:
        return {"p": self.p, "q": self.q, "coprime": self.coprime, "scale": self.scale,
                "highly_arc_transitive": self.highly_arc_transitive}


def tidy_coprime_certificate(m: GroupModel, g, alpha=None) -> TidyCertificate:
    """``p = |(alpha g) G_alpha|``, ``q = |(alpha g^-1) G_alpha|``; coprime indices certify tidiness."""
    start = () if alpha is None else alpha
    fwd = g.power_label(start, 1)
    back = g.power_label(start, -1)
    p, q = m.suborbit_between(start, fwd), m.suborbit_between(start, back)
    cop = math.gcd(p, q) == 1
    return TidyCertificate(p, q, cop, p if cop else None, cop)


@dataclass(frozen=True)
class QuotientScaleResult:
    base_sizes: tuple
    quotient_sizes: tuple
    s_base: ScaleEstimate
    s_quotient: ScaleEstimate

    @property
    def equal(self) -> bool:
        return (self.s_base.converged and self.s_quotient.converged
                and self.s_base.value == self.s_quotient.value)


def quotient_scale_check(m: ProductWithFinite, g, f: Sequence[int] | None = None, N: int = 4,
                         point: int = 0, window: int = 3) -> QuotientScaleResult:
    """Scale of ``(g, f)`` in ``base x F`` acting on (ball x points), and modulo K = F.

    The stabilizer of ``(root, point)`` is ``G_root x F_point``; its orbits are
    computed explicitly on pairs.  K-orbits are the blocks ``{v} x points``.
    """
    if not isinstance(m, ProductWithFinite):
        raise ModelError("quotient_scale_check needs a product with a finite factor")
    F = m.F
    f = tuple(f) if f is not None else identity(F.degree)
    steps = _orbit_points(m.base, g, None, N)
    R = max(1, max(m.base.distance(steps[0], x) for x in steps))
    ball = m.base.canonical_cayley_abels(R)
    H = m.base.stabilizer_in_ball(R)
    Fx = point_stabilizer(F, point)
    k = F.degree
    gens = []
    for h in H.generators:
        gens.append(lambda pt, h=h: (h[pt[0]], pt[1]))
    for a in Fx.generators:
        gens.append(lambda pt, a=a: (pt[0], a[pt[1]]))
    items = [(v, x) for v in range(ball.n) for x in range(k)]
    orbit_of = {}
    for o in orbit_of_items(items, gens, lambda pt, fn: fn(pt)):
        fo = frozenset(o)
        for pt in o:
            orbit_of[pt] = fo
    base_sizes, quot_sizes = [], []
    x = point
    for n, w in enumerate(steps):
        pt = (ball.index[w], x)
        o = orbit_of[pt]
        base_sizes.append(len(o))
        quot_sizes.append(len({v for v, _ in o}))
        x = f[x]
    bs, qs = GrowthSequence(tuple(base_sizes)), GrowthSequence(tuple(quot_sizes))
    return QuotientScaleResult(bs.sizes, qs.sizes, scale_estimate(bs, window), scale_estimate(qs, window))


def md_lower_bound_scale(samples: Iterable) -> int:
    """Largest prime dividing a sampled scale, plus one; 0 when every sample is 1."""
    vals = []
    for s in samples:
        if isinstance(s, ScaleEstimate):
            if not s.converged:
                raise ValueError("scale sample did not converge")
            s = s.value
        vals.append(int(s))
    ps = [p for v in vals if v > 1 for p in primefactors(v)]
    return max(ps) + 1 if ps else 0
