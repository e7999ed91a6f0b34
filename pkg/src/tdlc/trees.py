"""Tree combinatorics: typed trees, colour-word trees, word maps and Tits types.

Two coordinate systems are used for tree vertices.

* Typed trees: every edge end carries a type, and a vertex of a given kind has a
  fixed number of neighbours of each type.  A vertex is the reduced word of
  ``(type, index)`` steps from the root, where indices among neighbours of the
  type leading back to the parent skip the parent.
* Colour-word trees: the d-regular tree as the Cayley graph of the free product
  of d copies of C2.  A vertex is a word in colours ``0..d-1`` with no letter
  repeated twice in a row.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .graphs import BallGraph, FiniteGraph, GraphError, barycentric_subdivision
from .perm import identity, inv, mul


class InconclusiveError(RuntimeError):
    """The portrait is too shallow to decide; deepen it and retry."""


# -- typed trees -----------------------------------------------------------

@dataclass(frozen=True)
class EdgeType:
    name: object
    src: object
    dst: object
    count: int


class TypedTree:
    """Homogeneous tree with typed edge ends.

    ``types`` maps a type name to ``(src_kind, dst_kind, count)``: a vertex of
    kind ``src_kind`` has ``count`` neighbours across an edge of this type.
    ``reverse`` maps each type to the type of the same edge seen from the other end.
    """

    def __init__(self, types: dict, reverse: dict):
        self.types = {t: EdgeType(t, *spec) for t, spec in types.items()}
        self.rev = dict(reverse)
        for t, et in self.types.items():
            r = self.rev.get(t)
            if r not in self.types or self.rev.get(r) != t:
                raise GraphError(f"type {t!r} has no consistent reverse")
            if self.types[r].src != et.dst or self.types[r].dst != et.src:
                raise GraphError(f"type {t!r} and its reverse disagree on kinds")
            if et.count < 1:
                raise GraphError(f"type {t!r} needs a positive count")
        self.order = list(self.types)

    def kind_of(self, word, root_kind):
        return self.types[word[-1][0]].dst if word else root_kind

    def degree(self, kind) -> int:
        return sum(et.count for et in self.types.values() if et.src == kind)

    def child_steps(self, word, root_kind):
        """Steps ``(type, index)`` from ``word`` to its children, in canonical order."""
        kind = self.kind_of(word, root_kind)
        back = self.rev[word[-1][0]] if word else None
        out = []
        for t in self.order:
            et = self.types[t]
            if et.src != kind:
                continue
            n = et.count - (1 if t == back else 0)
            out.extend((t, i) for i in range(n))
        return out

    def words(self, root_kind, depth: int, keep: Callable | None = None) -> list[tuple]:
        """BFS list of words up to ``depth`` steps; ``keep(types)`` prunes by type sequence."""
        out = [()]
        head = 0
        while head < len(out):
            w = out[head]
            head += 1
            if len(w) >= depth:
                continue
            for step in self.child_steps(w, root_kind):
                c = w + (step,)
                if keep is None or keep(tuple(t for t, _ in c)):
                    out.append(c)
        return out

    def path_types(self, a, b) -> list:
        """Type sequence of the geodesic from word ``a`` to word ``b``."""
        c = 0
        while c < min(len(a), len(b)) and a[c] == b[c]:
            c += 1
        ups = [self.rev[t] for t, _ in reversed(a[c:])]
        return ups + [t for t, _ in b[c:]]

    def suborbit_from_types(self, seq) -> int:
        """Size of the orbit of the endpoint of a typed path under the start's stabilizer."""
        size = 1
        prev = None
        for t in seq:
            n = self.types[t].count
            if prev is not None and self.rev[prev] == t:
                n -= 1
            size *= n
            prev = t
        return size

    def distance(self, a, b) -> int:
        return len(self.path_types(a, b))


def swap_generators(tree: TypedTree, words: Sequence[tuple], pinned: Iterable = ()):
    """Generators and order of the type-preserving stabilizer of the root on ``words``.

    ``words`` must be prefix-closed and invariant (membership decided by type
    sequence only).  Each generator swaps the subtrees of two consecutive
    same-type children of one vertex; children in ``pinned`` stay put.
    """
    pinned = set(pinned)
    index = {w: i for i, w in enumerate(words)}
    children: dict = {w: [] for w in words}
    for w in words:
        if w:
            children[w[:-1]].append(w)
    subtree: dict = {}
    for w in reversed(words):
        acc = [w]
        for c in children[w]:
            acc.extend(subtree[c])
        subtree[w] = acc
    gens = []
    order = 1
    n = len(words)
    for w in words:
        groups: dict = {}
        for c in children[w]:
            if c not in pinned:
                groups.setdefault(c[-1][0], []).append(c)
        for cs in groups.values():
            order *= math.factorial(len(cs))
            for a, b in zip(cs, cs[1:]):
                img = list(range(n))
                k = len(w)
                for x in subtree[a]:
                    y = x[:k] + (b[-1],) + x[k + 1:]
                    img[index[x]], img[index[y]] = index[y], index[x]
                gens.append(tuple(img))
    return gens, order


# -- colour-word trees ----------------------------------------------------

def reduce_word(word: Iterable[int]) -> tuple:
    out: list = []
    for c in word:
        if out and out[-1] == c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def colour_children(d: int):
    def children(word, depth):
        return [word + (c,) for c in range(d) if not word or word[-1] != c]
    return children


def word_distance(a, b) -> int:
    return len(reduce_word(tuple(reversed(a)) + tuple(b)))


@dataclass(frozen=True)
class WordMap:
    """The automorphism ``x -> u . pi(x)`` of the colour-word tree.

    ``pi`` is a permutation of the colours applied letterwise.  These maps are
    exactly the automorphisms whose local action is ``pi`` at every vertex.
    """

    u: tuple
    pi: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", reduce_word(self.u))

    def __call__(self, x) -> tuple:
        return reduce_word(self.u + tuple(self.pi[c] for c in x))

    def then(self, other: "WordMap") -> "WordMap":
        """First ``self``, then ``other``."""
        return WordMap(other(self.u), mul(self.pi, other.pi))

    def inverse(self) -> "WordMap":
        pinv = inv(self.pi)
        return WordMap(tuple(pinv[c] for c in reversed(self.u)), pinv)

    def power_label(self, x, n: int):
        g = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            x = g(x)
        return x

    @classmethod
    def translation(cls, d: int, length: int) -> "WordMap":
        """A translation of the given length whose axis passes through the empty word."""
        if d < 2 or length < 1:
            raise ValueError("need d >= 2 and length >= 1")
        if length % 2 == 0:
            return cls((0, 1) * (length // 2), identity(d))
        return cls(tuple(i % 2 for i in range(length)), tuple([1, 0] + list(range(2, d))))

    @classmethod
    def rotation(cls, d: int, centre=(), pi=None) -> "WordMap":
        """An elliptic map fixing ``centre`` with local action ``pi`` there (default a d-cycle)."""
        pi = tuple(pi) if pi is not None else tuple((i + 1) % d for i in range(d))
        c = reduce_word(centre)
        # x -> c . pi(c^-1 . x)
        return cls(c + tuple(pi[x] for x in reversed(c)), pi)


@dataclass(frozen=True)
class TypedTranslation:
    """A hyperbolic element of a typed tree, given by the type pattern of one period.

    Only the type sequence of ``alpha g^n`` matters for suborbit sizes, so the
    element is represented by the words obtained by repeating ``pattern`` with
    index 0 at every step.
    """

    tree: TypedTree
    pattern: tuple

    def power_label(self, x, n: int):
        if x != ():
            raise ValueError("typed translations are anchored at the root word")
        if n >= 0:
            seq = self.pattern * n
        else:
            seq = tuple(self.tree.rev[t] for t in reversed(self.pattern)) * (-n)
        return tuple((t, 0) for t in seq)


# -- automorphisms and the Tits trichotomy ---------------------------------

@dataclass(frozen=True)
class AutType:
    kind: str                          # "elliptic" | "inversion" | "translation"
    fixed: frozenset = frozenset()     # elliptic: fixed vertices in the ball
    edge: tuple | None = None          # inversion: the swapped edge
    axis: tuple = ()                   # translation: axis vertices inside the ball, in order
    length: int = 0                    # translation length

    def __str__(self):
        if self.kind == "elliptic":
            return f"Elliptic(fixes {len(self.fixed)} vertices)"
        if self.kind == "inversion":
            return f"Inversion{self.edge}"
        return f"Translation(length={self.length}, axis={list(self.axis)})"


class TreeAutomorphism:
    """A portrait: a partial vertex map on a ball, defined where images stay in the ball."""

    def __init__(self, ball: BallGraph, mapping: dict, declared_type: AutType | None = None):
        self.ball = ball
        self.map = dict(mapping)
        self.declared_type = declared_type
        g = ball.undirected
        if len(set(self.map.values())) != len(self.map):
            raise GraphError("portrait is not injective")
        for u, v in g.edges:
            if u in self.map and v in self.map and not g.has_edge(self.map[u], self.map[v]):
                raise GraphError(f"portrait breaks edge ({u}, {v})")

    @classmethod
    def from_function(cls, ball: BallGraph, f: Callable, declared_type=None):
        idx = ball.index
        mapping = {}
        for i, lab in enumerate(ball.labels):
            y = f(lab)
            if y in idx:
                mapping[i] = idx[y]
        return cls(ball, mapping, declared_type)

    @classmethod
    def from_permutation(cls, ball: BallGraph, perm: Sequence[int]):
        return cls(ball, dict(enumerate(perm)))

    def then(self, other: "TreeAutomorphism") -> "TreeAutomorphism":
        m = {x: other.map[y] for x, y in self.map.items() if y in other.map}
        return TreeAutomorphism(self.ball, m)

    def power(self, n: int) -> "TreeAutomorphism":
        if n < 0:
            base = TreeAutomorphism(self.ball, {v: k for k, v in self.map.items()})
            n = -n
        else:
            base = self
        out = TreeAutomorphism(self.ball, {v: v for v in range(self.ball.n)})
        for _ in range(n):
            out = out.then(base)
        return out

    def to_doc(self) -> dict:
        return {"radius": self.ball.radius, "root": self.ball.root,
                "map": sorted([k, v] for k, v in self.map.items())}


def _geodesic(g: FiniteGraph, a: int, b: int) -> list[int]:
    prev = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in g.neighbours(x):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def classify_automorphism(t: TreeAutomorphism, ball: BallGraph | None = None) -> AutType:
    """Elliptic, inversion or translation, with a witness inside the ball."""
    ball = ball or t.ball
    g = ball.undirected
    m = t.map
    fixed = frozenset(v for v, w in m.items() if v == w)
    if fixed:
        return AutType("elliptic", fixed=fixed)
    for u, v in sorted(g.edges):
        if m.get(u) == v and m.get(v) == u:
            return AutType("inversion", edge=(u, v))
    dist_cache: dict = {}

    def dist(a, b):
        if a not in dist_cache:
            dist_cache[a] = g.distances_from(a)
        return dist_cache[a][b]

    for x in sorted(m, key=lambda v: (ball.dist[v], v)):
        y = m[x]
        z = m.get(y)
        if z is None:
            continue
        s = dist(x, y)
        if s > 0 and dist(x, z) == 2 * s:
            axis = _axis(g, m, x, dist)
            return AutType("translation", axis=tuple(axis), length=s)
    raise InconclusiveError("no fixed vertex, inverted edge or axis witness in the ball; deepen portrait")


def _axis(g, m, x, dist):
    """Axis vertices reachable inside the ball by walking forward and backward from ``x``."""
    minv = {v: k for k, v in m.items()}
    path = [x]
    y = x
    while y in m and m[y] not in path:
        seg = _geodesic(g, y, m[y])
        path.extend(seg[1:])
        y = m[y]
    y = x
    while y in minv and minv[y] not in path:
        seg = _geodesic(g, minv[y], y)
        path = seg[:-1] + path
        y = minv[y]
    return path


@dataclass(frozen=True)
class EllipticProduct:
    result: AutType
    fixed_g: frozenset
    fixed_h: frozenset
    bridge: tuple          # connecting arc between the fixed trees, () if they meet
    bridge_on_axis: bool | None


def product_of_elliptics(g: TreeAutomorphism, h: TreeAutomorphism, ball: BallGraph | None = None
                         ) -> EllipticProduct:
    """Classify ``gh`` (first g, then h) for elliptic g and h.

    If the fixed trees meet the product fixes their common vertices; otherwise it
    is a translation whose axis contains the arc joining the fixed trees.  The
    translation length is measured, not predicted.
    """
    ball = ball or g.ball
    tg, th = classify_automorphism(g, ball), classify_automorphism(h, ball)
    if tg.kind != "elliptic" or th.kind != "elliptic":
        raise ValueError("both factors must be elliptic")
    prod = g.then(h)
    res = classify_automorphism(prod, ball)
    common = tg.fixed & th.fixed
    if common:
        return EllipticProduct(res, tg.fixed, th.fixed, (), None)
    # disjoint in the ball: only conclusive if neither fixed tree may continue outside it
    for f in (tg.fixed, th.fixed):
        if any(not ball.is_interior(v) for v in f):
            raise InconclusiveError("fixed tree touches the ball boundary; deepen portrait")
    gr = ball.undirected
    best = None
    for a in tg.fixed:
        da = gr.distances_from(a)
        for b in th.fixed:
            if best is None or da[b] < best[0]:
                best = (da[b], a, b)
    bridge = tuple(_geodesic(gr, best[1], best[2]))
    on_axis = res.kind == "translation" and set(bridge) <= set(res.axis)
    return EllipticProduct(res, tg.fixed, th.fixed, bridge, on_axis)


def subdivide_automorphism(t: TreeAutomorphism) -> tuple[TreeAutomorphism, BallGraph]:
    """Transport a portrait to the barycentric subdivision of its ball."""
    ball = t.ball
    g = ball.undirected
    sub, mid = barycentric_subdivision(g)
    m = dict(t.map)
    for (u, v), x in mid.items():
        if u in t.map and v in t.map:
            a, b = t.map[u], t.map[v]
            m[x] = mid[(min(a, b), max(a, b))]
    sball = BallGraph(sub, ball.root, 2 * ball.radius)
    return TreeAutomorphism(sball, m), sball
