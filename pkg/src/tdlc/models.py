"""Group models: a t.d.l.c. group together with a designated Cayley-Abels graph.

Every model answers the same questions exactly:

* ``canonical_cayley_abels(r)``: the radius-``r`` ball of its graph, vertices
  labelled by model coordinates;
* ``stabilizer_in_ball(r)``: the vertex stabilizer of the root, restricted to
  that ball, as a permutation group;
* ``suborbit_between(a, b)``: the size of the orbit of ``b`` under the
  stabilizer of ``a`` (closed formulas on the coordinates);
* ``arc_key(a, b)``: a name for the orbit of the arc ``(a, b)``.

The tree models have the extension property (any automorphism of a ball that
respects the local data extends to the whole tree), so orbits of the ball
stabilizer are the true suborbits.
"""
from __future__ import annotations

import json
import math
from collections import deque
from typing import Sequence

from .graphs import BallGraph, FiniteDigraph, FiniteGraph, GraphError, ball_from_children
from .perm import (PermGroup, PermGroupError, group_from_doc, identity, induced_action,
                   mul, named_group, orbit_of_items, point_stabilizer)
from .trees import TypedTree, colour_children, reduce_word, swap_generators

MAX_BALL_VERTICES = 250_000
MAX_GROUP_POINTS = 6_000


class ModelError(ValueError):
    pass


class BallTooLarge(ModelError):
    pass


def _check_size(n: int, limit: int, what: str):
    if n > limit:
        raise BallTooLarge(f"{what} has {n} vertices, above the bound {limit}; lower the radius")


def _rooted_ball(n: int, edges, root: int, labels: Sequence, radius: int,
                 arcs=None, colours=None) -> tuple[BallGraph, list[int]]:
    """Renumber a graph in BFS order from ``root``; returns the ball and old->new."""
    adj = [[] for _ in range(n)]
    pairs = edges if arcs is None else arcs
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    order = [root]
    new = [-1] * n
    new[root] = 0
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for y in sorted(adj[x]):
            if new[y] < 0:
                new[y] = len(order)
                order.append(y)
    if len(order) != n:
        raise GraphError("model region is disconnected")
    labs = tuple(labels[x] for x in order)
    if arcs is None:
        g = FiniteGraph.from_edges(n, [(new[u], new[v]) for u, v in edges])
    else:
        g = FiniteDigraph.from_arcs(n, [(new[u], new[v]) for u, v in arcs], colours)
    return BallGraph(g, 0, radius, labs), new


def _renumber(perms, new: list[int]):
    out = []
    for p in perms:
        img = [0] * len(new)
        for i, j in enumerate(p):
            img[new[i]] = new[j]
        out.append(tuple(img))
    return out


class GroupModel:
    family = "abstract"

    def __init__(self):
        self._balls: dict = {}
        self._stabs: dict = {}

    # subclasses implement these
    def _build_ball(self, r: int) -> BallGraph:
        raise NotImplementedError

    def _build_stabilizer(self, r: int, ball: BallGraph) -> PermGroup:
        raise NotImplementedError

    def suborbit_between(self, a, b) -> int:
        raise NotImplementedError

    def arc_key(self, a, b):
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    @property
    def degree(self) -> int:
        raise NotImplementedError

    def distance(self, a, b) -> int:
        raise NotImplementedError

    is_compact = False

    # shared behaviour
    def canonical_cayley_abels(self, r: int) -> BallGraph:
        if r < 0:
            raise ModelError("radius must be non-negative")
        if r not in self._balls:
            self._balls[r] = self._build_ball(r)
        return self._balls[r]

    def stabilizer_in_ball(self, r: int) -> PermGroup:
        if r not in self._stabs:
            ball = self.canonical_cayley_abels(r)
            _check_size(ball.n, MAX_GROUP_POINTS, "stabilizer ball")
            self._stabs[r] = self._build_stabilizer(r, ball)
        return self._stabs[r]

    def local_action(self) -> PermGroup:
        ball = self.canonical_cayley_abels(1)
        G = self.stabilizer_in_ball(1)
        nbrs = ball.undirected.neighbours(ball.root)
        image, _ = induced_action(G, nbrs)
        return image

    def to_spec(self) -> dict:
        return {"family": self.family, **self.params()}

    def __repr__(self):
        return f"{type(self).__name__}({json.dumps(self.params(), sort_keys=True)})"

    def __eq__(self, other):
        return isinstance(other, GroupModel) and self.to_spec() == other.to_spec()

    def __hash__(self):
        return hash(json.dumps(self.to_spec(), sort_keys=True))


# -- Burger-Mozes universal groups and the full automorphism group ---------

class BMUniversal(GroupModel):
    """U(F) on the d-regular tree with a legal colouring; F transitive on d points."""

    family = "bm_universal"

    def __init__(self, F: PermGroup, name: str | None = None):
        super().__init__()
        if F.degree < 2:
            raise ModelError("F must act on at least 2 points")
        if not F.is_transitive():
            raise ModelError("F must be transitive")
        self.F = F
        self.name = name
        self.d = F.degree
        d = self.d
        # trans[a][b]: an element of F taking a to b, identity when a == b
        self.trans = []
        for a in range(d):
            t = {a: identity(d)}
            queue = deque([a])
            while queue:
                x = queue.popleft()
                for g in F.generators:
                    y = g[x]
                    if y not in t:
                        t[y] = mul(t[x], g)
                        queue.append(y)
            self.trans.append(t)
        self.stab = [point_stabilizer(F, c) for c in range(d)]
        self.stab_orbit = [[len(self.stab[c].orbit(x)) for x in range(d)] for c in range(d)]

    def params(self):
        if self.name:
            return {"F": self.name}
        return {"F": {"points": self.F.degree, "generators": [list(g) for g in self.F.generators]}}

    @property
    def degree(self):
        return self.d

    def distance(self, a, b):
        return len(reduce_word(tuple(reversed(a)) + tuple(b)))

    def _build_ball(self, r):
        count = sum(self.d * (self.d - 1) ** (k - 1) for k in range(1, r + 1)) + 1
        _check_size(count, MAX_BALL_VERTICES, "ball")
        return ball_from_children((), colour_children(self.d), r)

    def word_suborbit(self, w) -> int:
        if not w:
            return 1
        size = self.d
        for a, b in zip(w, w[1:]):
            size *= self.stab_orbit[a][b]
        return size

    def suborbit_between(self, a, b):
        return self.word_suborbit(reduce_word(tuple(reversed(a)) + tuple(b)))

    def arc_key(self, a, b):
        return "edge"

    def _build_stabilizer(self, r, ball):
        labels = ball.labels
        index = ball.index
        n = ball.n
        d = self.d
        idd = identity(d)
        gens = []

        def realise(v, h):
            sigma = {}
            img = [0] * n
            for i, x in enumerate(labels):
                if not x:
                    img[i] = i
                    s = h if v == () else idd
                else:
                    y, c = x[:-1], x[-1]
                    sy = sigma[y]
                    img[i] = index[labels[img[index[y]]] + (sy[c],)]
                    s = h if x == v else self.trans[c][sy[c]]
                if len(x) < r:
                    sigma[x] = s
            return tuple(img)

        if r >= 1:
            for f in self.F.generators:
                gens.append(realise((), f))
            for x in labels:
                if 0 < len(x) < r:
                    for h in self.stab[x[-1]].generators:
                        gens.append(realise(x, h))
        inner = sum(1 for x in labels if 0 < len(x) < r)
        order = (self.F.order() * self.stab[0].order() ** inner) if r >= 1 else 1
        return PermGroup(n, gens, order=order)


class FullAut(BMUniversal):
    """Aut(T_d), realised as U(S_d)."""

    family = "full_aut"

    def __init__(self, d: int):
        if d < 2:
            raise ModelError("d must be at least 2")
        super().__init__(PermGroup.symmetric(d), name=f"S{d}")

    def params(self):
        return {"d": self.d}

    def closed_form_suborbit(self, k: int) -> int:
        return 1 if k == 0 else self.d * (self.d - 1) ** (k - 1)


# -- typed-tree models ------------------------------------------------------

class _TypedModel(GroupModel):
    tree: TypedTree
    root_kind = "v"

    def distance(self, a, b):
        return self.tree.distance(a, b)

    def suborbit_between(self, a, b):
        return self.tree.suborbit_from_types(self.tree.path_types(a, b))


class DirectedTree(_TypedModel):
    """Colour-preserving automorphisms of a directed tree with arc colours.

    Every vertex has ``out[c]`` outgoing and ``inn[c]`` incoming arcs of colour c.
    ``DirectedTree({0: p}, {0: q})`` is the out-p / in-q tree; the red-blue tree
    has ``out = {"red": p, "blue": q}`` and one incoming arc of each colour.
    """

    family = "directed_tree"

    def __init__(self, out: dict, inn: dict):
        super().__init__()
        out = {str(c): int(k) for c, k in out.items() if int(k) > 0}
        inn = {str(c): int(k) for c, k in inn.items() if int(k) > 0}
        if set(out) != set(inn):
            raise ModelError("every colour needs both incoming and outgoing arcs")
        if not out:
            raise ModelError("at least one colour is needed")
        self.out, self.inn = out, inn
        types, rev = {}, {}
        for c in sorted(out):
            types[("out", c)] = ("v", "v", out[c])
            types[("in", c)] = ("v", "v", inn[c])
            rev[("out", c)] = ("in", c)
            rev[("in", c)] = ("out", c)
        self.tree = TypedTree(types, rev)
        self.colours = sorted(out)

    @classmethod
    def red_blue(cls, p: int, q: int) -> "DirectedTree":
        return cls({"red": p, "blue": q}, {"red": 1, "blue": 1})

    @classmethod
    def out_in(cls, p: int, q: int) -> "DirectedTree":
        return cls({"arc": p}, {"arc": q})

    def params(self):
        return {"out": dict(sorted(self.out.items())), "in": dict(sorted(self.inn.items()))}

    @property
    def degree(self):
        return sum(self.out.values()) + sum(self.inn.values())

    @property
    def out_degree(self):
        return sum(self.out.values())

    @property
    def in_degree(self):
        return sum(self.inn.values())

    def _words(self, r, keep=None):
        deg = self.degree
        count = 1 + sum(deg * (deg - 1) ** (k - 1) for k in range(1, r + 1))
        if keep is None:
            _check_size(count, MAX_BALL_VERTICES, "ball")
        return self.tree.words(self.root_kind, r, keep)

    def _digraph_ball(self, words, r):
        idx = {w: i for i, w in enumerate(words)}
        arcs, colours = [], []
        for w in words[1:]:
            p, (t, _) = idx[w[:-1]], w[-1]
            arcs.append((p, idx[w]) if t[0] == "out" else (idx[w], p))
            colours.append(t[1])
        return BallGraph(FiniteDigraph.from_arcs(len(words), arcs, colours), 0, r, tuple(words))

    def _build_ball(self, r):
        return self._digraph_ball(self._words(r), r)

    def _build_stabilizer(self, r, ball):
        gens, order = swap_generators(self.tree, list(ball.labels))
        return PermGroup(ball.n, gens, order=order)

    def arc_key(self, a, b):
        seq = self.tree.path_types(a, b)
        if len(seq) != 1:
            raise ModelError("not an arc")
        return seq[0]

    def descendants(self, s: int):
        """Ball of vertices reached by directed paths of length <= s, with its stabilizer."""
        words = self._words(s, keep=lambda types: types[-1][0] == "out")
        ball = self._digraph_ball(words, s)
        _check_size(ball.n, MAX_GROUP_POINTS * 4, "descendant ball")
        gens, order = swap_generators(self.tree, words)
        return ball, PermGroup(ball.n, gens, order=order)


class EndStab(_TypedModel):
    """Stabilizer of an end in the type-preserving automorphisms of T_{d,d'}.

    Its Cayley-Abels graph is the derived tree: vertices are the degree-d
    vertices, joined when they lie two steps apart along a ray to the end.
    Coordinates are typed words in T_{d,d'} whose steps go up (toward the
    end) or down.
    """

    family = "end_stab"
    root_kind = "A"

    def __init__(self, d: int, d2: int):
        super().__init__()
        self._derived_cache: dict = {}
        if d < 2 or d2 < 2:
            raise ModelError("end stabilizers need d, d' >= 2")
        self.d, self.d2 = d, d2
        self.tree = TypedTree(
            {("up", "A"): ("A", "B", 1), ("down", "A"): ("A", "B", d - 1),
             ("up", "B"): ("B", "A", 1), ("down", "B"): ("B", "A", d2 - 1)},
            {("up", "A"): ("down", "B"), ("down", "B"): ("up", "A"),
             ("down", "A"): ("up", "B"), ("up", "B"): ("down", "A")})

    def params(self):
        return {"d": self.d, "d2": self.d2}

    @property
    def degree(self):
        return (self.d - 1) * (self.d2 - 1) + 1

    @staticmethod
    def _shape(types):
        ups = sum(1 for t in types if t[0] == "up")
        return ups, len(types) - ups

    @staticmethod
    def derived_distance(ups: int, downs: int) -> int:
        return (ups + 1) // 2 + (downs + 1) // 2

    def distance(self, a, b):
        u, m = self._shape(self.tree.path_types(a, b))
        return self.derived_distance(u, m)

    def _region(self, r):
        dd = self.derived_distance

        def keep(types):
            u, m = self._shape(types)
            if (u + m) % 2 == 0:
                return dd(u, m) <= r
            # B vertex: keep when at least two of its A-neighbours are kept
            if m == 0:
                nbrs = [((u + 1, 0), 1), ((u - 1, 0), 1), ((u, 1), self.d2 - 2)]
            else:
                nbrs = [((u, m - 1), 1), ((u, m + 1), self.d2 - 1)]
            return sum(k for (a, b), k in nbrs if dd(a, b) <= r) >= 2

        est = 1 + sum(self.degree * (self.degree - 1) ** (k - 1) for k in range(1, r + 1))
        _check_size(est, MAX_BALL_VERTICES, "derived ball")
        return self.tree.words("A", 2 * r + 1, keep)

    def _derived(self, r):
        if r in self._derived_cache:
            return self._derived_cache[r]
        words = self._region(r)
        tkind = self.tree.kind_of
        a_pos = [i for i, w in enumerate(words) if tkind(w, "A") == "A"]
        idx = {w: i for i, w in enumerate(words)}
        kids: dict = {}
        for w in words[1:]:
            kids.setdefault(w[:-1], []).append(w)
        edges = []
        for w in words:
            if tkind(w, "A") != "B":
                continue
            if w[-1][0] == ("up", "A"):
                up = [c for c in kids.get(w, []) if c[-1][0] == ("up", "B")]
                downs = [w[:-1]] + [c for c in kids.get(w, []) if c[-1][0] == ("down", "B")]
            else:
                up = [w[:-1]]
                downs = kids.get(w, [])
            for a in up:
                for b in downs:
                    edges.append((idx[a], idx[b]))
        local = {p: i for i, p in enumerate(a_pos)}
        edges = [(local[a], local[b]) for a, b in edges]
        ball, new = _rooted_ball(len(a_pos), edges, 0, [words[p] for p in a_pos], r)
        self._derived_cache[r] = (words, a_pos, ball, new)
        return self._derived_cache[r]

    def _build_ball(self, r):
        return self._derived(r)[2]

    def _build_stabilizer(self, r, ball):
        words, a_pos, _, new = self._derived(r)
        gens, order = swap_generators(self.tree, words)
        local = {p: i for i, p in enumerate(a_pos)}
        restricted = [tuple(local[g[p]] for p in a_pos) for g in gens]
        return PermGroup(ball.n, _renumber(restricted, new), order=order)

    def arc_key(self, a, b):
        seq = self.tree.path_types(a, b)
        if len(seq) != 2 or (seq[0][0] != seq[1][0]):
            raise ModelError("not an arc of the derived tree")
        return "toward_end" if seq[0][0] == "up" else "away_from_end"


class AutPlus(_TypedModel):
    """Type-preserving automorphisms of the (d, d2)-bi-regular tree, acting on edges.

    The Cayley-Abels graph is the line graph.  Vertices are tree edges, named by
    the word of their endpoint farther from the root vertex u; the root edge is
    ``{u, v}`` with ``v`` the first child of u.
    """

    family = "aut_plus"
    root_kind = "A"

    def __init__(self, d: int, d2: int | None = None):
        super().__init__()
        d2 = d if d2 is None else d2
        if d < 2 or d2 < 2:
            raise ModelError("aut_plus needs degrees >= 2")
        self.d, self.d2 = d, d2
        self.tree = TypedTree({"AB": ("A", "B", d), "BA": ("B", "A", d2)}, {"AB": "BA", "BA": "AB"})
        self.root_edge = (("AB", 0),)

    def params(self):
        return {"d": self.d, "d2": self.d2}

    @property
    def degree(self):
        return self.d + self.d2 - 2

    def _edge_dist(self, w):
        return len(w) - 1 if w[:1] == self.root_edge else len(w)

    def _region(self, r):
        est = 2 * (1 + sum(max(self.d, self.d2) ** k for k in range(1, r + 2)))
        _check_size(est, MAX_BALL_VERTICES, "line-graph ball")
        words = self.tree.words("A", r + 1)
        return [w for w in words if not w or self._edge_dist(w) <= r]

    def _line(self, r):
        words = self._region(r)
        edges_w = [w for w in words if w]
        pos = {w: i for i, w in enumerate(edges_w)}
        at_vertex: dict = {}
        for w in edges_w:
            at_vertex.setdefault(w[:-1], []).append(w)
            at_vertex.setdefault(w, []).append(w)
        adj = set()
        for inc in at_vertex.values():
            for i, a in enumerate(inc):
                for b in inc[i + 1:]:
                    adj.add((pos[a], pos[b]))
        # keep edges within line distance r
        ball, new = _rooted_ball(len(edges_w), sorted(adj), pos[self.root_edge], edges_w, r)
        return words, edges_w, ball, new

    def _build_ball(self, r):
        return self._line(r)[2]

    def _build_stabilizer(self, r, ball):
        words, edges_w, _, new = self._line(r)
        gens, order = swap_generators(self.tree, words, pinned=[self.root_edge])
        widx = {w: i for i, w in enumerate(words)}
        eidx = {w: i for i, w in enumerate(edges_w)}
        restricted = [tuple(eidx[words[g[widx[w]]]] for w in edges_w) for g in gens]
        return PermGroup(ball.n, _renumber(restricted, new), order=order)

    def _vertex_degree(self, w):
        return self.d if self.tree.kind_of(w, "A") == "A" else self.d2

    def suborbit_between(self, a, b):
        if a == b:
            return 1
        ends_a, ends_b = (a[:-1], a), (b[:-1], b)
        best = min(((self.tree.distance(x, y), x, y) for x in ends_a for y in ends_b),
                   key=lambda t: t[0])
        _, x, y = best
        path = _word_path(x, y)
        return math.prod(self._vertex_degree(z) - 1 for z in path)

    def distance(self, a, b):
        if a == b:
            return 0
        return 1 + min(self.tree.distance(x, y) for x in (a[:-1], a) for y in (b[:-1], b))

    def arc_key(self, a, b):
        shared = {a[:-1], a} & {b[:-1], b}
        if len(shared) != 1 or a == b:
            raise ModelError("not an arc of the line graph")
        return "via_" + self.tree.kind_of(shared.pop(), "A")


def _word_path(x, y):
    c = 0
    while c < min(len(x), len(y)) and x[c] == y[c]:
        c += 1
    up = [x[:k] for k in range(len(x), c - 1, -1)]
    down = [y[:k] for k in range(c + 1, len(y) + 1)]
    return up + down


# -- finite groups and products ---------------------------------------------

class FiniteOracle(GroupModel):
    """A finite group acting vertex-transitively on a finite connected graph."""

    family = "finite_oracle"
    is_compact = True

    def __init__(self, G: PermGroup, graph: FiniteGraph):
        super().__init__()
        if G.degree != graph.n:
            raise ModelError("group and graph have different vertex counts")
        if not graph.is_connected():
            raise ModelError("graph must be connected")
        for g in G.generators:
            for u, v in graph.edges:
                if not graph.has_edge(g[u], g[v]):
                    raise ModelError("group does not act by graph automorphisms")
        if graph.n and not G.is_transitive():
            raise ModelError("group must be vertex-transitive")
        self.G, self.graph = G, graph
        arcs = graph.arcs()
        self._arc_orbit = {}
        for k, o in enumerate(sorted(orbit_of_items(arcs, G.generators, lambda a, g: (g[a[0]], g[a[1]])),
                                     key=min)):
            for a in o:
                self._arc_orbit[a] = k
        self._stab_orbits: dict = {}

    def params(self):
        return {"group": {"points": self.G.degree, "generators": [list(g) for g in self.G.generators]},
                "graph": {"vertices": self.graph.n, "edges": sorted(list(e) for e in self.graph.edges)}}

    @property
    def degree(self):
        return self.graph.degree(0) if self.graph.n else 0

    def distance(self, a, b):
        return self.graph.distances_from(a)[b]

    def _build_ball(self, r):
        dist = self.graph.distances_from(0)
        keep = [v for v in range(self.graph.n) if dist[v] <= r]
        local = {v: i for i, v in enumerate(keep)}
        edges = [(local[u], local[v]) for u, v in self.graph.edges if u in local and v in local]
        ball, _ = _rooted_ball(len(keep), edges, 0, keep, r)
        return ball

    def _build_stabilizer(self, r, ball):
        H = point_stabilizer(self.G, 0)
        pts = list(ball.labels)
        index = {v: i for i, v in enumerate(pts)}
        gens = [tuple(index[g[v]] for v in pts) for g in H.generators]
        return PermGroup(ball.n, gens)

    def suborbit_between(self, a, b):
        if a not in self._stab_orbits:
            self._stab_orbits[a] = point_stabilizer(self.G, a)
        return len(self._stab_orbits[a].orbit(b))

    def arc_key(self, a, b):
        return self._arc_orbit[(a, b)]


class ProductWithFinite(GroupModel):
    """``base x F`` with the finite factor F in the kernel of the action on the graph."""

    family = "product_finite"

    def __init__(self, base: GroupModel, F: PermGroup):
        super().__init__()
        self.base, self.F = base, F
        self.is_compact = base.is_compact

    def params(self):
        return {"base": self.base.to_spec(),
                "F": {"points": self.F.degree, "generators": [list(g) for g in self.F.generators]}}

    @property
    def degree(self):
        return self.base.degree

    def distance(self, a, b):
        return self.base.distance(a, b)

    def canonical_cayley_abels(self, r):
        return self.base.canonical_cayley_abels(r)

    def stabilizer_in_ball(self, r):
        return self.base.stabilizer_in_ball(r)

    def suborbit_between(self, a, b):
        return self.base.suborbit_between(a, b)

    def arc_key(self, a, b):
        return self.base.arc_key(a, b)


class DirectedProduct(GroupModel):
    """Product of directed-tree groups acting on the Cartesian product digraph."""

    family = "directed_product"

    def __init__(self, factors: Sequence[DirectedTree]):
        super().__init__()
        if not factors:
            raise ModelError("need at least one factor")
        self.factors = list(factors)

    def params(self):
        return {"factors": [f.to_spec() for f in self.factors]}

    @property
    def degree(self):
        return sum(f.degree for f in self.factors)

    def distance(self, a, b):
        return sum(f.distance(x, y) for f, x, y in zip(self.factors, a, b))

    def _build_ball(self, r):
        balls = [f.canonical_cayley_abels(r) for f in self.factors]
        start = tuple(() for _ in self.factors)
        labels, index = [start], {start: 0}
        arcs, colours = [], []
        head = 0
        depth = {start: 0}
        while head < len(labels):
            x = labels[head]
            head += 1
            if depth[x] >= r:
                continue
            for i, (f, b) in enumerate(zip(self.factors, balls)):
                for y_i in f.tree.child_steps(x[i], f.root_kind):
                    y_w = x[i] + (y_i,)
                    if len(y_w) > r:
                        continue
                    y = x[:i] + (y_w,) + x[i + 1:]
                    if y in index:
                        continue
                    index[y] = len(labels)
                    labels.append(y)
                    depth[y] = depth[x] + 1
            _check_size(len(labels), MAX_BALL_VERTICES, "product ball")
        for y in labels:
            for i, f in enumerate(self.factors):
                if y[i]:
                    x = y[:i] + (y[i][:-1],) + y[i + 1:]
                    t = y[i][-1][0]
                    u, v = index[x], index[y]
                    arcs.append((u, v) if t[0] == "out" else (v, u))
                    colours.append((i, t[1]))
        return BallGraph(FiniteDigraph.from_arcs(len(labels), arcs, colours), 0, r, tuple(labels))

    def _build_stabilizer(self, r, ball):
        gens, order = [], 1
        for i, f in enumerate(self.factors):
            fb = f.canonical_cayley_abels(r)
            fg, fo = swap_generators(f.tree, list(fb.labels))
            order *= fo
            for g in fg:
                img = []
                for lab in ball.labels:
                    w = fb.labels[g[fb.index[lab[i]]]]
                    img.append(ball.index[lab[:i] + (w,) + lab[i + 1:]])
                gens.append(tuple(img))
        return PermGroup(ball.n, gens, order=order)

    def suborbit_between(self, a, b):
        return math.prod(f.suborbit_between(x, y) for f, x, y in zip(self.factors, a, b))

    def arc_key(self, a, b):
        moved = [i for i in range(len(self.factors)) if a[i] != b[i]]
        if len(moved) != 1:
            raise ModelError("not an arc")
        i = moved[0]
        return (i, self.factors[i].arc_key(a[i], b[i]))


# -- spec documents -----------------------------------------------------------

FAMILIES = ("full_aut", "aut_plus", "end_stab", "bm_universal", "finite_oracle",
            "product_finite", "directed_tree", "directed_product")


def _group(doc) -> PermGroup:
    if isinstance(doc, str):
        return named_group(doc)
    return group_from_doc(doc)


def model_from_spec(doc: dict) -> GroupModel:
    """Build a model from a group-spec document ``{"family": ..., parameters...}``."""
    if not isinstance(doc, dict) or "family" not in doc:
        raise ModelError("group spec must be an object with a 'family' field")
    fam = doc["family"]
    try:
        if fam == "full_aut":
            return FullAut(int(doc["d"]))
        if fam == "aut_plus":
            return AutPlus(int(doc["d"]), int(doc["d2"]) if doc.get("d2") is not None else None)
        if fam == "end_stab":
            return EndStab(int(doc["d"]), int(doc.get("d2", doc["d"])))
        if fam == "bm_universal":
            F = doc["F"]
            return BMUniversal(_group(F), name=F if isinstance(F, str) else None)
        if fam == "finite_oracle":
            g = doc["graph"]
            return FiniteOracle(_group(doc["group"]), FiniteGraph.from_edges(g["vertices"], g["edges"]))
        if fam == "product_finite":
            return ProductWithFinite(model_from_spec(doc["base"]), _group(doc["F"]))
        if fam == "directed_tree":
            # a bare integer means a single arc colour
            out, inn = ({"arc": x} if isinstance(x, int) else x for x in (doc["out"], doc["in"]))
            return DirectedTree(out, inn)
        if fam == "directed_product":
            facs = [model_from_spec(f) for f in doc["factors"]]
            if not all(isinstance(f, DirectedTree) for f in facs):
                raise ModelError("directed_product factors must be directed trees")
            return DirectedProduct(facs)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ModelError(f"bad parameters for family {fam!r}: {exc}") from exc
    except (PermGroupError, GraphError) as exc:
        raise ModelError(str(exc)) from exc
    raise ModelError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")


# -- module-level operations ---------------------------------------------------

def canonical_cayley_abels(m: GroupModel, r: int) -> BallGraph:
    return m.canonical_cayley_abels(r)


def stabilizer_in_ball(m: GroupModel, r: int) -> PermGroup:
    return m.stabilizer_in_ball(r)


def local_action(m: GroupModel) -> PermGroup:
    return m.local_action()


def suborbit_size(m: GroupModel, alpha: int, beta: int, r: int) -> int:
    """Exact ``|beta G_alpha|`` for two vertices of the radius-``r`` canonical ball."""
    ball = m.canonical_cayley_abels(r)
    for v in (alpha, beta):
        if not 0 <= v < ball.n:
            raise ModelError(f"vertex {v} is not in the radius-{r} ball")
    a, b = ball.labels[alpha], ball.labels[beta]
    if m.distance(a, b) > r:
        raise ModelError(f"vertices are {m.distance(a, b)} apart, beyond radius {r}")
    return m.suborbit_between(a, b)
