"""Finite graphs, digraphs, rooted tree balls and derived constructions.

Vertices are always dense integer indices ``0..n-1``.  Balls are numbered in
BFS order from the root so that output is reproducible.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Iterable, Sequence


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGraph:
    """Simple undirected graph: no loops, no multiple edges."""

    n: int
    edges: frozenset

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e} has an endpoint outside 0..{self.n - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Sequence[int]]) -> "FiniteGraph":
        return cls(n, frozenset(tuple(p) for p in pairs))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def arcs(self) -> list[tuple[int, int]]:
        return sorted([(u, v) for u, v in self.edges] + [(v, u) for u, v in self.edges])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def distances_from(self, source: int) -> list[int | None]:
        return _bfs(self.adjacency, source)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return all(d is not None for d in self.distances_from(0))

    def bipartition(self) -> list[int] | None:
        """Return a 0/1 colouring with no monochromatic edge, or None."""
        colour: list[int | None] = [None] * self.n
        for s in range(self.n):
            if colour[s] is not None:
                continue
            colour[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self.adjacency[u]:
                    if colour[v] is None:
                        colour[v] = 1 - colour[u]
                        queue.append(v)
                    elif colour[v] == colour[u]:
                        return None
        return colour  # type: ignore[return-value]


@dataclass(frozen=True)
class FiniteDigraph:
    """Digraph without loops; ``colours`` maps every arc to a label when given."""

    n: int
    arcs: frozenset
    colours: dict | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        for u, v in self.arcs:
            if u == v:
                raise GraphError(f"arc ({u}, {v}) lies on the diagonal")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"arc ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        if self.colours is not None and set(self.colours) != set(self.arcs):
            raise GraphError("arc colours must cover exactly the arc set")

    def __eq__(self, other):
        if not isinstance(other, FiniteDigraph):
            return NotImplemented
        return (self.n, self.arcs, self.colours) == (other.n, other.arcs, other.colours)

    def __hash__(self):
        return hash((self.n, self.arcs))

    @classmethod
    def from_arcs(cls, n, pairs, colours=None) -> "FiniteDigraph":
        pairs = [tuple(p) for p in pairs]
        cmap = None
        if colours is not None:
            cmap = dict(zip(pairs, colours))
        return cls(n, frozenset(pairs), cmap)

    @cached_property
    def out_adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def in_adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def out_neighbours(self, v):
        return self.out_adjacency[v]

    def in_neighbours(self, v):
        return self.in_adjacency[v]

    def colour(self, u, v):
        return None if self.colours is None else self.colours[(u, v)]

    def underlying(self) -> FiniteGraph:
        return FiniteGraph(self.n, frozenset(self.arcs))


@dataclass(frozen=True)
class BallGraph:
    """A rooted radius-``radius`` truncation of an infinite vertex-transitive graph.

    ``labels`` optionally carries model coordinates of each vertex (for tree
    models, reduced words).  Vertices at distance ``< radius`` are interior and
    have the full degree of the modelled graph; boundary vertices may not.
    """

    graph: FiniteGraph | FiniteDigraph
    root: int
    radius: int
    labels: tuple | None = None

    @cached_property
    def undirected(self) -> FiniteGraph:
        g = self.graph
        return g.underlying() if isinstance(g, FiniteDigraph) else g

    @cached_property
    def dist(self) -> tuple[int, ...]:
        d = self.undirected.distances_from(self.root)
        if any(x is None or x > self.radius for x in d):
            raise GraphError("ball contains a vertex farther than its radius")
        return tuple(d)  # type: ignore[arg-type]

    @property
    def n(self) -> int:
        return self.graph.n

    def is_interior(self, v: int) -> bool:
        return self.dist[v] < self.radius

    def interior(self) -> list[int]:
        return [v for v in range(self.n) if self.dist[v] < self.radius]

    def layer(self, k: int) -> list[int]:
        return [v for v in range(self.n) if self.dist[v] == k]

    @cached_property
    def index(self) -> dict:
        if self.labels is None:
            raise GraphError("ball has no vertex labels")
        return {lab: i for i, lab in enumerate(self.labels)}


@dataclass(frozen=True)
class QuotientMap:
    """A partition of ``range(n)`` into blocks."""

    n: int
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(v for c in self.classes for v in c)
        if seen != list(range(self.n)) or any(len(c) == 0 for c in self.classes):
            raise GraphError("classes do not partition the vertex set")

    @classmethod
    def from_labels(cls, labels: Sequence[Hashable]) -> "QuotientMap":
        blocks: dict = {}
        for v, lab in enumerate(labels):
            blocks.setdefault(lab, []).append(v)
        classes = sorted(tuple(b) for b in blocks.values())
        return cls(len(labels), tuple(classes))

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i, c in enumerate(self.classes):
            for v in c:
                out[v] = i
        return tuple(out)

    def dropped_loops(self, g: FiniteGraph) -> list[int]:
        """Classes that contain an edge of ``g``; these loops vanish in the quotient."""
        cls = self.class_of
        return sorted({cls[u] for u, v in g.edges if cls[u] == cls[v]})


def _bfs(adjacency, source):
    dist: list[int | None] = [None] * len(adjacency)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if dist[v] is None:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def ball_from_children(root_label, children: Callable, radius: int, arc_of=None) -> BallGraph:
    """Grow a rooted tree ball by BFS from ``children(label, depth)``.

    ``children`` returns the child labels of a vertex in canonical order.  If
    ``arc_of(parent_label, child_label)`` is given it returns ``(directed,
    colour)`` where ``directed`` is +1 for parent->child, -1 for child->parent,
    and the result is a coloured digraph ball.
    """
    if radius < 0:
        raise GraphError("radius must be non-negative")
    labels = [root_label]
    depth = [0]
    edges = []
    head = 0
    while head < len(labels):
        lab = labels[head]
        if depth[head] < radius:
            for c in children(lab, depth[head]):
                labels.append(c)
                depth.append(depth[head] + 1)
                edges.append((head, len(labels) - 1))
        head += 1
    n = len(labels)
    if arc_of is None:
        graph: FiniteGraph | FiniteDigraph = FiniteGraph.from_edges(n, edges)
    else:
        arcs, colours = [], []
        for p, c in edges:
            direction, colour = arc_of(labels[p], labels[c])
            arcs.append((p, c) if direction > 0 else (c, p))
            colours.append(colour)
        graph = FiniteDigraph.from_arcs(n, arcs, colours)
    return BallGraph(graph, 0, radius, tuple(labels))


def build_tree_ball(degrees, radius: int, root_side: int = 0) -> BallGraph:
    """Rooted ball in the (d, d')-bi-regular tree; ``degrees`` may be an int for T_d.

    ``root_side`` selects which degree the root has (0 -> d, 1 -> d').
    Labels are the child-index paths from the root.
    """
    if isinstance(degrees, int):
        degrees = (degrees, degrees)
    elif len(degrees) == 1 or degrees[1] is None:
        degrees = (degrees[0], degrees[0])
    d0, d1 = degrees
    if d0 < 1 or d1 < 1:
        raise GraphError("degrees must be at least 1")
    if radius < 0:
        raise GraphError("radius must be non-negative")

    def children(path, depth):
        side = (root_side + depth) % 2
        deg = (d0, d1)[side]
        k = deg if depth == 0 else deg - 1
        return [path + (i,) for i in range(k)]

    return ball_from_children((), children, radius)


def line_graph(g: FiniteGraph) -> FiniteGraph:
    """Vertices are the edges of ``g`` in sorted order; adjacent iff they share an endpoint."""
    edges = sorted(g.edges)
    at: dict[int, list[int]] = {}
    for i, (u, v) in enumerate(edges):
        at.setdefault(u, []).append(i)
        at.setdefault(v, []).append(i)
    out = set()
    for inc in at.values():
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                out.add((inc[a], inc[b]))
    return FiniteGraph(len(edges), frozenset(out))


def barycentric_subdivision(g: FiniteGraph) -> tuple[FiniteGraph, dict]:
    """Subdivide every edge; returns the new graph and ``edge -> midpoint vertex``."""
    edges = sorted(g.edges)
    mid = {e: g.n + i for i, e in enumerate(edges)}
    new = []
    for (u, v), m in mid.items():
        new += [(u, m), (m, v)]
    return FiniteGraph.from_edges(g.n + len(edges), new), mid


def cartesian_product_digraph(factors: Sequence[FiniteDigraph]) -> FiniteDigraph:
    """Arcs move exactly one coordinate along a factor arc; colour = factor index.

    Vertex ``i`` corresponds to ``itertools.product`` position ``i`` of the factor
    vertex ranges.
    """
    if not factors:
        raise GraphError("need at least one factor")
    sizes = [f.n for f in factors]
    coords = list(product(*[range(s) for s in sizes]))
    index = {c: i for i, c in enumerate(coords)}
    arcs, colours = [], []
    for c in coords:
        for k, f in enumerate(factors):
            for w in f.out_neighbours(c[k]):
                d = c[:k] + (w,) + c[k + 1:]
                arcs.append((index[c], index[d]))
                colours.append(k)
    return FiniteDigraph.from_arcs(len(coords), arcs, colours)


def quotient_graph(g: FiniteGraph, q: QuotientMap) -> FiniteGraph:
    if q.n != g.n:
        raise GraphError("partition size does not match graph")
    cls = q.class_of
    edges = {(cls[u], cls[v]) for u, v in g.edges if cls[u] != cls[v]}
    return FiniteGraph.from_edges(len(q.classes), edges)


def enumerate_s_arcs(g: FiniteGraph | FiniteDigraph, s: int, start: int | None = None):
    """All s-arcs (optionally from ``start``): walks without immediate backtracking."""
    if s < 0:
        raise GraphError("s must be non-negative")
    nbrs = g.out_adjacency if isinstance(g, FiniteDigraph) else g.adjacency
    walks = [(v,) for v in (range(g.n) if start is None else [start])]
    for _ in range(s):
        walks = [w + (x,) for w in walks for x in nbrs[w[-1]]
                 if len(w) < 2 or x != w[-2]]
    return walks


# -- JSON document format -------------------------------------------------

def graph_to_json(obj: FiniteGraph | FiniteDigraph | BallGraph) -> str:
    doc: dict = {}
    g = obj.graph if isinstance(obj, BallGraph) else obj
    doc["vertices"] = g.n
    if isinstance(g, FiniteDigraph):
        arcs = sorted(g.arcs)
        doc["arcs"] = [list(a) for a in arcs]
        if g.colours is not None:
            doc["colours"] = [_label_to_json(g.colours[a]) for a in arcs]
    else:
        doc["edges"] = [list(e) for e in sorted(g.edges)]
    if isinstance(obj, BallGraph):
        doc["root"] = obj.root
        doc["radius"] = obj.radius
        if obj.labels is not None:
            doc["labels"] = [_label_to_json(x) for x in obj.labels]
    return json.dumps(doc, sort_keys=True)


def graph_from_json(text: str):
    doc = json.loads(text)
    n = doc["vertices"]
    if "arcs" in doc:
        g: FiniteGraph | FiniteDigraph = FiniteDigraph.from_arcs(
            n, doc["arcs"],
            None if doc.get("colours") is None else [_label_from_json(c) for c in doc["colours"]])
    else:
        g = FiniteGraph.from_edges(n, doc.get("edges", []))
    if "root" in doc:
        labels = doc.get("labels")
        if labels is not None:
            labels = tuple(_label_from_json(x) for x in labels)
        return BallGraph(g, doc["root"], doc["radius"], labels)
    return g


def _label_to_json(x):
    if isinstance(x, tuple):
        return [_label_to_json(y) for y in x]
    return x


def _label_from_json(x):
    if isinstance(x, list):
        return tuple(_label_from_json(y) for y in x)
    return x
