"""Finite reflexive graphs: constructors, box products, pullbacks, connected
components, and breadth-first search for bounded graph homotopies.

Vertices carry an implicit loop; adjacency queries answer True on equal
vertices even though loops are never stored.  A homotopy step between two
graph maps is pointwise adjacency of their assignments; the equivalence of
this with the interleaved map on the box cylinder being a graph map is a
tested lemma (see tests), not an assumption.
"""

from __future__ import annotations

import itertools
from collections import deque


def _freeze(value):
    """JSON arrays as vertex names become tuples (hashable)."""
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


class Graph:
    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        vset = set(self.vertices)
        self.adj = {v: set() for v in self.vertices}
        for u, v in edges:
            if u not in vset or v not in vset:
                raise ValueError(f"edge endpoint not a vertex: {(u, v)!r}")
            if u != v:
                self.adj[u].add(v)
                self.adj[v].add(u)

    def adjacent(self, u, v):
        return u == v or v in self.adj[u]

    def edges(self):
        """Non-loop edges as ordered pairs (u, v) with u before v."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for u in self.vertices:
            for v in sorted(self.adj[u], key=lambda w: pos[w]):
                if pos[u] < pos[v]:
                    out.append((u, v))
        return out

    def neighbors(self, v):
        """Closed neighborhood, v first, then stored order."""
        pos = {w: i for i, w in enumerate(self.vertices)}
        return [v] + sorted(self.adj[v], key=lambda w: pos[w])

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges()],
        }

    @staticmethod
    def from_json(data):
        return Graph(
            [_freeze(v) for v in data["vertices"]],
            [(_freeze(e[0]), _freeze(e[1])) for e in data["edges"]],
        )

    def __repr__(self):
        return f"Graph({len(self.vertices)}v,{len(self.edges())}e)"


def interval(n):
    if n < 0:
        raise ValueError("interval length must be >= 0")
    return Graph(range(n + 1), [(i, i + 1) for i in range(n)])


def cycle(n):
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


class GraphMap:
    def __init__(self, source, target, assignment):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)

    def __call__(self, v):
        return self.assignment[v]

    def validate(self):
        for v in self.source.vertices:
            if v not in self.assignment:
                raise ValueError(f"no value for vertex {v!r}")
            if self.assignment[v] not in self.target.adj:
                raise ValueError(f"value not a target vertex at {v!r}")
        for u, v in self.source.edges():
            if not self.target.adjacent(self.assignment[u], self.assignment[v]):
                raise ValueError(f"edge {(u, v)!r} not preserved")
        return True

    def is_valid(self):
        try:
            return self.validate()
        except ValueError:
            return False

    def compose(self, other):
        return GraphMap(
            other.source,
            self.target,
            {v: self.assignment[w] for v, w in other.assignment.items()},
        )

    def __eq__(self, other):
        return isinstance(other, GraphMap) and self.assignment == other.assignment

    def __hash__(self):
        return hash(tuple(sorted(self.assignment.items(), key=repr)))

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "assignment": [
                [v, self.assignment[v]] for v in self.source.vertices
            ],
        }

    @staticmethod
    def from_json(data):
        source = Graph.from_json(data["source"])
        target = Graph.from_json(data["target"])
        assignment = {
            _freeze(v): _freeze(w) for v, w in data["assignment"]
        }
        return GraphMap(source, target, assignment)


def graph_identity(X):
    return GraphMap(X, X, {v: v for v in X.vertices})


def constant_map(X, Y, y):
    return GraphMap(X, Y, {v: y for v in X.vertices})


def box_product(X, Y):
    verts = [(x, y) for x in X.vertices for y in Y.vertices]
    edges = []
    for x, y in verts:
        for x2 in X.adj[x]:
            edges.append(((x, y), (x2, y)))
        for y2 in Y.adj[y]:
            edges.append(((x, y), (x, y2)))
    return Graph(verts, edges)


def pullback(f, g):
    """Pullback of f: X -> Z, g: Y -> Z with both projections."""
    if f.target is not g.target and f.target.vertices != g.target.vertices:
        raise ValueError("maps must share a target")
    X, Y = f.source, g.source
    verts = [
        (x, y)
        for x in X.vertices
        for y in Y.vertices
        if f.assignment[x] == g.assignment[y]
    ]
    edges = [
        (a, b)
        for ia, a in enumerate(verts)
        for b in verts[ia + 1:]
        if X.adjacent(a[0], b[0]) and Y.adjacent(a[1], b[1])
    ]
    P = Graph(verts, edges)
    p1 = GraphMap(P, X, {v: v[0] for v in verts})
    p2 = GraphMap(P, Y, {v: v[1] for v in verts})
    return P, p1, p2


def graph_product(X, Y):
    """Categorical product (componentwise-both adjacency)."""
    from .graphs import constant_map

    pt = interval(0)
    P, p1, p2 = pullback(constant_map(X, pt, 0), constant_map(Y, pt, 0))
    return P, p1, p2


def pi0(X):
    comps = []
    seen = set()
    for v in X.vertices:
        if v in seen:
            continue
        comp = {v}
        frontier = deque([v])
        while frontier:
            u = frontier.popleft()
            for w in X.adj[u]:
                if w not in comp:
                    comp.add(w)
                    frontier.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def all_graph_maps(X, Y):
    """Every graph map X -> Y, by backtracking in vertex order."""
    verts = X.vertices
    out = []
    assign = {}

    def backtrack(i):
        if i == len(verts):
            out.append(GraphMap(X, Y, assign))
            return
        v = verts[i]
        for y in Y.vertices:
            ok = True
            for u in X.adj[v]:
                if u in assign and not Y.adjacent(assign[u], y):
                    ok = False
                    break
            if ok:
                assign[v] = y
                backtrack(i + 1)
                del assign[v]

    backtrack(0)
    return out


def homotopy_step_maps(h):
    """Graph maps pointwise adjacent to h (one homotopy step away)."""
    X, Y = h.source, h.target
    verts = X.vertices
    out = []
    assign = {}

    def backtrack(i):
        if i == len(verts):
            out.append(GraphMap(X, Y, assign))
            return
        v = verts[i]
        for y in Y.neighbors(h.assignment[v]):
            ok = True
            for u in X.adj[v]:
                if u in assign and not Y.adjacent(assign[u], y):
                    ok = False
                    break
            if ok:
                assign[v] = y
                backtrack(i + 1)
                del assign[v]

    backtrack(0)
    return out


def is_homotopy_step(h1, h2):
    """Pointwise adjacency of two graph maps (the one-step relation)."""
    return all(
        h1.target.adjacent(h1.assignment[v], h2.assignment[v])
        for v in h1.source.vertices
    )


def interleaved_cylinder_map(h1, h2):
    """The induced map X box I_1 -> Y; a graph map iff h1, h2 are one step
    apart (the reduction lemma exercised by the tests)."""
    X, Y = h1.source, h1.target
    C = box_product(X, interval(1))
    table = {(v, t): (h1 if t == 0 else h2).assignment[v] for v, t in C.vertices}
    return GraphMap(C, Y, table), C


def a_homotopy_search(f, g, max_len=16):
    """BFS from f to g through one-step moves.

    Returns {"steps": [f, ..., g], "length": n} on success, otherwise
    {"none_found": True, "exhausted": bool}: exhausted means the entire
    reachable class of f was explored, making the miss conclusive.
    """
    if f.source is not g.source and f.source.vertices != g.source.vertices:
        raise ValueError("sources differ")
    if f == g:
        return {"steps": [f], "length": 0}
    prev = {f: None}
    frontier = deque([(f, 0)])
    exhausted = True
    while frontier:
        cur, depth = frontier.popleft()
        if depth >= max_len:
            exhausted = False
            continue
        for nxt in homotopy_step_maps(cur):
            if nxt in prev:
                continue
            prev[nxt] = cur
            if nxt == g:
                steps = [nxt]
                back = cur
                while back is not None:
                    steps.append(back)
                    back = prev[back]
                return {"steps": list(reversed(steps)), "length": depth + 1}
            frontier.append((nxt, depth + 1))
    return {"none_found": True, "exhausted": exhausted}
