"""Unweighted dynamic multigraph and the cut primitives built on it.

Edges are stored as per-vertex multiplicity counters, so a parallel edge is a
count rather than a duplicate entry. Self-loops are only created by
``induced_with_loops`` and each loop adds 1 to its vertex's degree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class GraphError(ValueError):
    pass


def vertex_set(members: Iterable[int]) -> frozenset:
    return members if isinstance(members, frozenset) else frozenset(members)


class DynamicGraph:
    """Multigraph over integer vertex ids.

    The top-level graph has the fixed universe 0..n-1. Contracted and mirror
    graphs built by the hierarchy also use ``add_vertex``/``remove_vertex``.
    """

    __slots__ = ("adj", "deg", "loops", "m")

    def __init__(self, n: int = 0, edges: Iterable[tuple[int, int]] = ()):
        self.adj: dict[int, dict[int, int]] = {v: {} for v in range(n)}
        self.deg: dict[int, int] = {v: 0 for v in range(n)}
        self.loops: dict[int, int] = {}
        self.m = 0
        for u, v in edges:
            self.insert_edge(u, v)

    @property
    def n(self) -> int:
        return len(self.adj)

    def vertices(self) -> list[int]:
        return sorted(self.adj)

    def __contains__(self, v: int) -> bool:
        return v in self.adj

    def add_vertex(self, v: int) -> None:
        if v in self.adj:
            raise GraphError(f"vertex {v} already present")
        self.adj[v] = {}
        self.deg[v] = 0

    def remove_vertex(self, v: int) -> list[tuple[int, int, int]]:
        """Drop v with its edges; returns the removed (v, w, mult) triples."""
        removed = []
        for w, k in self.adj[v].items():
            del self.adj[w][v]
            self.deg[w] -= k
            self.m -= k
            removed.append((v, w, k))
        self.m -= self.loops.pop(v, 0)
        del self.adj[v]
        del self.deg[v]
        return removed

    def _check(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"self-loop ({u},{v}) rejected")
        if u not in self.adj or v not in self.adj:
            raise GraphError(f"edge ({u},{v}) has an endpoint outside the graph")

    def insert_edge(self, u: int, v: int, mult: int = 1) -> None:
        self._check(u, v)
        au = self.adj[u]
        au[v] = au.get(v, 0) + mult
        av = self.adj[v]
        av[u] = av.get(u, 0) + mult
        self.deg[u] += mult
        self.deg[v] += mult
        self.m += mult

    def delete_edge(self, u: int, v: int, mult: int = 1) -> None:
        self._check(u, v)
        have = self.adj[u].get(v, 0)
        if have < mult:
            raise GraphError(f"edge ({u},{v}) absent")
        if have == mult:
            del self.adj[u][v]
            del self.adj[v][u]
        else:
            self.adj[u][v] = have - mult
            self.adj[v][u] = have - mult
        self.deg[u] -= mult
        self.deg[v] -= mult
        self.m -= mult

    def add_loops(self, v: int, count: int) -> None:
        if count <= 0:
            return
        self.loops[v] = self.loops.get(v, 0) + count
        self.deg[v] += count
        self.m += count

    def multiplicity(self, u: int, v: int) -> int:
        return self.adj[u].get(v, 0)

    def degree(self, v: int) -> int:
        return self.deg[v]

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Canonical (u, v, mult) with u < v."""
        for u in sorted(self.adj):
            for v, k in sorted(self.adj[u].items()):
                if u < v:
                    yield u, v, k

    def edge_list(self) -> list[tuple[int, int]]:
        out = []
        for u, v, k in self.edges():
            out.extend([(u, v)] * k)
        return out

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph()
        g.adj = {v: dict(nb) for v, nb in self.adj.items()}
        g.deg = dict(self.deg)
        g.loops = dict(self.loops)
        g.m = self.m
        return g

    def signature(self) -> tuple:
        return (tuple(sorted(self.adj)), tuple(self.edges()), tuple(sorted(self.loops.items())))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DynamicGraph) and self.signature() == other.signature()

    def __repr__(self) -> str:
        return f"DynamicGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Cut:
    side: frozenset
    boundary: int
    volume: int
    level: int | None = field(default=None, compare=False)
    cluster: int | None = field(default=None, compare=False)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(sorted(self.side))

    def validate(self, g: DynamicGraph) -> None:
        if boundary(g, self.side) != self.boundary or volume(g, self.side) != self.volume:
            raise GraphError(f"stale cut {self.members}")


def boundary(g: DynamicGraph, S: Iterable[int]) -> int:
    S = vertex_set(S)
    if not S:
        raise GraphError("boundary of the empty set")
    adj = g.adj
    return sum(k for u in S for w, k in adj[u].items() if w not in S)


def volume(g: DynamicGraph, S: Iterable[int]) -> int:
    deg = g.deg
    return sum(deg[u] for u in S)


def cross_weight(g: DynamicGraph, A: Iterable[int], B: Iterable[int]) -> int:
    A, B = vertex_set(A), vertex_set(B)
    if A & B:
        raise GraphError("cross_weight needs disjoint sets")
    if len(B) < len(A):
        A, B = B, A
    adj = g.adj
    return sum(k for u in A for w, k in adj[u].items() if w in B)


def make_cut(g: DynamicGraph, S: Iterable[int], **provenance) -> Cut:
    S = vertex_set(S)
    return Cut(S, boundary(g, S), volume(g, S), **provenance)


def contract(g: DynamicGraph, partition: list[Iterable[int]]) -> tuple[DynamicGraph, dict[int, int]]:
    """One node per part, numbered by position; intra-part edges vanish."""
    cmap: dict[int, int] = {}
    for i, part in enumerate(partition):
        for v in part:
            if v in cmap:
                raise GraphError(f"vertex {v} in two parts")
            cmap[v] = i
    if len(cmap) != g.n or any(v not in g.adj for v in cmap):
        raise GraphError("partition does not cover the vertex set")
    h = DynamicGraph(len(partition))
    for u, v, k in g.edges():
        a, b = cmap[u], cmap[v]
        if a != b:
            h.insert_edge(a, b, k)
    return h, cmap


def induced_with_loops(g: DynamicGraph, U: Iterable[int], r: float) -> DynamicGraph:
    """G[U] plus ceil(r) self-loops at the U-endpoint of every boundary edge."""
    U = vertex_set(U)
    if not U:
        raise GraphError("empty vertex set")
    per_edge = math.ceil(r)
    h = DynamicGraph()
    for u in sorted(U):
        h.add_vertex(u)
    for u in U:
        out = 0
        for w, k in g.adj[u].items():
            if w in U:
                if u < w:
                    h.insert_edge(u, w, k)
            else:
                out += k
        h.add_loops(u, out * per_edge + g.loops.get(u, 0))
    return h


def conductance(g: DynamicGraph, U: Iterable[int]) -> float:
    U = vertex_set(U)
    rest = [v for v in g.adj if v not in U]
    if not U or not rest:
        raise GraphError("conductance needs a proper cut")
    denom = min(volume(g, U), volume(g, rest))
    if denom == 0:
        return math.inf
    return boundary(g, U) / denom


def is_connected(g: DynamicGraph) -> bool:
    if g.n == 0:
        return True
    start = next(iter(g.adj))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


# text formats

def parse_graph(text: str) -> DynamicGraph:
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, t) for i, t in lines if t and not t[0].startswith("#")]
    if not lines:
        raise GraphError("line 1: missing 'n m' header")
    i, head = lines[0]
    try:
        n, m = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise GraphError(f"line {i}: bad header {' '.join(head)!r}") from None
    g = DynamicGraph(n)
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"line {i}: header announces {m} edges, found {len(body)}")
    for i, t in body:
        try:
            u, v = int(t[0]), int(t[1])
            if len(t) != 2:
                raise ValueError
            g.insert_edge(u, v)
        except (ValueError, IndexError, GraphError) as exc:
            raise GraphError(f"line {i}: bad edge {' '.join(t)!r} ({exc})") from None
    return g


def parse_stream(text: str) -> list[tuple]:
    """Ops as ('+', u, v), ('-', u, v) or ('?',)."""
    ops: list[tuple] = []
    for i, ln in enumerate(text.splitlines(), 1):
        t = ln.split()
        if not t or t[0].startswith("#"):
            continue
        if t == ["?"]:
            ops.append(("?",))
            continue
        if len(t) == 3 and t[0] in "+-":
            try:
                ops.append((t[0], int(t[1]), int(t[2])))
                continue
            except ValueError:
                pass
        raise GraphError(f"line {i}: bad stream op {ln.strip()!r}")
    return ops


def format_graph(g: DynamicGraph) -> str:
    edges = g.edge_list()
    return "\n".join([f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"
