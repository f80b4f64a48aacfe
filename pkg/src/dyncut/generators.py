"""Random graph families and update streams for benchmarks and tests."""
from __future__ import annotations

import random

from .graph import DynamicGraph


def gnp(n: int, p: float, rng: random.Random, max_edges: int | None = None) -> DynamicGraph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    if max_edges is not None and len(pairs) > max_edges:
        pairs = rng.sample(pairs, max_edges)
    return DynamicGraph(n, pairs)


def _dense_block(g: DynamicGraph, verts: list[int], p: float, rng: random.Random) -> None:
    # a spanning cycle keeps the block connected, the rest is random
    for a, b in zip(verts, verts[1:] + verts[:1]):
        if len(verts) > 2 or a < b:
            g.insert_edge(a, b)
    for i, u in enumerate(verts):
        for v in verts[i + 2:]:
            if not (u == verts[0] and v == verts[-1]) and rng.random() < p:
                g.insert_edge(u, v)


def dumbbell(n: int, bridges: int, rng: random.Random, p: float = 0.7) -> DynamicGraph:
    """Two dense halves joined by ``bridges`` random edges."""
    g = DynamicGraph(n)
    left, right = list(range(n // 2)), list(range(n // 2, n))
    _dense_block(g, left, p, rng)
    _dense_block(g, right, p, rng)
    for _ in range(bridges):
        g.insert_edge(rng.choice(left), rng.choice(right))
    return g


def expander_pair(n: int, bridges: int, rng: random.Random, degree: int = 4) -> DynamicGraph:
    """Two random near-regular halves (unions of random perfect cycles) plus bridges."""
    g = DynamicGraph(n)
    for half in (list(range(n // 2)), list(range(n // 2, n))):
        for _ in range(max(1, degree // 2)):
            order = half[:]
            rng.shuffle(order)
            for a, b in zip(order, order[1:] + order[:1]):
                if a != b and len(order) > 2:
                    g.insert_edge(a, b)
    for _ in range(bridges):
        g.insert_edge(rng.randrange(n // 2), rng.randrange(n // 2, n))
    return g


def random_stream(g: DynamicGraph, ops: int, rng: random.Random, query_every: int = 5,
                  max_edges: int | None = None, delete_bias: float = 0.5) -> list[tuple]:
    """Valid '+'/'-' ops against a private copy of g, with '?' after every query_every ops."""
    h = g.copy()
    n = h.n
    out: list[tuple] = []
    for t in range(1, ops + 1):
        edges = h.edge_list()
        full = max_edges is not None and h.m >= max_edges
        if edges and (full or rng.random() < delete_bias):
            u, v = rng.choice(edges)
            h.delete_edge(u, v)
            out.append(("-", u, v))
        else:
            u, v = rng.sample(range(n), 2)
            h.insert_edge(u, v)
            out.append(("+", u, v))
        if query_every and t % query_every == 0:
            out.append(("?",))
    return out


def format_stream(ops: list[tuple]) -> str:
    return "".join(("?" if op[0] == "?" else f"{op[0]} {op[1]} {op[2]}") + "\n" for op in ops)


FAMILIES = ("gnp", "dumbbell", "expander-pair")


def make_graph(family: str, n: int, rng: random.Random, max_edges: int = 50) -> DynamicGraph:
    if family == "gnp":
        while True:
            g = gnp(n, min(0.9, 2 * max_edges / (n * (n - 1)) * 0.8 + 0.2), rng, max_edges)
            if all(g.deg[v] for v in g.adj):
                return g
    if family == "dumbbell":
        return dumbbell(n, rng.randint(1, 4), rng, p=0.6)
    if family == "expander-pair":
        return expander_pair(n, rng.randint(1, 4), rng)
    raise ValueError(f"unknown family {family!r}")
