"""Local Karger contraction (LocalKCut) and the global contraction oracle.

A LocalKCut run grows a set X from a start vertex. At each step it absorbs
the endpoint of the boundary edge with the smallest random label, which is
Karger's contraction restricted to the component of the start vertex. Every
prefix of the growth order whose boundary is at most k is a candidate cut.
"""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from typing import Container, Iterable

from .graph import Cut, DynamicGraph, GraphError, is_connected

_MASK64 = (1 << 64) - 1


def derive_seed(*parts: int) -> int:
    """Mix integers into one 64-bit seed (splitmix64 finaliser per part)."""
    x = 0x9E3779B97F4A7C15
    for p in parts:
        x = (x ^ (p & _MASK64)) * 0xBF58476D1CE4E5B9 & _MASK64
        x ^= x >> 31
        x = (x + 0x9E3779B97F4A7C15) * 0x94D049BB133111EB & _MASK64
        x ^= x >> 29
    return x


@dataclass(frozen=True)
class LocalCutParams:
    nu: float
    k: float
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.nu < 1 or self.k < 0 or self.trials < 1:
            raise ValueError(f"bad LocalKCut parameters {self}")


@dataclass
class NestedCutChain:
    """Growth order of one run plus the prefixes that qualified as cuts.

    ``checkpoints`` holds (prefix length, boundary, volume) triples.
    """
    order: list[int]
    checkpoints: list[tuple[int, int, int]] = field(default_factory=list)
    work: int = 0

    def prefix(self, i: int) -> frozenset:
        return frozenset(self.order[:i])

    def cuts(self) -> list[Cut]:
        return [Cut(frozenset(self.order[:i]), b, vol) for i, b, vol in self.checkpoints]


def local_k_cut(g: DynamicGraph, v: int, params: LocalCutParams, run: int = 0,
                within: Container[int] | None = None, size: int | None = None,
                rng: random.Random | None = None) -> NestedCutChain:
    """One LocalKCut run from v.

    ``within`` restricts the run to the subgraph induced by that vertex set
    (degrees and boundaries are then measured inside it); ``size`` is the
    number of vertices of that subgraph, used to reject the full set.
    Prefixes are recorded when boundary <= k and volume < nu. Without an
    explicit ``rng`` the labels come from a stream keyed by (seed, run).
    """
    adj = g.adj
    loops = g.loops
    nu, k = params.nu, params.k
    if size is None:
        size = len(within) if within is not None else g.n
    if rng is None:
        rng = random.Random(derive_seed(params.seed, run))
    draw = rng.getrandbits
    X = {v}
    order = [v]
    heap: list[tuple[int, int, int]] = []
    tick = 0
    vol = loops.get(v, 0)
    bnd = 0
    for w, mult in adj[v].items():
        if within is not None and w not in within:
            continue
        vol += mult
        bnd += mult
        p = draw(64)
        for _ in range(mult - 1):
            q = draw(64)
            if q < p:
                p = q
        heap.append((p, tick, w))
        tick += 1
    heapq.heapify(heap)
    chain = NestedCutChain(order)
    if bnd <= k and vol < nu and size > 1:
        chain.checkpoints.append((1, bnd, vol))
    pop, push = heapq.heappop, heapq.heappush
    while vol < nu:
        w = None
        while heap:
            _, _, w = pop(heap)
            if w not in X:
                break
            w = None
        if w is None:
            break
        X.add(w)
        order.append(w)
        dw = loops.get(w, 0)
        inside = 0
        for x, mult in adj[w].items():
            if within is not None and x not in within:
                continue
            dw += mult
            if x in X:
                inside += mult
            else:
                p = draw(64)
                for _ in range(mult - 1):
                    q = draw(64)
                    if q < p:
                        p = q
                push(heap, (p, tick, x))
                tick += 1
        vol += dw
        bnd += dw - loops.get(w, 0) - 2 * inside
        if bnd <= k and vol < nu and len(order) < size:
            chain.checkpoints.append((len(order), bnd, vol))
    chain.work = len(order)
    return chain


def batch_local_k_cut(g: DynamicGraph, v: int, params: LocalCutParams,
                      within: Container[int] | None = None, size: int | None = None,
                      first_run: int = 0) -> list[Cut]:
    """Union of the qualifying prefixes of ``params.trials`` runs.

    Deduplicated by vertex set, in order of first discovery (run order, then
    chain order). Runs share one label stream keyed by (seed, first_run), so
    the output is deterministic for a fixed seed.
    """
    seen: set[frozenset] = set()
    out: list[Cut] = []
    # one stream per batch: seeding a generator costs about a third of a run
    rng = random.Random(derive_seed(params.seed, first_run, 0xBA7C))
    for run in range(first_run, first_run + params.trials):
        chain = local_k_cut(g, v, params, run, within, size, rng)
        for i, b, vol in chain.checkpoints:
            S = frozenset(chain.order[:i])
            if S not in seen:
                seen.add(S)
                out.append(Cut(S, b, vol))
    return out


def trials_for(p_lower: float, c: float, n: float) -> int:
    """Runs needed so a per-run success chance p_lower fails with prob <= n^-c."""
    if not 0 < p_lower <= 1:
        raise ValueError("p_lower must be in (0, 1]")
    return max(1, math.ceil(c * math.log(n) / p_lower - 1e-9))


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root


def karger_global(g: DynamicGraph, seed: int) -> Cut:
    """Contract uniformly random edge instances until two super-nodes remain."""
    if g.n < 2:
        raise GraphError("need at least two vertices")
    if not is_connected(g):
        raise GraphError("karger_global needs a connected graph")
    edges = g.edge_list()
    rng = random.Random(derive_seed(seed, 0x6B61726765))
    # a uniformly random permutation of edge instances, contracted in order,
    # picks each surviving edge uniformly at every step
    rng.shuffle(edges)
    uf = _UnionFind(g.adj)
    groups = g.n
    for u, v in edges:
        if groups == 2:
            break
        a, b = uf.find(u), uf.find(v)
        if a != b:
            uf.parent[a] = b
            groups -= 1
    root = uf.find(min(g.adj))
    side = frozenset(x for x in g.adj if uf.find(x) == root)
    bnd = sum(k for u in side for w, k in g.adj[u].items() if w not in side)
    return Cut(side, bnd, sum(g.deg[x] for x in side))
