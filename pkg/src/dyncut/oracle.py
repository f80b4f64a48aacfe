"""Brute-force ground truth for tests: exact min cut, extreme sets, local cuts.

Everything here is exhaustive over vertex subsets (bitmask tables built with
numpy) except ``min_cut_flow``, which runs n-1 max-flow computations and is
kept as an independent cross-check of the subset scan.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graph import Cut, DynamicGraph, GraphError, vertex_set


class OracleLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_subset_vertices: int = 20
    max_enumeration_volume: int | None = None


DEFAULT_LIMITS = OracleLimits()


@dataclass(frozen=True)
class SparseCut:
    side: frozenset
    inner: int  # w(U, C\U)
    outer: int  # w(U, V\C)
    boundary: int
    volume: int


class _Tables:
    """Boundary and volume of every subset of ``verts`` (bit i = verts[i])."""

    def __init__(self, g: DynamicGraph, verts: list[int], limits: OracleLimits):
        k = len(verts)
        if k > limits.max_subset_vertices:
            raise OracleLimitError(f"{k} vertices exceed the oracle limit {limits.max_subset_vertices}")
        self.verts = verts
        self.k = k
        self.full = (1 << k) - 1
        masks = np.arange(1 << k, dtype=np.int64)
        self.masks = masks
        idx = {v: i for i, v in enumerate(verts)}
        bits = [(masks >> i) & 1 for i in range(k)]
        bnd = np.zeros(1 << k, dtype=np.int64)
        vol = np.zeros(1 << k, dtype=np.int64)
        for i, v in enumerate(verts):
            vol += g.deg[v] * bits[i]
        for u, v, mult in g.edges():
            if u in idx and v in idx:
                bnd += mult * (bits[idx[u]] ^ bits[idx[v]])
        self.bits = bits
        self.bnd = bnd
        self.vol = vol

    def side(self, mask: int) -> frozenset:
        return frozenset(v for i, v in enumerate(self.verts) if mask >> i & 1)

    def lex_best(self, candidates) -> int:
        return min((int(c) for c in candidates), key=lambda c: sorted(self.side(c)))

    def strict_sub_min(self) -> np.ndarray:
        """For each mask, min boundary over nonempty strict submasks (inf if none)."""
        f = self.bnd.astype(np.float64)
        f[0] = math.inf
        for i in range(self.k):
            b = 1 << i
            with_b = (self.masks & b) != 0
            f[with_b] = np.minimum(f[with_b], f[self.masks[with_b] ^ b])
        out = np.full(1 << self.k, math.inf)
        for i in range(self.k):
            b = 1 << i
            with_b = (self.masks & b) != 0
            out[with_b] = np.minimum(out[with_b], f[self.masks[with_b] ^ b])
        return out

    def connected(self, g: DynamicGraph, mask: int) -> bool:
        side = self.side(mask)
        start = next(iter(side))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in side and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(side)


def _tables(g: DynamicGraph, limits: OracleLimits) -> _Tables:
    return _Tables(g, g.vertices(), limits)


def exact_min_cut(g: DynamicGraph, limits: OracleLimits = DEFAULT_LIMITS) -> Cut:
    """Exact global min cut by subset scan; ties go to the lexicographically smallest side."""
    if g.n < 2:
        raise GraphError("min cut needs at least two vertices")
    t = _tables(g, limits)
    proper = t.bnd[1:t.full]
    best = int(proper.min())
    cands = np.nonzero(proper == best)[0] + 1
    mask = t.lex_best(cands)
    side = t.side(mask)
    return Cut(side, best, int(t.vol[mask]))


def min_cut_flow(g: DynamicGraph) -> Cut:
    """Global min cut as the best of n-1 s-t max flows from the first vertex."""
    verts = g.vertices()
    if len(verts) < 2:
        raise GraphError("min cut needs at least two vertices")
    idx = {v: i for i, v in enumerate(verts)}
    rows, cols, caps = [], [], []
    for u, v, k in g.edges():
        rows += [idx[u], idx[v]]
        cols += [idx[v], idx[u]]
        caps += [k, k]
    n = len(verts)
    cap = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(n, n))
    best = None
    for t in range(1, n):
        res = maximum_flow(cap, 0, t)
        if best is not None and res.flow_value >= best[0]:
            continue
        residual = (cap - res.flow).tocsr()
        seen = {0}
        stack = [0]
        while stack:
            a = stack.pop()
            lo, hi = residual.indptr[a], residual.indptr[a + 1]
            for b, r in zip(residual.indices[lo:hi], residual.data[lo:hi]):
                if r > 0 and b not in seen:
                    seen.add(int(b))
                    stack.append(int(b))
        best = (int(res.flow_value), frozenset(verts[i] for i in seen))
    value, side = best
    return Cut(side, value, sum(g.deg[v] for v in side))


def enumerate_extreme_sets(g: DynamicGraph, k: float, nu: float,
                           limits: OracleLimits = DEFAULT_LIMITS) -> list[Cut]:
    return [c for c, _ in _gamma_scan(g, 1.0, k, nu, limits)]


def enumerate_gamma_extreme(g: DynamicGraph, gamma: float, k: float, nu: float,
                            limits: OracleLimits = DEFAULT_LIMITS) -> list[tuple[Cut, bool]]:
    """All S with dS <= k, Vol(S) <= nu and dT > gamma*dS for every strict nonempty T.

    Each entry carries a flag telling whether S induces a connected subgraph.
    """
    return _gamma_scan(g, gamma, k, nu, limits)


def _gamma_scan(g, gamma, k, nu, limits):
    t = _tables(g, limits)
    sub = t.strict_sub_min()
    masks = t.masks[1:t.full]
    bnd = t.bnd[1:t.full]
    ok = (bnd <= k) & (t.vol[1:t.full] <= nu) & (sub[1:t.full] > gamma * bnd)
    out = []
    for mask in masks[ok]:
        mask = int(mask)
        out.append((Cut(t.side(mask), int(t.bnd[mask]), int(t.vol[mask])), t.connected(g, mask)))
    out.sort(key=lambda e: (len(e[0].side), sorted(e[0].side)))
    return out


def enumerate_boundary_sparse(g: DynamicGraph, C, eps: float, k: float, nu: float,
                              inner_range: tuple[float, float] | None = None,
                              limits: OracleLimits = DEFAULT_LIMITS) -> list[SparseCut]:
    """All U strictly inside C with w(U,C\\U) < (1-eps)*min{w(U,V\\C), w(C\\U,V\\C)}.

    Budgets: boundary in g at most k and volume in g at most nu. ``inner_range``
    additionally bounds w(U, C\\U) from both sides.
    """
    C = vertex_set(C)
    verts = sorted(C)
    t = _Tables(g, verts, limits)
    # external degree of every member, then per-mask outer weight
    ext = np.zeros(1 << t.k, dtype=np.int64)
    for i, v in enumerate(verts):
        out_v = sum(m for w, m in g.adj[v].items() if w not in C)
        ext += out_v * t.bits[i]
    total_out = int(ext[t.full])
    inner = t.bnd  # the table was built on G[C]'s edges only
    outer = ext
    rest = total_out - outer
    boundary = inner + outer
    sel = np.arange(1, t.full)
    ok = inner[sel] < (1 - eps) * np.minimum(outer[sel], rest[sel])
    ok &= (boundary[sel] <= k) & (t.vol[sel] <= nu)
    if inner_range is not None:
        ok &= (inner[sel] >= inner_range[0]) & (inner[sel] <= inner_range[1])
    out = []
    for mask in sel[ok]:
        mask = int(mask)
        out.append(SparseCut(t.side(mask), int(inner[mask]), int(outer[mask]),
                             int(boundary[mask]), int(t.vol[mask])))
    return out


def cut_tables(g: DynamicGraph, limits: OracleLimits = DEFAULT_LIMITS) -> _Tables:
    """Precomputed subset tables, reusable across several queries on one graph state."""
    return _tables(g, limits)


def min_local_cut_through(g: DynamicGraph, v: int, bound_volume: float, bound_value: float,
                          limits: OracleLimits = DEFAULT_LIMITS, tables: _Tables | None = None) -> Cut | None:
    """Cheapest S containing v, S != V, with Vol(S) <= bound_volume and dS <= bound_value.

    Ties: smaller volume, then lexicographic vertex set.
    """
    t = tables if tables is not None else _tables(g, limits)
    i = t.verts.index(v)
    masks = t.masks[1:t.full]
    ok = ((masks >> i) & 1 == 1) & (t.vol[1:t.full] <= bound_volume) & (t.bnd[1:t.full] <= bound_value)
    cands = masks[ok]
    if len(cands) == 0:
        return None
    b = t.bnd[cands]
    cands = cands[b == b.min()]
    vv = t.vol[cands]
    cands = cands[vv == vv.min()]
    mask = t.lex_best(cands)
    return Cut(t.side(mask), int(t.bnd[mask]), int(t.vol[mask]))


def has_local_cut_below(g: DynamicGraph, bound_volume: float, value: float,
                        limits: OracleLimits = DEFAULT_LIMITS, tables: _Tables | None = None) -> bool:
    """Whether some S != V has Vol(S) <= bound_volume and dS < value."""
    t = tables if tables is not None else _tables(g, limits)
    sel = slice(1, t.full)
    return bool(np.any((t.vol[sel] <= bound_volume) & (t.bnd[sel] < value)))


def local_cuts_below(g: DynamicGraph, bound_volume: float, value: float,
                     limits: OracleLimits = DEFAULT_LIMITS) -> list[Cut]:
    t = _tables(g, limits)
    masks = t.masks[1:t.full]
    ok = (t.vol[1:t.full] <= bound_volume) & (t.bnd[1:t.full] < value)
    return [Cut(t.side(int(m)), int(t.bnd[m]), int(t.vol[m])) for m in masks[ok]]
