"""Reference (alpha, phi)-boundary-linked expander decomposition.

Parts are certified by an exhaustive conductance scan of G[U]^{alpha/phi}
when they are small and by a sweep-cut heuristic otherwise. Updates never
merge parts: a part that stops certifying is split along its worst cut.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import DynamicGraph

EXHAUSTIVE_LIMIT = 18


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _local_view(g: DynamicGraph, U: list[int], r: float):
    """Index arrays for G[U]^r: edge endpoints, multiplicities, per-vertex volume."""
    idx = {v: i for i, v in enumerate(U)}
    per_edge = math.ceil(r)
    ea, eb, em = [], [], []
    vol = np.zeros(len(U), dtype=np.int64)
    for i, u in enumerate(U):
        d = g.loops.get(u, 0)
        for w, k in g.adj[u].items():
            j = idx.get(w)
            if j is None:
                d += k * per_edge
            else:
                d += k
                if i < j:
                    ea.append(i)
                    eb.append(j)
                    em.append(k)
        vol[i] = d
    return np.array(ea, dtype=np.int64), np.array(eb, dtype=np.int64), np.array(em, dtype=np.int64), vol


def _exhaustive_min(g: DynamicGraph, U: list[int], r: float) -> tuple[float, frozenset]:
    k = len(U)
    ea, eb, em, vol = _local_view(g, U, r)
    total = int(vol.sum())
    # the last vertex is kept out of the scanned side, so each cut appears once
    masks = np.arange(1, 1 << (k - 1), dtype=np.int64)
    cut = np.zeros(len(masks), dtype=np.int64)
    for a, b, m in zip(ea, eb, em):
        cut += m * (((masks >> a) ^ (masks >> b)) & 1)
    side_vol = np.zeros(len(masks), dtype=np.int64)
    for i in range(k - 1):
        if vol[i]:
            side_vol += vol[i] * ((masks >> i) & 1)
    denom = np.minimum(side_vol, total - side_vol)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(denom > 0, cut / np.where(denom > 0, denom, 1), np.inf)
    best = float(cond.min())
    if math.isinf(best):
        return best, frozenset()
    cands = masks[cond == best]
    sides = [frozenset(U[i] for i in range(k - 1) if int(c) >> i & 1) for c in cands]
    return best, min(sides, key=sorted)


def _sweep_min(g: DynamicGraph, U: list[int], r: float, samples: int = 64) -> tuple[float, frozenset]:
    """Best of spectral and degree-ordered sweeps plus random cuts (not a certificate)."""
    k = len(U)
    ea, eb, em, vol = _local_view(g, U, r)
    total = int(vol.sum())
    A = np.zeros((k, k))
    A[ea, eb] = em
    A[eb, ea] = em
    best = (math.inf, frozenset())

    def consider(mask_side: np.ndarray):
        nonlocal best
        s = mask_side.astype(bool)
        if s.all() or not s.any():
            return
        c = float(A[np.ix_(s, ~s)].sum())
        sv = int(vol[s].sum())
        d = min(sv, total - sv)
        val = c / d if d > 0 else math.inf
        side = frozenset(U[i] for i in np.nonzero(s)[0])
        if val < best[0] or (val == best[0] and sorted(side) < sorted(best[1])):
            best = (val, side)

    orders = [np.argsort(-vol, kind="stable")]
    safe = np.where(vol > 0, vol, 1).astype(float)
    dinv = 1 / np.sqrt(safe)
    lap = np.eye(k) - dinv[:, None] * A * dinv[None, :]
    _, vecs = np.linalg.eigh(lap)
    if k > 1:
        orders.append(np.argsort(vecs[:, 1] * dinv, kind="stable"))
    for order in orders:
        s = np.zeros(k, dtype=bool)
        for i in order[:-1]:
            s[i] = True
            consider(s)
    rng = random.Random(k * 1000003 + total)
    for _ in range(samples):
        consider(np.array([rng.random() < 0.5 for _ in range(k)]))
    return best


def min_conductance_cut(g: DynamicGraph, U: Iterable[int], r: float,
                        exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> tuple[float, frozenset, bool]:
    """(conductance, side, exhaustive?) of the worst cut of G[U]^r."""
    U = sorted(U)
    if len(U) <= 1:
        return math.inf, frozenset(), True
    if len(U) <= exhaustive_limit:
        val, side = _exhaustive_min(g, U, r)
        return val, side, True
    val, side = _sweep_min(g, U, r)
    return val, side, False


def is_boundary_linked_expander(g: DynamicGraph, U: Iterable[int], alpha: float, phi: float,
                                exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> bool:
    val, _, _ = min_conductance_cut(g, U, alpha / phi, exhaustive_limit)
    return val >= phi


@dataclass
class ExpanderReport:
    new_inter: list[tuple[int, int, int]] = field(default_factory=list)
    gone_inter: list[tuple[int, int, int]] = field(default_factory=list)
    # (old part id, new part id, vertices moved to the new part)
    splits: list[tuple[int, int, frozenset]] = field(default_factory=list)


class ExpanderDecomposition:
    """Partition of a level graph into boundary-linked expanders.

    The decomposition holds a reference to the level graph; callers mutate
    the graph first and then report the ops through ``apply_batch``.
    With ``single=True`` the whole vertex set is one part that is never split
    (used for terminal levels, which are not expanders in general).
    """

    def __init__(self, g: DynamicGraph, alpha: float, phi: float,
                 exhaustive_limit: int = EXHAUSTIVE_LIMIT, single: bool = False):
        self.g = g
        self.alpha = alpha
        self.phi = phi
        self.r = alpha / phi
        self.exhaustive_limit = exhaustive_limit
        self.single = single
        self.parts: dict[int, set[int]] = {}
        self.part_of: dict[int, int] = {}
        self.interexpander_edges: Counter = Counter()
        self.recourse_log: list[list[tuple[int, int, int, int]]] = []
        self.heuristic_parts: set[int] = set()
        self._next = 0

    # construction

    @classmethod
    def build(cls, g: DynamicGraph, alpha: float, phi: float,
              exhaustive_limit: int = EXHAUSTIVE_LIMIT, single: bool = False) -> "ExpanderDecomposition":
        ed = cls(g, alpha, phi, exhaustive_limit, single)
        pid = ed._new_part(set(g.adj))
        if not single:
            ed._refine(pid, ExpanderReport())
        ed.interexpander_edges = Counter({(u, v): k for u, v, k in g.edges()
                                          if ed.part_of[u] != ed.part_of[v]})
        ed.recourse_log = []
        return ed

    def _new_part(self, members: set[int]) -> int:
        pid = self._next
        self._next += 1
        self.parts[pid] = members
        for v in members:
            self.part_of[v] = pid
        return pid

    def _refine(self, pid: int, report: ExpanderReport) -> None:
        """Split part pid along worst cuts until every piece certifies."""
        stack = [pid]
        while stack:
            p = stack.pop()
            members = self.parts[p]
            # conductance is undefined for a vertex of volume zero: it gets its own part
            idle = sorted(v for v in members if not self.g.deg[v])
            if len(members) > 1 and idle:
                for v in idle[1:] if len(idle) == len(members) else idle:
                    members.discard(v)
                    q = self._new_part({v})
                    report.splits.append((p, q, frozenset({v})))
                if len(members) > 1:
                    stack.append(p)
                continue
            val, side, exact = min_conductance_cut(self.g, members, self.r, self.exhaustive_limit)
            if val >= self.phi:
                if not exact:
                    self.heuristic_parts.add(p)
                else:
                    self.heuristic_parts.discard(p)
                continue
            rest = members - side
            vs = sum(self.g.deg[v] for v in side)
            vr = sum(self.g.deg[v] for v in rest)
            # the larger side keeps the id; ties move the lexicographically larger set
            if (vs, sorted(rest)) > (vr, sorted(side)):
                side, rest = rest, side
            for v in side:
                members.discard(v)
            q = self._new_part(set(side))
            report.splits.append((p, q, frozenset(side)))
            for u in side:
                for w, k in self.g.adj[u].items():
                    if w in members:
                        report.new_inter.append((*_pair(u, w), k))
            stack.extend([p, q])

    # queries

    def partition(self) -> list[frozenset]:
        return [frozenset(m) for _, m in sorted(self.parts.items())]

    def check_part(self, pid: int) -> bool:
        return is_boundary_linked_expander(self.g, self.parts[pid], self.alpha, self.phi,
                                           self.exhaustive_limit)

    # updates

    def apply_update(self, op: tuple) -> ExpanderReport:
        return self.apply_batch([op])

    def apply_batch(self, ops: list[tuple]) -> ExpanderReport:
        """Ops already applied to the graph: ('ins'|'del', u, v) or ('addv', s, c).

        ('addv', s, c) puts the new vertex s into the part of c.
        """
        report = ExpanderReport()
        touched: set[int] = set()
        for op in ops:
            kind = op[0]
            if kind == "addv":
                _, s, c = op
                pid = self.part_of[c]
                self.parts[pid].add(s)
                self.part_of[s] = pid
                touched.add(pid)
                continue
            _, u, v = op
            pu, pv = self.part_of[u], self.part_of[v]
            touched.add(pu)
            touched.add(pv)
            if pu != pv:
                e = _pair(u, v)
                if kind == "ins":
                    self.interexpander_edges[e] += 1
                    report.new_inter.append((*e, 1))
                else:
                    self.interexpander_edges[e] -= 1
                    if not self.interexpander_edges[e]:
                        del self.interexpander_edges[e]
                    report.gone_inter.append((*e, 1))
        if not self.single:
            n_inter = len(report.new_inter)
            for pid in sorted(touched):
                self._refine(pid, report)
            for u, v, k in report.new_inter[n_inter:]:
                self.interexpander_edges[(u, v)] += k
        self.recourse_log.append([(+1, u, v, k) for u, v, k in report.new_inter]
                                 + [(-1, u, v, k) for u, v, k in report.gone_inter])
        return report

    def validate(self) -> None:
        seen = set()
        for pid, members in self.parts.items():
            for v in members:
                assert self.part_of[v] == pid
                assert v not in seen
                seen.add(v)
        assert seen == set(self.g.adj), "parts do not cover the graph"
        expect = Counter({(u, v): k for u, v, k in self.g.edges() if self.part_of[u] != self.part_of[v]})
        assert expect == self.interexpander_edges, "inter-expander edge list is stale"
