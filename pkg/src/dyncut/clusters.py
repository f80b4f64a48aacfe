"""Cluster decomposition of one hierarchy level.

Clusters refine the level's expander parts. A cluster is split whenever
LocalKCut, started from one of its unchecked vertices, turns up a
(1-eps)-boundary-sparse cut; a cluster whose mirror has a local cut below
lambda_min is frozen instead and left alone until that cut recovers.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .graph import DynamicGraph, GraphError, vertex_set
from .localkcut import LocalCutParams, batch_local_k_cut, derive_seed
from .mirror import OUTSIDE, ClusterEngine, mirror_graph
from .params import Params, strict_nu


@dataclass
class Cluster:
    id: int
    members: set[int]
    # member -> number of edges leaving the cluster from it (positive entries only)
    ext: dict[int, int] = field(default_factory=dict)
    boundary_size: int = 0
    frozen: bool = False
    pending_updates: list[tuple] = field(default_factory=list)
    engine: ClusterEngine | None = None
    unchecked: set[int] = field(default_factory=set)
    whole: bool = False

    def boundary_edges(self, g: DynamicGraph) -> list[tuple[int, int, int]]:
        out = []
        for x in sorted(self.ext):
            for w, k in sorted(g.adj[x].items()):
                if w not in self.members:
                    out.append((x, w, k))
        return out

    def potential(self, lambda_max: float) -> float:
        return max(0.0, self.boundary_size - 2.1 * lambda_max)


@dataclass(frozen=True)
class Split:
    S: frozenset


FROZEN = "Frozen"
ALL_CHECKED = "AllChecked"


def is_boundary_sparse(g: DynamicGraph, C: Cluster, U, eps: float) -> bool:
    """w(U, C\\U) < (1-eps) min{w(U, V\\C), w(C\\U, V\\C)}, in O(Vol(U)) time."""
    U = vertex_set(U)
    if not U or len(U) >= len(C.members) or not U <= C.members:
        raise GraphError("U must be a nonempty strict subset of the cluster")
    members = C.members
    inner = outer = 0
    for u in U:
        for w, k in g.adj[u].items():
            if w in U:
                continue
            if w in members:
                inner += k
            else:
                outer += k
    rest = C.boundary_size - outer
    return inner < (1 - eps) * min(outer, rest)


class ClusterDecomposition:
    """Clusters of one level graph plus their engines and check marks.

    Splits emit ops for the next level into ``out_ops``: ('addv', new, old)
    followed by unit ('ins', a, b) and ('del', a, b) ops on cluster ids.
    """

    def __init__(self, g: DynamicGraph, params: Params, n_log: int, seed: int, level: int = 1):
        self.g = g
        self.params = params
        self.n_log = n_log
        self.seed = seed
        self.level = level
        self.clusters: dict[int, Cluster] = {}
        self.cluster_of: dict[int, int] = {}
        self.out_ops: list[tuple] = []
        self._next_id = 0
        self._batches = 0
        # diagnostics
        self.split_cost = 0
        self.splits = 0
        self.sparse_splits = 0
        self.forced_splits = 0
        self.responsibility: Counter = Counter()
        self.monotone_violations = 0
        self.lkc_runs = 0

    # construction (decomposing expanders, steps 1-3)

    @classmethod
    def from_parts(cls, g: DynamicGraph, parts, params: Params, n_log: int, seed: int,
                   level: int = 1) -> "ClusterDecomposition":
        cd = cls(g, params, n_log, seed, level)
        parts = [set(p) for p in parts]
        whole = len(parts) == 1
        for p in parts:
            cd._new_cluster(p, whole=whole)
        for C in cd.clusters.values():
            C.unchecked = set(C.ext)
            cd._poll(C)
        return cd

    def _new_cluster(self, members: set[int], whole: bool = False) -> Cluster:
        cid = self._next_id
        self._next_id += 1
        C = Cluster(cid, members, whole=whole)
        adj = self.g.adj
        for x in members:
            self.cluster_of[x] = cid
            out = sum(k for w, k in adj[x].items() if w not in members)
            if out:
                C.ext[x] = out
                C.boundary_size += out
        outside = None if whole else OUTSIDE
        C.engine = ClusterEngine(mirror_graph(self.g, members, outside), outside, self.params,
                                 self.n_log, derive_seed(self.seed, cid, 0xE9), cluster_id=cid)
        self.clusters[cid] = C
        return C

    # freezing

    def _poll(self, C: Cluster) -> None:
        """Settle C's engine and move it between frozen and unfrozen."""
        small = C.engine.settle()
        if small and not C.frozen:
            self.freeze(C)
        elif not small and C.frozen:
            self.unfreeze_and_replay(C)

    def freeze(self, C: Cluster) -> None:
        if not C.engine.has_small_cut:
            raise GraphError("freeze needs a local cut below lambda_min")
        C.frozen = True

    def unfreeze_and_replay(self, C: Cluster) -> None:
        if C.engine.has_small_cut:
            raise GraphError("cluster still has a local cut below lambda_min")
        C.frozen = False
        ops, C.pending_updates = C.pending_updates, []
        for op in ops:
            for x in op[1:]:
                if self.cluster_of.get(x) == C.id:
                    C.unchecked.add(x)
        if ops:
            self.unchecked_budget_mark(C)

    # marking

    def unchecked_budget_mark(self, C: Cluster, count: float | None = None) -> int:
        """Take up to 2*lambda_max boundary edges of C whose C-endpoint is checked
        (in boundary-list order) and uncheck those endpoints. Returns how many
        vertices were marked."""
        if count is None:
            count = 2 * self.params.lambda_max
        budget = math.floor(count)
        used = marked = 0
        for x in sorted(C.ext):
            if used >= budget:
                break
            if x not in C.unchecked:
                C.unchecked.add(x)
                marked += 1
                used += C.ext[x]
        return marked

    def note_update(self, C: Cluster, op: tuple) -> None:
        """Endpoint marking for an update incident to C (queued while frozen)."""
        if C.frozen:
            C.pending_updates.append(op)
            return
        for x in op[1:]:
            if self.cluster_of.get(x) == C.id:
                C.unchecked.add(x)

    # updates from the level

    def apply_ops(self, ops: list[tuple]) -> set[int]:
        """Apply level-graph ops to the graph, clusters and engines.

        Returns the ids of clusters touched by edge updates.
        """
        g = self.g
        touched: set[int] = set()
        for op in ops:
            kind = op[0]
            if kind == "addv":
                _, s, c = op
                g.add_vertex(s)
                C = self.clusters[self.cluster_of[c]]
                C.members.add(s)
                self.cluster_of[s] = C.id
                C.engine.stage(("addv", s))
                continue
            _, u, v = op
            sign = 1 if kind == "ins" else -1
            if sign > 0:
                g.insert_edge(u, v)
            else:
                g.delete_edge(u, v)
            cu, cv = self.cluster_of[u], self.cluster_of[v]
            Cu, Cv = self.clusters[cu], self.clusters[cv]
            eop = "ins" if sign > 0 else "del"
            if cu == cv:
                Cu.engine.stage((eop, u, v, 1))
            else:
                for C, x in ((Cu, u), (Cv, v)):
                    C.engine.stage((eop, x, OUTSIDE, 1))
                    C.ext[x] = C.ext.get(x, 0) + sign
                    if not C.ext[x]:
                        del C.ext[x]
                    C.boundary_size += sign
                self.out_ops.append((eop, cu, cv))
            touched.add(cu)
            touched.add(cv)
            self.note_update(Cu, ("edge", u, v))
            if cv != cu:
                self.note_update(Cv, ("edge", u, v))
        return touched

    # splitting

    def _smaller_side(self, C: Cluster, S: frozenset) -> tuple[frozenset, int]:
        """Walk both sides in lockstep, always extending the one with less volume
        seen so far, until the smaller side is known. Returns it with the work
        done (degrees plus vertices visited), which is O(min volume)."""
        deg = self.g.deg
        a = sorted(S)
        b = sorted(C.members - S)
        ia = ib = va = vb = work = 0
        while True:
            a_done, b_done = ia == len(a), ib == len(b)
            if a_done and b_done:
                break
            if a_done and va < vb:
                return S, work
            if b_done and vb < va:
                return frozenset(b), work
            if not a_done and (b_done or va <= vb):
                va += deg[a[ia]]
                work += deg[a[ia]] + 1
                ia += 1
            else:
                vb += deg[b[ib]]
                work += deg[b[ib]] + 1
                ib += 1
        if va != vb:
            return (S if va < vb else frozenset(b)), work
        # tie: the side holding the smallest member becomes the new cluster
        return (S if a[0] < b[0] else frozenset(b)), work

    def split_cluster(self, C: Cluster, S, responsible: int | None = None,
                      sparse: bool = False) -> tuple[Cluster, Cluster]:
        """Cut C into S and C \\ S; the larger-volume side keeps C's id and engine."""
        S = vertex_set(S)
        if not S or not S < C.members:
            raise GraphError("split needs a nonempty strict subset of the cluster")
        g = self.g
        adj = g.adj
        before = C.boundary_size
        M, work = self._smaller_side(C, S)
        self.split_cost += work
        cross: list[tuple[int, int, int]] = []  # (x in M, w in rest of C, k)
        outer: list[tuple[int, int, int]] = []  # (x in M, w outside C, k)
        for x in sorted(M):
            for w, k in sorted(adj[x].items()):
                if w in M:
                    continue
                if w in C.members:
                    cross.append((x, w, k))
                else:
                    outer.append((x, w, k))
        # shrink C
        C.members -= M
        for x in M:
            C.ext.pop(x, None)
        C.unchecked, moved_unchecked = C.unchecked - M, C.unchecked & M
        for x, w, k in cross:
            C.ext[w] = C.ext.get(w, 0) + k
        n_cross = sum(k for _, _, k in cross)
        n_outer = sum(k for _, _, k in outer)
        C.boundary_size += n_cross - n_outer
        eng = C.engine
        if C.whole:
            eng.stage(("addv", OUTSIDE))
            eng.outside = OUTSIDE
            C.whole = False
        eng.stage(("setdel", M))
        per_w = Counter()
        for _, w, k in cross:
            per_w[w] += k
        for w in sorted(per_w):
            eng.stage(("ins", w, OUTSIDE, per_w[w]))
        # the new cluster gets a fresh engine
        N = self._new_cluster(set(M))
        N.unchecked = moved_unchecked
        for x, w, _ in cross:
            N.unchecked.add(x)
            C.unchecked.add(w)
        self._poll(C)
        self._poll(N)
        # next level: add N beside C, insert its edges, then delete C's stale ones
        ops = [("addv", N.id, C.id)]
        ops += [("ins", N.id, C.id)] * n_cross
        dels = []
        for _, w, k in outer:
            q = self.cluster_of[w]
            ops += [("ins", N.id, q)] * k
            dels += [("del", C.id, q)] * k
        self.out_ops.extend(ops + dels)
        self.splits += 1
        if responsible is not None:
            self.responsibility[responsible] += 1
        if sparse:
            self.sparse_splits += 1
            lm = self.params.lambda_min
            if N.boundary_size >= lm and C.boundary_size >= lm:
                if before < max(N.boundary_size, C.boundary_size) + self.params.eps * lm / 2 - 1e-9:
                    self.monotone_violations += 1
                    raise AssertionError("a sparse split did not shrink the boundary")
        else:
            self.forced_splits += 1
        return (N, C) if M == S else (C, N)

    # find and cut

    def find_and_cut(self, C: Cluster):
        if C.frozen:
            raise GraphError("find_and_cut on a frozen cluster")
        self._poll(C)
        if C.frozen:
            return FROZEN
        p = self.params
        trials = p.find_trials(self.n_log)
        while C.unchecked:
            v = min(C.unchecked)
            params = LocalCutParams(strict_nu(p.find_volume), p.lambda_max, trials,
                                    derive_seed(self.seed, 0xF1, self._batches))
            self._batches += 1
            self.lkc_runs += trials
            for cut in batch_local_k_cut(self.g, v, params, within=C.members):
                if is_boundary_sparse(self.g, C, cut.side, p.eps):
                    self.split_cluster(C, cut.side, responsible=v, sparse=True)
                    return Split(cut.side)
            C.unchecked.discard(v)
        return ALL_CHECKED

    def settle(self) -> None:
        """Run find_and_cut on unfrozen clusters until every one is fully checked."""
        while True:
            for C in list(self.clusters.values()):
                if C.engine.dirty:
                    self._poll(C)
            work = [C for C in self.clusters.values() if not C.frozen and C.unchecked]
            if not work:
                return
            self.find_and_cut(min(work, key=lambda C: C.id))

    # expander-forced splits

    def force_splits(self, splits) -> None:
        """Refine clusters along expander part splits (old, new, moved vertices)."""
        for _, _, moved in splits:
            for cid in sorted({self.cluster_of[x] for x in moved}):
                C = self.clusters[cid]
                side = frozenset(C.members & moved)
                if side and side != C.members:
                    self.split_cluster(C, side)

    # inspection

    def partition(self) -> list[frozenset]:
        return [frozenset(C.members) for _, C in sorted(self.clusters.items())]

    def any_frozen(self) -> bool:
        return any(C.frozen for C in self.clusters.values())

    def intercluster_edges(self) -> int:
        return sum(C.boundary_size for C in self.clusters.values()) // 2

    def validate(self) -> None:
        g = self.g
        seen = set()
        for cid, C in self.clusters.items():
            assert C.members, "empty cluster"
            for x in C.members:
                assert self.cluster_of[x] == cid and x not in seen
                seen.add(x)
            bnd = sum(k for x in C.members for w, k in g.adj[x].items() if w not in C.members)
            assert C.boundary_size == bnd == sum(C.ext.values()), "stale boundary size"
            assert not C.pending_updates or C.frozen
            assert C.frozen == C.engine.has_small_cut
            assert C.unchecked <= C.members
            expect = mirror_graph(g, C.members, None if C.whole else OUTSIDE)
            assert C.engine.graph == expect, f"engine graph of cluster {cid} is stale"
        assert seen == set(g.adj), "clusters do not cover the level"

    def diagnostics(self) -> list[dict]:
        lm = self.params.lambda_max
        return [dict(level=self.level, cluster=cid, members=len(C.members), boundary_size=C.boundary_size,
                     frozen=int(C.frozen), unchecked=len(C.unchecked), potential=C.potential(lm))
                for cid, C in sorted(self.clusters.items())]


def decompose_expanders(g: DynamicGraph, parts, params: Params, n_log: int, seed: int,
                        level: int = 1) -> ClusterDecomposition:
    """Clusters start as the expander parts; find_and_cut runs until quiescence."""
    cd = ClusterDecomposition.from_parts(g, parts, params, n_log, seed, level)
    cd.settle()
    return cd
