"""The bounded min-cut instance: a hierarchy of cluster decompositions.

Level 1 is the instance graph. Level j+1 is level j with every cluster
contracted to one node, whose id is the cluster's id. A level stops the
recursion when it has at most two nodes (base case), or when it is kept as a
single whole cluster: its volume is at most lambda_max/phi, it is the
deepest allowed level, or decomposing it made no progress.
"""
from __future__ import annotations

from dataclasses import dataclass

from .clusters import ClusterDecomposition, decompose_expanders
from .expander import ExpanderDecomposition
from .graph import DynamicGraph, GraphError, boundary
from .localkcut import derive_seed
from .params import Params

VALUE, ABOVE_MAX, BELOW_MIN = "Value", "AboveMax", "BelowMin"


@dataclass(frozen=True)
class InstanceAnswer:
    kind: str
    value: int | None = None
    # (level index, cut as a set of that level's nodes)
    cut_handle: tuple[int, frozenset] | None = None


class Level:
    def __init__(self, g: DynamicGraph, index: int, params: Params, n_log: int, seed: int):
        self.g = g
        self.index = index
        self.params = params
        self.n_log = n_log
        self.seed = seed
        self.base = False
        self.single_reason: str | None = None
        self.ed: ExpanderDecomposition | None = None
        self.cd: ClusterDecomposition | None = None
        self.next: Level | None = None
        self.updates_since_restart = 0
        self.restart_period = 1
        self.rebuilds = 0
        self.forwarded_last = 0
        self.forwarded_total = 0
        # split work and worst responsibility count of decompositions dropped by rebuilds
        self.retired_split_cost = 0
        self.retired_max_responsibility = 0

    # construction

    @classmethod
    def build(cls, g: DynamicGraph, index: int, params: Params, n_log: int, seed: int) -> "Level":
        L = cls(g, index, params, n_log, seed)
        L._build()
        return L

    def _build(self) -> None:
        g, p = self.g, self.params
        seed = derive_seed(self.seed, self.index, self.rebuilds)
        self.updates_since_restart = 0
        self.restart_period = p.restart_period(g.m)
        L = self.next
        while L is not None:
            # deeper levels are rebuilt from scratch; keep their counters
            self.retired_split_cost += L.split_cost_total
            self.retired_max_responsibility = max(self.retired_max_responsibility, L.max_responsibility)
            L = L.next
        self.next = None
        if g.n <= 2:
            self.base = True
            self.ed = self.cd = None
            return
        self.base = False
        reason = None
        if self.index >= p.max_levels:
            reason = "depth"
        elif 2 * g.m <= p.terminal_volume:
            reason = "volume"
        while True:
            self.ed = ExpanderDecomposition.build(g, p.alpha, p.phi, p.exhaustive_limit, single=reason is not None)
            self.cd = decompose_expanders(g, self.ed.partition(), p, self.n_log, seed, self.index)
            if reason is None and len(self.cd.clusters) == g.n:
                reason = "stall"
                continue
            break
        self.single_reason = reason
        self.cd.out_ops = []
        nxt = DynamicGraph()
        for cid in sorted(self.cd.clusters):
            nxt.add_vertex(cid)
        cof = self.cd.cluster_of
        for u, v, k in g.edges():
            a, b = cof[u], cof[v]
            if a != b:
                nxt.insert_edge(a, b, k)
        self.next = Level.build(nxt, self.index + 1, p, self.n_log, self.seed)

    def rebuild(self) -> None:
        self.rebuilds += 1
        if self.cd is not None:
            self.retired_split_cost += self.cd.split_cost
            self.retired_max_responsibility = max(self.retired_max_responsibility,
                                                  max(self.cd.responsibility.values(), default=0))
        self._build()

    @property
    def split_cost_total(self) -> int:
        return self.retired_split_cost + (self.cd.split_cost if self.cd is not None else 0)

    @property
    def max_responsibility(self) -> int:
        now = max(self.cd.responsibility.values(), default=0) if self.cd is not None else 0
        return max(now, self.retired_max_responsibility)

    # updates

    def apply_ops(self, ops: list[tuple]) -> None:
        """ops: ('ins'|'del', u, v) on this level's nodes, or ('addv', s, c)."""
        self.forwarded_last = 0
        if not ops:
            return
        if self.base:
            for op in ops:
                if op[0] == "addv":
                    self.g.add_vertex(op[1])
                elif op[0] == "ins":
                    self.g.insert_edge(op[1], op[2])
                else:
                    self.g.delete_edge(op[1], op[2])
            if self.g.n > 2:
                self.rebuild()
            return
        cd = self.cd
        cd.out_ops = []
        cd.apply_ops(ops)
        report = self.ed.apply_batch(ops)
        cd.force_splits(report.splits)
        # budget marking for clusters holding an endpoint of an affected edge
        ends = [x for op in ops if op[0] != "addv" for x in op[1:]]
        ends += [x for u, v, _ in report.new_inter for x in (u, v)]
        for cid in sorted({cd.cluster_of[x] for x in ends}):
            C = cd.clusters[cid]
            if not C.frozen:
                cd.unchecked_budget_mark(C)
        cd.settle()
        self.updates_since_restart += sum(1 for op in ops if op[0] != "addv")
        if self.updates_since_restart >= self.restart_period or self._terminal_broken():
            self.rebuild()
            return
        out, cd.out_ops = cd.out_ops, []
        self.forwarded_last = len(out)
        self.forwarded_total += len(out)
        self.next.apply_ops(out)

    def _terminal_broken(self) -> bool:
        return self.single_reason == "volume" and 2 * self.g.m > self.params.terminal_volume

    # answers

    def candidates(self):
        """(value, side) for every cut this level can report, as sets of its nodes."""
        if self.base:
            if self.g.n == 2:
                a = min(self.g.adj)
                yield boundary(self.g, {a}), frozenset({a})
            return
        for cid in sorted(self.cd.clusters):
            c = self.cd.clusters[cid].engine.min_cut()
            if c is not None:
                yield c.boundary, c.side

    def any_frozen(self) -> bool:
        return not self.base and self.cd.any_frozen()


class Hierarchy:
    def __init__(self, g: DynamicGraph, params: Params, seed: int = 0, n_log: int | None = None):
        self.params = params
        self.seed = seed
        self.n_log = n_log if n_log is not None else max(g.n, 2)
        self.top = Level.build(g.copy(), 1, params, self.n_log, seed)
        self.updates = 0

    @property
    def levels(self) -> list[Level]:
        out = []
        L = self.top
        while L is not None:
            out.append(L)
            L = L.next
        return out

    @property
    def graph(self) -> DynamicGraph:
        return self.top.g

    def apply_update(self, op: tuple) -> None:
        kind, u, v = op
        self.updates += 1
        self.top.apply_ops([("ins" if kind in ("+", "ins") else "del", u, v)])

    def query(self) -> InstanceAnswer:
        p = self.params
        best = None
        frozen = False
        for L in self.levels:
            frozen |= L.any_frozen()
            for value, side in L.candidates():
                key = (value, L.index, sorted(side))
                if best is None or key < best[0]:
                    best = (key, value, L.index, side)
        if frozen or (best is not None and best[1] < p.lambda_min):
            return InstanceAnswer(BELOW_MIN)
        if best is not None and best[1] <= p.lambda_max:
            return InstanceAnswer(VALUE, best[1], (best[2], best[3]))
        return InstanceAnswer(ABOVE_MAX)

    def extract_cut(self, answer: InstanceAnswer) -> frozenset:
        if answer.kind != VALUE:
            raise GraphError(f"no cut to extract from {answer.kind}")
        index, side = answer.cut_handle
        levels = self.levels
        for j in range(index - 1, 0, -1):
            clusters = levels[j - 1].cd.clusters
            side = frozenset().union(*(clusters[c].members for c in side))
        return side

    # checks and diagnostics

    def validate(self) -> None:
        levels = self.levels
        for L in levels:
            if L.base:
                continue
            L.ed.validate()
            L.cd.validate()
            cof = L.cd.cluster_of
            expect = DynamicGraph()
            for cid in sorted(L.cd.clusters):
                expect.add_vertex(cid)
            for u, v, k in L.g.edges():
                if cof[u] != cof[v]:
                    expect.insert_edge(cof[u], cof[v], k)
            assert L.next.g == expect, f"level {L.index + 1} is not the contraction of level {L.index}"
            for C in L.cd.clusters.values():
                assert C.members <= L.ed.parts[L.ed.part_of[min(C.members)]], "cluster crosses expander parts"

    def split_cost(self) -> int:
        """Cluster split work over the whole run, rebuilt levels included."""
        return sum(L.split_cost_total for L in self.levels)

    def max_responsibility(self) -> int:
        return max(L.max_responsibility for L in self.levels)

    def diagnostics(self) -> list[dict]:
        rows = []
        for L in self.levels:
            row = dict(level=L.index, nodes=L.g.n, edges=L.g.m, base=int(L.base),
                       single=L.single_reason or "", recourse=L.forwarded_last, rebuilds=L.rebuilds)
            if not L.base:
                row.update(clusters=len(L.cd.clusters), frozen=sum(C.frozen for C in L.cd.clusters.values()),
                           intercluster=L.cd.intercluster_edges(),
                           interexpander=sum(L.ed.interexpander_edges.values()))
            rows.append(row)
        return rows


def static_build(g: DynamicGraph, params: Params, seed: int = 0) -> Hierarchy:
    return Hierarchy(g, params, seed)


def instance_apply_update(hier: Hierarchy, op: tuple) -> None:
    hier.apply_update(op)


def instance_query(hier: Hierarchy) -> InstanceAnswer:
    return hier.query()


def extract_cut(hier: Hierarchy, answer: InstanceAnswer) -> frozenset:
    return hier.extract_cut(answer)
