"""Mirror clusters, the Buffer algorithm and the mirror-cut store.

A mirror cluster is the level graph with everything outside a cluster C
contracted into one outside vertex. Each cluster owns a ``ClusterEngine``:
the buffer watches for local cuts below lambda_min and, while none exists,
forwards its updates to the store, which keeps for every vertex the
cheapest local cut through it of value at most lambda_max.

Engine ops: ('addv', x), ('ins', u, v, k), ('del', u, v, k), ('setdel', S).
A set deletion removes S with all incident edges (the vertices of S have
moved outside C); edges from the remaining vertices to S are re-added as
edges to the outside vertex by the caller.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import Cut, DynamicGraph, GraphError
from .localkcut import LocalCutParams, batch_local_k_cut, derive_seed
from .params import Params, local_cut_bound, strict_nu

OUTSIDE = -1

__all__ = ["OUTSIDE", "MirrorCluster", "BufferState", "MirrorCutStore", "ClusterEngine",
           "local_cut_bound", "mirror_graph"]


def mirror_graph(g: DynamicGraph, members, outside: int | None = OUTSIDE) -> DynamicGraph:
    """G/(V \\ C): C's induced subgraph plus one vertex for everything else."""
    members = set(members)
    h = DynamicGraph()
    for v in sorted(members):
        h.add_vertex(v)
    if outside is not None:
        h.add_vertex(outside)
    for u in members:
        out = 0
        for w, k in g.adj[u].items():
            if w in members:
                if u < w:
                    h.insert_edge(u, w, k)
            else:
                out += k
        if out:
            if outside is None:
                raise GraphError("cluster has boundary edges but no outside vertex")
            h.insert_edge(u, outside, out)
    return h


@dataclass
class MirrorCluster:
    base: DynamicGraph
    cluster_id: int
    outside: int | None = OUTSIDE

    def real_cut(self, side: frozenset) -> frozenset:
        """The level-graph cut with the same boundary as a mirror cut."""
        if self.outside is None or self.outside not in side:
            return side
        return frozenset(v for v in self.base.adj if v not in side)


def _apply(g: DynamicGraph, op: tuple) -> list[tuple[int, int, int]]:
    """Apply an engine op; returns the removed edges for set deletions."""
    kind = op[0]
    if kind == "addv":
        g.add_vertex(op[1])
    elif kind == "ins":
        g.insert_edge(op[1], op[2], op[3])
    elif kind == "del":
        g.delete_edge(op[1], op[2], op[3])
    elif kind == "setdel":
        removed = []
        S = op[1]
        for x in sorted(S):
            for _, w, k in g.remove_vertex(x):
                if w not in S:
                    removed.append((x, w, k))
        return removed
    else:
        raise GraphError(f"unknown engine op {op!r}")
    return []


class BufferState:
    """Buffer algorithm on one mirror graph.

    ``H`` is the forwarded graph, ``W`` the current input (H plus buffered
    ops). ``small_cut`` is kept in W's vertex ids.
    """

    def __init__(self, lambda_min: float, volume_bound: float, trials: int, seed: int):
        self.lambda_min = lambda_min
        self.nu = strict_nu(volume_bound)
        self.trials = trials
        self.seed = seed
        self.H = DynamicGraph()
        self.W = DynamicGraph()
        self.buffer: list[tuple] = []
        self.has_small_cut = False
        self.small_cut: frozenset = frozenset()
        self.small_cut_value = 0
        self.marked: set[int] = set()
        self.batches = 0
        self.runs = 0

    def handle_update(self, op: tuple) -> None:
        """Queue op, maintain the small-cut value and marks (BatchUpdate not run)."""
        removed = _apply(self.W, op)
        self.buffer.append(op)
        kind = op[0]
        if kind == "addv":
            self.marked.add(op[1])
        elif kind in ("ins", "del"):
            _, u, v, k = op
            if self.has_small_cut and ((u in self.small_cut) != (v in self.small_cut)):
                self.small_cut_value += k if kind == "ins" else -k
            if kind == "del":
                self.marked.add(u)
                self.marked.add(v)
        else:
            S = op[1]
            self.marked -= S
            for _, w, _ in removed:
                self.marked.add(w)
            if self.has_small_cut:
                rest = self.small_cut - S
                if not rest or len(rest) == self.W.n:
                    self.has_small_cut = False
                    self.small_cut = frozenset()
                else:
                    self.small_cut = rest
                    adj = self.W.adj
                    self.small_cut_value = sum(k for u in rest for w, k in adj[u].items() if w not in rest)
        if self.has_small_cut and self.small_cut_value >= self.lambda_min:
            self.has_small_cut = False
            self.small_cut = frozenset()

    def batch_update(self) -> list[tuple] | None:
        """Probe marked vertices; flush and return the forwarded ops on a clean exit."""
        W = self.W
        while self.marked and not self.has_small_cut:
            v = min(self.marked)
            params = LocalCutParams(self.nu, self.lambda_min, self.trials, derive_seed(self.seed, self.batches))
            self.batches += 1
            self.runs += self.trials
            best = None
            for c in batch_local_k_cut(W, v, params):
                if c.boundary < self.lambda_min:
                    key = (c.boundary, c.volume, sorted(c.side))
                    if best is None or key < best[0]:
                        best = (key, c)
            if best is not None:
                c = best[1]
                self.has_small_cut = True
                self.small_cut = c.side
                self.small_cut_value = c.boundary
            else:
                self.marked.discard(v)
        if self.has_small_cut:
            return None
        return self.flush()

    def flush(self) -> list[tuple]:
        order = {"addv": 0, "ins": 1, "del": 2, "setdel": 3}
        ops = []
        for op in sorted(self.buffer, key=lambda op: order[op[0]]):
            removed = _apply(self.H, op)
            ops.append(op + (tuple(removed),) if op[0] == "setdel" else op)
        self.buffer = []
        return ops

    def output(self) -> tuple[bool, DynamicGraph]:
        return self.has_small_cut, self.H


class MirrorCutStore:
    """Per-vertex cheapest local cut (value <= lambda_max) on the forwarded graph.

    Records are keyed by vertex set: [value, volume, mirror_of set].
    ``contains`` maps each vertex to the keys of records that include it.
    """

    def __init__(self, g: DynamicGraph, lambda_max: float, volume_bound: float, trials: int, seed: int):
        self.g = g
        self.lambda_max = lambda_max
        self.nu = strict_nu(volume_bound)
        self.trials = trials
        self.seed = seed
        self.records: dict[frozenset, list] = {}
        self.best: dict[int, frozenset] = {}
        self.contains: dict[int, set[frozenset]] = {}
        self.batches = 0
        self.runs = 0

    # record bookkeeping

    def _key(self, S: frozenset) -> tuple:
        rec = self.records[S]
        return (rec[0], rec[1], sorted(S))

    def _attach(self, u: int, S: frozenset, value: int, vol: int) -> None:
        rec = self.records.get(S)
        if rec is None:
            rec = self.records[S] = [value, vol, set()]
            for x in S:
                self.contains.setdefault(x, set()).add(S)
        rec[2].add(u)
        self.best[u] = S

    def mirror_delete(self, S: frozenset, u: int) -> None:
        rec = self.records.get(S)
        if rec is None or u not in rec[2]:
            raise KeyError(f"{u} does not refer to cut {sorted(S)}")
        rec[2].remove(u)
        if self.best.get(u) == S:
            del self.best[u]
        if not rec[2]:
            for x in S:
                refs = self.contains.get(x)
                if refs is not None:
                    refs.discard(S)
                    if not refs:
                        del self.contains[x]
            del self.records[S]

    def _drop(self, S: frozenset) -> list[int]:
        owners = sorted(self.records[S][2])
        for u in owners:
            self.mirror_delete(S, u)
        return owners

    # processing

    def process_vertex(self, v: int) -> None:
        params = LocalCutParams(self.nu, self.lambda_max, self.trials, derive_seed(self.seed, self.batches))
        self.batches += 1
        self.runs += self.trials
        for c in batch_local_k_cut(self.g, v, params):
            if c.boundary > self.lambda_max:
                continue
            key = (c.boundary, c.volume, sorted(c.side))
            for u in sorted(c.side):
                cur = self.best.get(u)
                if cur == c.side:
                    continue
                if cur is None or key < self._key(cur):
                    if cur is not None:
                        self.mirror_delete(cur, u)
                    self._attach(u, c.side, c.boundary, c.volume)

    def handle_ops(self, ops: list[tuple]) -> None:
        """Bring the store in line with ops already applied to the graph."""
        todo: set[int] = set()
        for op in ops:
            kind = op[0]
            if kind == "addv":
                todo.add(op[1])
            elif kind in ("ins", "del"):
                _, u, v, k = op
                sign = 1 if kind == "ins" else -1
                for S in self.contains.get(u, set()) | self.contains.get(v, set()):
                    rec = self.records[S]
                    if (u in S) != (v in S):
                        rec[0] += sign * k
                        if sign > 0:
                            todo.update(rec[2])
                    rec[1] += sign * k * ((u in S) + (v in S))
                if sign < 0:
                    todo.add(u)
                    todo.add(v)
            else:
                # ('setdel', S, removed edges (x in S, w outside S, k))
                S, removed = op[1], op[2]
                hit = set()
                for x in S:
                    hit |= self.contains.get(x, set())
                for key in hit:
                    owners = self.records[key][2]
                    todo.update(owners)
                    for u in owners:
                        del self.best[u]
                    self._forget(key)
                for x, w, k in removed:
                    for key in self.contains.get(w, ()):
                        rec = self.records[key]
                        rec[0] -= k
                        rec[1] -= k
                    todo.add(w)
                todo -= S
        # refresh anything whose value or volume left the window
        for S in list(self.records):
            rec = self.records[S]
            if rec[0] > self.lambda_max or rec[1] >= self.nu:
                todo.update(self._drop(S))
        for v in sorted(todo):
            if v in self.g.adj:
                self.process_vertex(v)

    def _forget(self, S: frozenset) -> None:
        for x in S:
            refs = self.contains.get(x)
            if refs is not None:
                refs.discard(S)
                if not refs:
                    del self.contains[x]
        del self.records[S]

    def min_mirror_cut(self) -> Cut | None:
        if not self.records:
            return None
        S = min(self.records, key=self._key)
        rec = self.records[S]
        return Cut(S, rec[0], rec[1])

    def stored(self, v: int) -> tuple[frozenset, int, int] | None:
        S = self.best.get(v)
        if S is None:
            return None
        rec = self.records[S]
        return S, rec[0], rec[1]

    def validate(self) -> None:
        adj = self.g.adj
        for S, (value, vol, owners) in self.records.items():
            assert owners, "record without referrers"
            assert all(x in adj for x in S), "record mentions a removed vertex"
            assert value == sum(k for u in S for w, k in adj[u].items() if w not in S), "stale cut value"
            assert vol == sum(self.g.deg[u] for u in S), "stale cut volume"
            assert value <= self.lambda_max and vol < self.nu
            for u in owners:
                assert self.best[u] == S and u in S
        for u, S in self.best.items():
            assert u in self.records[S][2]


class ClusterEngine:
    """Buffer plus mirror-cut store for one cluster's mirror graph."""

    def __init__(self, base: DynamicGraph, outside: int | None, params: Params, n_log: int, seed: int,
                 cluster_id: int = 0):
        self.params = params
        self.outside = outside
        self.cluster_id = cluster_id
        lm = params.lambda_min
        self.buffer = BufferState(lm, local_cut_bound(params), params.buffer_trials(n_log),
                                  derive_seed(seed, 1))
        self.store = MirrorCutStore(self.buffer.H, params.lambda_max, params.process_volume,
                                    params.mirror_trials(n_log), derive_seed(seed, 2))
        # preprocessing: H starts empty, the whole graph sits in the buffer, all marked
        for v in sorted(base.adj):
            self.buffer.handle_update(("addv", v))
        for u, v, k in base.edges():
            self.buffer.handle_update(("ins", u, v, k))
        self.dirty = True
        self.settle()

    @property
    def has_small_cut(self) -> bool:
        return self.buffer.has_small_cut

    @property
    def graph(self) -> DynamicGraph:
        """The current input graph (H plus buffered ops)."""
        return self.buffer.W

    def stage(self, op: tuple) -> None:
        self.buffer.handle_update(op)
        self.dirty = True

    def settle(self) -> bool:
        """Run BatchUpdate; on a flush feed the store. Returns has_small_cut."""
        if self.dirty:
            ops = self.buffer.batch_update()
            if ops is not None:
                self.store.handle_ops(ops)
                self.dirty = False
        return self.buffer.has_small_cut

    def real_cut(self, side: frozenset) -> frozenset:
        if self.outside is None or self.outside not in side:
            return side
        return frozenset(v for v in self.buffer.W.adj if v not in side)

    def min_cut(self) -> Cut | None:
        """Cheapest stored mirror cut, expressed as a cut of the level graph."""
        c = self.store.min_mirror_cut()
        if c is None:
            return None
        return Cut(self.real_cut(c.side), c.boundary, c.volume, cluster=self.cluster_id)

    def small_cut_real(self) -> frozenset:
        return self.real_cut(self.buffer.small_cut)
