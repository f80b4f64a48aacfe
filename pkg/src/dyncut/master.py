"""The global algorithm: a ladder of sparsified bounded min-cut instances.

Rung i guesses lambda ~ b_i = 1.1^i and samples edges with
p_i = probability_for(b_i). The answer comes from the smallest rung whose
instance reports a value in [lambda_min, lambda_max], scaled by 1/p_i.
Rungs whose p_i clamps to 1 see the same graph, so they share one
sparsifier and one hierarchy.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .graph import DynamicGraph, boundary
from .hierarchy import VALUE, Hierarchy, InstanceAnswer
from .localkcut import derive_seed
from .params import Params
from .sparsify import Sparsifier, probability_for


@dataclass
class Instance:
    i: int
    b: float
    p: float
    sparsifier: Sparsifier
    hierarchy: Hierarchy


@dataclass(frozen=True)
class QueryResult:
    value: float
    instance: int
    answer: InstanceAnswer


def ladder(n: int, eps: float) -> list[tuple[int, float, float]]:
    top = max(1, math.ceil(math.log(n * n) / math.log(1.1)))
    return [(i, 1.1 ** i, probability_for(1.1 ** i, eps, n)) for i in range(1, top + 1)]


class MasterState:
    def __init__(self, g: DynamicGraph, params: Params, seed: int = 0, parallel: int = 1):
        self.params = params
        self.eps = params.eps
        self.n = g.n
        self.seed = seed
        self.parallel = parallel
        self.source = g.copy()
        self.instances: list[Instance] = []
        shared = None
        for i, b, p in ladder(max(g.n, 2), params.eps):
            if p >= 1 and shared is not None:
                sp, h = shared
            else:
                sp = Sparsifier(g.n, p, derive_seed(seed, i, 0x5A))
                sp.load(g)
                h = Hierarchy(sp.shadow, params, derive_seed(seed, 0 if p >= 1 else i), n_log=max(g.n, 2))
                if p >= 1:
                    shared = (sp, h)
            self.instances.append(Instance(i, b, p, sp, h))

    def _unique(self) -> list[Instance]:
        seen, out = set(), []
        for inst in self.instances:
            if id(inst.hierarchy) not in seen:
                seen.add(id(inst.hierarchy))
                out.append(inst)
        return out

    def apply_update(self, op: tuple) -> None:
        kind, u, v = op
        if kind == "+":
            self.source.insert_edge(u, v)
        else:
            self.source.delete_edge(u, v)

        def run(inst: Instance) -> None:
            fwd = inst.sparsifier.apply_update(op)
            if fwd is not None:
                inst.hierarchy.apply_update(fwd)

        unique = self._unique()
        if self.parallel > 1 and len(unique) > 1:
            with ThreadPoolExecutor(self.parallel) as pool:
                list(pool.map(run, unique))
        else:
            for inst in unique:
                run(inst)

    def answers(self) -> list[tuple[Instance, InstanceAnswer]]:
        cache: dict[int, InstanceAnswer] = {}
        out = []
        for inst in self.instances:
            key = id(inst.hierarchy)
            if key not in cache:
                cache[key] = inst.hierarchy.query()
            out.append((inst, cache[key]))
        return out

    def query(self) -> QueryResult | None:
        p = self.params
        for inst, ans in self.answers():
            if ans.kind == VALUE and p.lambda_min <= ans.value <= p.lambda_max:
                return QueryResult(ans.value / inst.p, inst.i, ans)
        return None

    def extract_cut(self, result: QueryResult) -> tuple[frozenset, int]:
        """The winning cut as a vertex set and its exact boundary in the source graph."""
        inst = next(x for x in self.instances if x.i == result.instance)
        side = inst.hierarchy.extract_cut(result.answer)
        return side, boundary(self.source, side)

    def low_rungs_answering(self, lam: float) -> int:
        """How many rungs with b_i <= lam answer a value at most lambda_max."""
        return sum(1 for inst, ans in self.answers()
                   if inst.b <= lam and ans.kind == VALUE and ans.value <= self.params.lambda_max)


def master_apply_update(ms: MasterState, op: tuple) -> None:
    ms.apply_update(op)


def master_query(ms: MasterState) -> QueryResult | None:
    return ms.query()


def master_extract_cut(ms: MasterState, result: QueryResult) -> tuple[frozenset, int]:
    return ms.extract_cut(result)
