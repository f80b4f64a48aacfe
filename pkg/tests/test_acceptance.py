"""Acceptance criteria 1-8, each reported as one PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""
import math
import random
import sys
import time

import pytest

from dyncut.generators import FAMILIES, make_graph, random_stream
from dyncut.graph import DynamicGraph, boundary
from dyncut.hierarchy import ABOVE_MAX, VALUE, Hierarchy
from dyncut.localkcut import LocalCutParams, batch_local_k_cut, karger_global, local_k_cut, trials_for
from dyncut.master import MasterState
from dyncut.mirror import OUTSIDE, ClusterEngine, mirror_graph
from dyncut.oracle import (cut_tables, enumerate_boundary_sparse, enumerate_extreme_sets,
                           enumerate_gamma_extreme, exact_min_cut, has_local_cut_below,
                           min_local_cut_through)
from dyncut.params import Params, strict_nu
from dyncut.sparsify import Sparsifier, probability_for

EPS = 0.1
H = 3
INSTANCE_TOL = (1 + 2 * EPS) ** H
MASTER_TOL = INSTANCE_TOL * (1 + EPS) ** 2


# filled as criteria run; the pytest terminal summary prints them (see conftest.py)
LINES = []


def report(number, title, ok, detail):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    LINES.append(line)
    return line


# 1. end-to-end approximation of the master

def criterion_1():
    t0 = time.time()
    queries = good = extracted = exact_ok = triples = asked = 0
    for t in range(51):
        family = FAMILIES[t % 3]
        rng = random.Random(1000 + t)
        g = make_graph(family, rng.randint(8, 14), rng, max_edges=50)
        if g.m > 50:
            continue
        lam0 = exact_min_cut(g).boundary
        params = Params(eps=EPS).with_lambda(max(1, lam0))
        ms = MasterState(g, params, seed=t)
        triples += 1
        for op in random_stream(g, 100, rng, query_every=5, max_edges=50):
            if op[0] != "?":
                ms.apply_update(op)
                continue
            r = ms.query()
            asked += 1
            if r is None:
                continue
            lam = exact_min_cut(ms.source).boundary
            queries += 1
            good += lam > 0 and 1 <= r.value / lam <= MASTER_TOL + 1e-9
            side, b = ms.extract_cut(r)
            extracted += 1
            exact_ok += b == r.answer.value
    secs = time.time() - t0
    ok = triples >= 50 and queries > 0 and good >= 0.95 * queries and exact_ok == extracted and secs < 300
    return ok, (f"{triples} triples, {good}/{queries} answered queries (of {asked}) within [1, {MASTER_TOL:.3f}], "
                f"exact boundary == value {exact_ok}/{extracted}, {secs:.0f}s")


# 2. bounded instance requirements

def _graph_near_four(rng):
    while True:
        n = rng.randint(9, 12)
        g = make_graph("gnp", n, rng, max_edges=rng.randint(24, 34))
        if 3 <= exact_min_cut(g).boundary <= 6:
            return g


def criterion_2():
    params = Params(eps=EPS, lambda_min=4, lambda_max=4.8)
    in_window = in_ok = above = above_ok = 0
    for t in range(40):
        rng = random.Random(2000 + t)
        g = _graph_near_four(rng)
        h = Hierarchy(g, params, seed=t)
        ops = [op for op in random_stream(g, 30, rng, query_every=0, max_edges=g.m + 3)]
        for op in [None] + ops:
            if op is not None:
                h.apply_update(op)
            lam = exact_min_cut(h.graph).boundary
            a = h.query()
            if 4 <= lam <= 4.8:
                in_window += 1
                in_ok += a.kind == VALUE and lam <= a.value <= INSTANCE_TOL * lam
            elif lam > 4.8:
                above += 1
                above_ok += a.kind == ABOVE_MAX or (a.kind == VALUE and a.value > 4.8)
    ok = in_window > 0 and in_ok >= 0.95 * in_window and above_ok == above
    return ok, f"in window {in_ok}/{in_window} within {INSTANCE_TOL:.3f}; above lambda_max {above_ok}/{above}"


# 3. invariant 1 after build and after every settled update

def _sparse_cut_free(h, limit=30):
    """None if some cluster is too large to enumerate, else whether no level has a qualifying cut."""
    p = h.params
    for L in h.levels:
        if L.base:
            continue
        for C in L.cd.clusters.values():
            if sum(L.g.deg[x] for x in C.members) > limit:
                return None
    for L in h.levels:
        if L.base:
            continue
        for C in L.cd.clusters.values():
            if C.frozen or len(C.members) < 2:
                continue
            if enumerate_boundary_sparse(L.g, C.members, p.eps, math.inf, p.find_volume,
                                         inner_range=(p.lambda_min, p.lambda_max)):
                return False
    return True


def criterion_3():
    checked = clean = skipped = 0
    t = 0
    while checked < 1000 and t < 400:
        rng = random.Random(3000 + t)
        n = rng.randint(7, 11)
        g = make_graph("gnp", n, rng, max_edges=rng.randint(12, 20))
        params = Params(eps=EPS).with_lambda(max(1, exact_min_cut(g).boundary))
        h = Hierarchy(g, params, seed=t)
        for op in [None] + random_stream(g, 25, rng, query_every=0, max_edges=20):
            if op is not None:
                h.apply_update(op)
            res = _sparse_cut_free(h)
            if res is None:
                skipped += 1
                continue
            checked += 1
            clean += res
        t += 1
    ok = checked >= 1000 and clean >= 0.99 * checked
    return ok, f"{clean}/{checked} states free of sparse cuts ({skipped} states skipped for size)"


# 4. LocalKCut hit rates

def _lkc_family():
    rng = random.Random(4)
    out = []
    for i in range(10):
        fam = FAMILIES[i % 3]
        out.append(make_graph(fam, rng.randint(8, 10), rng, max_edges=rng.randint(14, 22)))
    return out


def criterion_4(runs=10_000):
    k, nu = 3, 20
    worst = math.inf
    sets = rate_fail = 0
    sizes = {}
    gamma_sets = gamma_zero = gamma_batch_fail = 0
    for gi, g in enumerate(_lkc_family()):
        params = LocalCutParams(nu=strict_nu(nu), k=k)
        extreme = [c for c in enumerate_extreme_sets(g, k, nu) if len(c.side) <= 5]
        gamma = [c for c, conn in enumerate_gamma_extreme(g, 1 / 3, k, nu) if conn and len(c.side) <= 5]
        targets = {c.side for c in extreme} | {c.side for c in gamma}
        # single-run frequencies, one run per seed, started from the smallest member
        freq = {}
        for S in targets:
            v = min(S)
            rng = random.Random(gi * 7919 + v)
            hits = 0
            for r in range(runs):
                chain = local_k_cut(g, v, params, run=r, rng=rng)
                hits += any(len(S) == i and chain.prefix(i) == S for i, _, _ in chain.checkpoints)
            freq[S] = hits / runs
        for c in extreme:
            if not _connected(g, c.side):
                continue
            sets += 1
            sizes[len(c.side)] = sizes.get(len(c.side), 0) + 1
            need = 0.1 * len(c.side) ** -2
            worst = min(worst, freq[c.side] / need)
            rate_fail += freq[c.side] < need
        for c in gamma:
            gamma_sets += 1
            p_hat = freq[c.side]
            if p_hat == 0:
                gamma_zero += 1
                continue
            trials = trials_for(p_hat, 10, g.n)
            found = sum(c.side in {x.side for x in batch_local_k_cut(
                g, min(c.side), LocalCutParams(strict_nu(nu), k, trials, seed=1_000_003 * b + gi))}
                for b in range(100))
            gamma_batch_fail += found < 99
    ok = sets > 0 and rate_fail == 0 and gamma_zero == 0 and gamma_batch_fail == 0
    by_size = ", ".join(f"|S|={z}: {sizes[z]}" for z in sorted(sizes))
    return ok, (f"{sets} connected extreme sets ({by_size}), min freq / (0.1|S|^-2) = {worst:.2f}; "
                f"{gamma_sets} gamma-extreme sets, {gamma_zero} never hit, {gamma_batch_fail} below 99/100 batches")


def _connected(g, S):
    S = set(S)
    start = min(S)
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for w in g.adj[x]:
            if w in S and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == S


# 5. buffer and mirror correctness

def criterion_5():
    P = Params(eps=EPS, lambda_min=3, lambda_max=3.6)
    states = small_ok = store_ok = 0
    values_ok = values = 0
    cap = 15  # edges, so the mirror volume stays at most 30
    for t in range(200):
        r = random.Random(5000 + t)
        n = r.randint(4, 8)
        g = DynamicGraph(n + 1)
        while g.m < r.randint(n, cap):
            g.insert_edge(*r.sample(range(n + 1), 2))
        e = ClusterEngine(mirror_graph(g, set(range(n))), OUTSIDE, P, n_log=16, seed=t)
        for _ in range(50):
            W = e.graph
            edges = list(W.edges())
            if edges and (W.m >= cap or r.random() < 0.5):
                u, v, _ = r.choice(edges)
                e.stage(("del", u, v, 1))
            else:
                u, v = r.sample(sorted(W.adj), 2)
                e.stage(("ins", u, v, 1))
            e.settle()
            states += 1
            small_ok += has_local_cut_below(W, P.local_cut_bound, P.lambda_min) == e.has_small_cut
            H = e.buffer.H
            tables = cut_tables(H)
            best = [min_local_cut_through(H, v, strict_nu(P.process_volume) - 1, P.lambda_max, tables=tables)
                    for v in H.adj]
            best = [c.boundary for c in best if c is not None]
            got = e.store.min_mirror_cut()
            store_ok += (min(best) if best else None) == (got.boundary if got else None)
            for S, (value, vol, _) in e.store.records.items():
                values += 1
                values_ok += value == boundary(H, S)
    ok = small_ok >= 0.99 * states and store_ok >= 0.99 * states and values_ok == values
    return ok, (f"has_small_cut {small_ok}/{states}, min_mirror_cut {store_ok}/{states}, "
                f"stored values exact {values_ok}/{values}")


# 6. sparsifier concentration

def criterion_6():
    eps, mult = 0.3, 200
    n = 12
    g = DynamicGraph(n)
    matched = {(2 * i, 2 * i + 1) for i in range(n // 2)}
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in matched:
                g.insert_edge(u, v, mult)
    lam = exact_min_cut(g).boundary
    p = probability_for(lam, eps, n)
    inside = 0
    for seed in range(200):
        sp = Sparsifier(n, p, seed)
        sp.load(g)
        x = exact_min_cut(sp.shadow).boundary
        inside += (1 - eps) * p * lam <= x <= (1 + eps) * p * lam
    ok = p < 1 and inside >= 0.95 * 200
    return ok, f"K12 minus a matching x{mult}, lambda={lam}, eps={eps}, p={p:.3f}: {inside}/200 seeds inside"


# 7. determinism and amortization counters

def _trace(g, ops, params, seed):
    h = Hierarchy(g, params, seed=seed)
    out = []
    for op in ops:
        h.apply_update(op)
        a = h.query()
        out.append((a, tuple(tuple(L.cd.partition()) if not L.base else () for L in h.levels)))
    return h, out


def criterion_7(c=2.0):
    same = total = cost_ok = resp_ok = 0
    worst_ratio = 0.0
    for t in range(20):
        rng = random.Random(7000 + t)
        g = make_graph(FAMILIES[t % 3], rng.randint(10, 14), rng, max_edges=40)
        ops = random_stream(g, 40, rng, query_every=0, max_edges=45)
        params = Params(eps=EPS).with_lambda(max(1, exact_min_cut(g).boundary))
        h1, tr1 = _trace(g, ops, params, seed=t)
        _, tr2 = _trace(g, ops, params, seed=t)
        total += 1
        same += tr1 == tr2
        mu = g.m + len(ops)
        bound = c * mu * math.log2(mu)
        worst_ratio = max(worst_ratio, h1.split_cost() / bound)
        cost_ok += h1.split_cost() <= bound
        resp_ok += h1.max_responsibility() <= params.responsibility_bound()
    ok = same == total and cost_ok == total and resp_ok == total
    return ok, (f"identical traces {same}/{total}; split cost <= {c}(m+U)log2(m+U) {cost_ok}/{total} "
                f"(worst ratio {worst_ratio:.3f}); responsibility within bound {resp_ok}/{total}")


# 8. Karger oracle calibration

def criterion_8():
    rng = random.Random(8)
    graphs = [DynamicGraph(5, [(i, (i + 1) % 5) for i in range(5)])]
    while len(graphs) < 8:
        n = rng.randint(4, 8)
        g = DynamicGraph(n)
        for v in range(1, n):
            g.insert_edge(v, rng.randrange(v))
        for _ in range(rng.randint(0, 2 * n)):
            g.insert_edge(*rng.sample(range(n), 2))
        graphs.append(g)
    results = []
    for gi, g in enumerate(graphs):
        lam = exact_min_cut(g).boundary
        limit = math.ceil(10 * math.log(g.n) * math.comb(g.n, 2))
        found = 0
        for rep in range(100):
            base = (gi * 100 + rep) * limit
            found += any(karger_global(g, base + s).boundary == lam for s in range(limit))
        results.append(found)
    ok = all(f >= 99 for f in results)
    return ok, f"repetitions finding the min cut per graph (C5 first): {results}"


CRITERIA = [
    (1, "end-to-end approximation", criterion_1),
    (2, "bounded-instance requirements", criterion_2),
    (3, "invariant 1 enforcement", criterion_3),
    (4, "LocalKCut hit rates", criterion_4),
    (5, "buffer and mirror correctness", criterion_5),
    (6, "sparsifier concentration", criterion_6),
    (7, "determinism and amortization", criterion_7),
    (8, "Karger calibration", criterion_8),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, detail = fn()
    line = report(number, title, ok, detail)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        print(report(number, title, ok, detail), flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
