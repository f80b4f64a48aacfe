import math
import random

from dyncut.graph import boundary
from dyncut.hierarchy import ABOVE_MAX, BELOW_MIN, VALUE, InstanceAnswer
from dyncut.master import MasterState, ladder, master_apply_update, master_extract_cut, master_query
from dyncut.oracle import exact_min_cut
from dyncut.params import Params

from conftest import random_connected, two_triangles


def test_ladder_bounds():
    rungs = ladder(12, 0.1)
    assert [i for i, _, _ in rungs] == list(range(1, math.ceil(math.log(144, 1.1)) + 1))
    assert all(p == 1 for _, _, p in rungs)
    assert any(p < 1 for _, _, p in ladder(12, 1.0))


def test_p_one_instances_mirror_source():
    g = random_connected(9, 8, random.Random(0))
    ms = MasterState(g, Params().with_lambda(2), seed=1)
    for op in [("+", 0, 5), ("-", 0, 5), ("+", 3, 4)]:
        master_apply_update(ms, op)
    assert len(ms._unique()) == 1
    for inst in ms.instances:
        assert inst.hierarchy.graph == ms.source


def test_insert_then_delete_is_a_no_op():
    g = random_connected(12, 20, random.Random(3))
    ms = MasterState(g, Params(eps=1.0).with_lambda(2), seed=4)
    assert any(inst.p < 1 for inst in ms.instances)
    before = [inst.sparsifier.shadow.copy() for inst in ms._unique()]
    master_apply_update(ms, ("+", 1, 7))
    master_apply_update(ms, ("-", 1, 7))
    assert [inst.sparsifier.shadow for inst in ms._unique()] == before
    for inst in ms._unique():
        assert inst.hierarchy.graph == inst.sparsifier.shadow


def test_selection_rule():
    ms = MasterState(two_triangles(), Params(lambda_min=5, lambda_max=6), seed=0)
    fake = [InstanceAnswer(BELOW_MIN), InstanceAnswer(VALUE, 6), InstanceAnswer(VALUE, 5), InstanceAnswer(ABOVE_MAX)]
    ms.answers = lambda: list(zip(ms.instances[:4], fake))
    r = master_query(ms)
    assert r.instance == 2 and r.value == 6
    ms.answers = lambda: [(inst, InstanceAnswer(ABOVE_MAX)) for inst in ms.instances]
    assert master_query(ms) is None


def test_dumbbell_returns_a_triangle():
    ms = MasterState(two_triangles(), Params(lambda_min=1, lambda_max=1.2), seed=0)
    r = master_query(ms)
    side, b = master_extract_cut(ms, r)
    assert r.value == 1 and b == 1 and side in ({0, 1, 2}, {3, 4, 5})


def test_exact_boundary_matches_value_on_streams():
    rng = random.Random(6)
    answered = 0
    for t in range(6):
        g = random_connected(10, 15, rng)
        lam = exact_min_cut(g).boundary
        ms = MasterState(g, Params().with_lambda(lam), seed=t)
        for _ in range(15):
            edges = ms.source.edge_list()
            if rng.random() < 0.5:
                master_apply_update(ms, ("-", *rng.choice(edges)))
            else:
                master_apply_update(ms, ("+", *rng.sample(range(10), 2)))
            r = master_query(ms)
            if r is not None:
                answered += 1
                side, b = master_extract_cut(ms, r)
                assert b == r.value == boundary(ms.source, side)
                assert exact_min_cut(ms.source).boundary <= r.value
    assert answered > 0


def test_same_seed_same_answers():
    g = random_connected(10, 12, random.Random(1))
    ops = [("+", 0, 9), ("-", 0, 9), ("+", 2, 3), ("+", 4, 8)]

    def trace():
        ms = MasterState(g, Params().with_lambda(2), seed=5)
        out = []
        for op in ops:
            ms.apply_update(op)
            r = ms.query()
            out.append(None if r is None else (r.value, r.instance, ms.extract_cut(r)))
        return out
    assert trace() == trace()


def test_parallel_fan_out_matches_serial():
    g = random_connected(12, 20, random.Random(2))
    ops = [("+", 1, 2), ("+", 3, 9), ("-", 1, 2)]
    results = []
    for parallel in (1, 4):
        ms = MasterState(g, Params(eps=1.0).with_lambda(2), seed=8, parallel=parallel)
        for op in ops:
            ms.apply_update(op)
        results.append([inst.hierarchy.graph.signature() for inst in ms._unique()])
    assert results[0] == results[1]
