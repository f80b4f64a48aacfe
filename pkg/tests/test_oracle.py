import random

import pytest

from dyncut.graph import DynamicGraph, boundary, volume
from dyncut.oracle import (OracleLimitError, OracleLimits, enumerate_boundary_sparse,
                           enumerate_extreme_sets, enumerate_gamma_extreme, exact_min_cut,
                           has_local_cut_below, local_cuts_below, min_cut_flow, min_local_cut_through)

from conftest import complete, cycle, random_connected, two_triangles


def test_exact_min_cut_examples():
    assert exact_min_cut(cycle(7)).boundary == 2
    assert exact_min_cut(complete(4)).boundary == 3
    c = exact_min_cut(two_triangles())
    assert c.boundary == 1 and c.side in ({0, 1, 2}, {3, 4, 5})


def test_disconnected_gives_zero():
    assert exact_min_cut(DynamicGraph(4, [(0, 1), (2, 3)])).boundary == 0


@pytest.mark.parametrize("seed", range(25))
def test_scan_agrees_with_flow(seed):
    rng = random.Random(seed)
    g = random_connected(rng.randint(2, 11), rng.randint(0, 20), rng)
    scan, flow = exact_min_cut(g), min_cut_flow(g)
    assert scan.boundary == flow.boundary == boundary(g, flow.side)
    assert scan.boundary == boundary(g, scan.side) and scan.volume == volume(g, scan.side)


def test_limits_are_enforced():
    with pytest.raises(OracleLimitError):
        exact_min_cut(cycle(9), OracleLimits(max_subset_vertices=8))


def test_extreme_sets_examples():
    assert sorted(sorted(c.side) for c in enumerate_extreme_sets(complete(4), 3, 100)) == [[0], [1], [2], [3]]
    sides = {c.side for c in enumerate_extreme_sets(two_triangles(), 1, 100)}
    assert sides == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
    assert enumerate_extreme_sets(two_triangles(), 0, 100) == []


def test_gamma_extreme_examples():
    g = two_triangles()
    sides = {c.side for c, _ in enumerate_gamma_extreme(g, 1 / 3, 1, 100)}
    assert {frozenset({0, 1, 2}), frozenset({3, 4, 5})} <= sides
    strict = {c.side for c in enumerate_extreme_sets(g, 3, 100)}
    assert {c.side for c, _ in enumerate_gamma_extreme(g, 1.0, 3, 100)} == strict
    singles = {c.side for c, _ in enumerate_gamma_extreme(g, 0.5, 10, 100) if len(c.side) == 1}
    assert singles == {frozenset({v}) for v in range(6)}


def _eight_vertex_cluster():
    # C = {0..3}: a 4-cycle; 0 and 1 carry three outside edges each, 2 and 3 none
    g = DynamicGraph(8, [(0, 1), (1, 2), (2, 3), (3, 0)])
    for x, w in [(0, 4), (0, 5), (0, 6), (1, 5), (1, 6), (1, 7)]:
        g.insert_edge(x, w)
    return g, {0, 1, 2, 3}


def test_boundary_sparse_examples():
    g = two_triangles()
    assert enumerate_boundary_sparse(g, range(6), 0.1, 100, 100) == []
    g, C = _eight_vertex_cluster()
    found = enumerate_boundary_sparse(g, C, 0.1, 100, 100)
    # hand count: U needs outer weight 3 (exactly one of 0, 1) and inner weight
    # below 0.9 * 3, i.e. 2; {0,2} and {1,3} have inner weight 4
    assert sorted(sorted(c.side) for c in found) == [[0], [0, 2, 3], [0, 3], [1], [1, 2], [1, 2, 3]]
    assert all(c.inner < 0.9 * min(c.outer, 6 - c.outer) for c in found)
    assert enumerate_boundary_sparse(g, C, 1.0, 100, 100) == []


def test_boundary_sparse_inner_range():
    g, C = _eight_vertex_cluster()
    assert enumerate_boundary_sparse(g, C, 0.1, 100, 100, inner_range=(3, 10)) == []


def test_min_local_cut_through_examples():
    k4 = complete(4)
    assert min_local_cut_through(k4, 0, 100, 10).boundary == 3
    g = DynamicGraph(3, [(0, 1)])
    c = min_local_cut_through(g, 2, 5, 10)
    assert c.boundary == 0 and c.side == {2}
    assert min_local_cut_through(k4, 0, 100, 2) is None


def test_local_cut_predicates():
    g = two_triangles()
    assert has_local_cut_below(g, 7, 2)
    assert not has_local_cut_below(g, 6, 2)
    assert {c.side for c in local_cuts_below(g, 7, 2)} == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
