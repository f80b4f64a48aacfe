import math
import random

import pytest

from dyncut.graph import GraphError
from dyncut.sparsify import Sparsifier, probability_for

from conftest import random_connected


def test_probability_examples():
    assert probability_for(10, 0.1, 100) == 1.0
    assert probability_for(5400, 0.1, math.e) == pytest.approx(1.0)
    assert probability_for(216, 1, math.e ** 2) == pytest.approx(0.5)


def test_extreme_probabilities():
    sp1, sp0 = Sparsifier(4, 1.0, 0), Sparsifier(4, 0.0, 0)
    ops = [("+", 0, 1), ("+", 1, 2), ("+", 0, 1), ("-", 0, 1)]
    for op in ops:
        assert sp1.apply_update(op) == op
        assert sp0.apply_update(op) is None
    assert sp1.shadow.m == 2 and sp0.shadow.m == 0


def test_half_rate():
    sp = Sparsifier(2, 0.5, 7)
    kept = sum(sp.sample_decision((0, 1, s)) for s in range(10_000))
    assert 4700 <= kept <= 5300


def test_insert_then_delete_restores_shadow():
    rng = random.Random(2)
    for seed in range(20):
        sp = Sparsifier(8, 0.4, seed)
        sp.load(random_connected(8, 12, rng))
        before = sp.shadow.copy()
        sp.apply_update(("+", 2, 5))
        sp.apply_update(("-", 2, 5))
        assert sp.shadow == before


def test_shadow_depends_only_on_source():
    a, b = Sparsifier(5, 0.5, 3), Sparsifier(5, 0.5, 3)
    for op in [("+", 0, 1), ("+", 0, 1), ("+", 1, 2), ("-", 0, 1), ("+", 3, 4)]:
        a.apply_update(op)
    for op in [("+", 1, 2), ("+", 3, 4), ("+", 0, 1)]:
        b.apply_update(op)
    assert a.shadow == b.shadow


def test_delete_of_absent_instance():
    with pytest.raises(GraphError):
        Sparsifier(3, 0.5, 0).apply_update(("-", 0, 1))
