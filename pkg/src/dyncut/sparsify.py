"""Uniform edge sampling kept consistent under insertions and deletions."""
from __future__ import annotations

import hashlib
import math

from .graph import DynamicGraph, GraphError


def probability_for(b: float, eps: float, n: float) -> float:
    if b < 1:
        raise ValueError("threshold b must be at least 1")
    return min(1.0, 54 * math.log(n) / (eps * eps * b))


class Sparsifier:
    """Keeps each edge instance with probability p, decided by a hash.

    An instance is identified by (min endpoint, max endpoint, seq). The live
    instances of a pair are numbered 0..k-1 in insertion order and a deletion
    removes the highest one, so the shadow is a pure function of the current
    source multigraph and insert-then-delete restores the prior state.
    """

    def __init__(self, n: int, p: float, seed: int):
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        self.p = p
        self.seed = seed
        self.shadow = DynamicGraph(n)
        self.kept: set[tuple[int, int, int]] = set()
        self._live: dict[tuple[int, int], int] = {}
        self._cut = int(p * 2 ** 64)

    def sample_decision(self, edge_identity: tuple[int, int, int]) -> bool:
        if self.p >= 1:
            return True
        if self.p <= 0:
            return False
        key = f"{self.seed}:{edge_identity[0]}:{edge_identity[1]}:{edge_identity[2]}".encode()
        h = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
        return h < self._cut

    def apply_update(self, op: tuple) -> tuple | None:
        """Apply ('+'|'-', u, v) to the source view; return the op forwarded to the shadow."""
        kind, u, v = op
        pair = (min(u, v), max(u, v))
        if kind == "+":
            self.shadow._check(u, v)
            seq = self._live.get(pair, 0)
            self._live[pair] = seq + 1
            ident = pair + (seq,)
            if self.sample_decision(ident):
                self.shadow.insert_edge(u, v)
                self.kept.add(ident)
                return op
            return None
        if kind == "-":
            seq = self._live.get(pair, 0) - 1
            if seq < 0:
                raise GraphError(f"edge ({u},{v}) was never inserted at the source")
            self._live[pair] = seq
            ident = pair + (seq,)
            if ident in self.kept:
                self.kept.remove(ident)
                self.shadow.delete_edge(u, v)
                return op
            return None
        raise ValueError(f"unknown op {op!r}")

    def load(self, g: DynamicGraph) -> None:
        for u, v, k in g.edges():
            for _ in range(k):
                self.apply_update(("+", u, v))
