"""Parameters shared by the cluster, mirror and hierarchy layers."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .localkcut import trials_for


def strict_nu(bound: float) -> int:
    """Volume budget for LocalKCut so that recorded prefixes have Vol <= bound."""
    return math.floor(bound) + 1


@dataclass(frozen=True)
class Params:
    eps: float = 0.1
    phi: float = 0.25
    alpha: float = 0.25
    rho: float = 1.0
    lambda_min: float = 4.0
    lambda_max: float = 4.8
    gamma: float = 1 / 3
    batch_multiplier: float = 1.0
    restart_factor: float = 1.0
    mode: str = "desk"
    max_levels: int = 3
    exhaustive_limit: int = 18
    # desk mode: runs per LocalKCut batch = trials_for(desk_p, desk_c, n)
    desk_p: float = 0.05
    desk_c: float = 2.0

    def __post_init__(self):
        if self.mode not in ("paper", "desk"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 < self.lambda_min <= self.lambda_max:
            raise ValueError("need 0 < lambda_min <= lambda_max")
        if self.lambda_max > 1.2 * self.lambda_min + 1e-9:
            raise ValueError("lambda_max / lambda_min must not exceed 1.2")
        if self.mode == "paper" and self.eps > 0.04:
            raise ValueError("mode=paper needs eps <= 0.04")
        if abs(1 / self.gamma - round(1 / self.gamma)) > 1e-9:
            raise ValueError("gamma must be the inverse of an integer")
        if not 0 < self.phi <= 1 or self.alpha <= 0:
            raise ValueError("need 0 < phi <= 1 and alpha > 0")

    @classmethod
    def theoretical(cls, n: int, eps: float = 0.04, **kw) -> "Params":
        ln = math.log(max(n, 2))
        return cls(eps=eps, lambda_min=54 * (1 - eps) * ln / eps ** 2,
                   lambda_max=54 * 1.1 * (1 + eps) * ln / eps ** 2, mode="paper", **kw)

    def with_lambda(self, lambda_min: float, lambda_max: float | None = None) -> "Params":
        if lambda_max is None:
            lambda_max = 1.2 * lambda_min
        return replace(self, lambda_min=lambda_min, lambda_max=lambda_max)

    # volume budgets

    @property
    def find_volume(self) -> float:
        return self.lambda_max / self.phi

    @property
    def local_cut_bound(self) -> float:
        return local_cut_bound(self)

    @property
    def process_volume(self) -> float:
        return 2 * self.lambda_max / self.phi + 2 * self.lambda_max

    @property
    def terminal_volume(self) -> float:
        return self.lambda_max / self.phi

    # batch sizes

    def _trials(self, formula_count: float, n: int) -> int:
        if self.mode == "paper":
            return max(1, math.ceil(self.batch_multiplier * formula_count))
        return trials_for(self.desk_p, self.desk_c, max(n, 2))

    def find_trials(self, n: int) -> int:
        lm = self.lambda_max
        return self._trials(10 * math.log(max(n, 2)) * (lm / self.phi) ** 6 * lm ** 4, n)

    def buffer_trials(self, n: int) -> int:
        return self._trials(10 * math.log(max(n, 2)) * (4 * self.lambda_max / self.phi) ** 2, n)

    def mirror_trials(self, n: int) -> int:
        return self.find_trials(n)

    def restart_period(self, m: int) -> int:
        return max(1, math.floor(math.floor(m * self.phi / self.rho) * self.restart_factor))

    def responsibility_bound(self) -> int:
        return math.ceil(self.lambda_max / (self.phi * self.lambda_min)) + 1


def local_cut_bound(params: Params) -> float:
    return 4 * params.lambda_max / params.phi
