"""Patch-size selection under a per-patch transform workspace budget."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .costmodel import add_split, mul_split
from .fft import next_power_of_two

DEFAULT_CANDIDATES = (4, 8, 16, 32, 64)


class InfeasiblePlan(ValueError):
    pass


@dataclass(frozen=True)
class PlanRequest:
    N: int
    k: int
    budget_elems: float = math.inf
    candidates: tuple[int, ...] = DEFAULT_CANDIDATES

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        if self.N < 1 or self.k < 1:
            raise ValueError(f"N and k must be >= 1, got N={self.N}, k={self.k}")
        if not self.candidates or min(self.candidates) < 1:
            raise ValueError(f"candidates must be a non-empty set of sizes >= 1, got {self.candidates}")


@dataclass(frozen=True)
class Candidate:
    S: int
    feasible: bool
    workspace: int
    modeled_total: float


@dataclass(frozen=True)
class PlanResult:
    chosen_S: int
    modeled_total: float
    per_candidate: tuple[Candidate, ...]


def workspace(S: int, k: int) -> int:
    """Complex elements of one ``M x M`` patch transform."""
    return next_power_of_two(S + k - 1) ** 2


def choose_patch_size(req: PlanRequest) -> PlanResult:
    """Pick the feasible ``S`` with the smallest modeled mult+add total.

    Ties go to the smaller ``S``.
    """
    table = []
    for s in sorted(set(req.candidates)):
        ws = workspace(s, req.k)
        total = mul_split(req.N, s, req.k) + add_split(req.N, s, req.k)
        table.append(Candidate(s, ws <= req.budget_elems, ws, total))
    feasible = [c for c in table if c.feasible]
    if not feasible:
        listing = ", ".join(f"S={c.S}: {c.workspace}" for c in table)
        raise InfeasiblePlan(
            f"no candidate fits a budget of {req.budget_elems} elements ({listing})"
        )
    best = min(feasible, key=lambda c: (c.modeled_total, c.S))
    return PlanResult(best.S, best.modeled_total, tuple(table))
