"""Shared result types: upgrade plans and solve reports."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["UpgradePlan", "SolveReport"]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class UpgradePlan:
    """A decision: which edges are raised to their capped weight, and the
    resulting per-edge weight vector (indexed by child node id)."""

    upgrades: frozenset[int]
    weights: object  # np.ndarray in float runs, tuple of int/Fraction in exact runs

    def weight_of(self, edge: int):
        return self.weights[edge]

    def cost(self, inst) -> int:
        """Total change-count budget consumed, ``sum r(e)`` over upgrades."""
        return int(sum(int(inst.r[e]) for e in self.upgrades))


@dataclass
class SolveReport:
    """Outcome of one solver run.

    ``objective`` is the quantity the problem maximizes/minimizes (distance
    sum for the upgrade problems, the combined score for the scalarized
    solver, the minimum budget for the min-cost search).  Optional fields are
    filled only where they mean something for the problem solved.
    """

    problem: str
    status: str  # "optimal" | "infeasible"
    objective: object = None
    min_path: object = None
    plan: UpgradePlan | None = None
    lambda_star: object = None
    k_star: object = None
    iterations: int = 0
    wall_time: float = 0.0
    witness_leaf: int | None = None
    trace: object = None
    notes: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status == OPTIMAL

    def upgraded_edges(self) -> list[int]:
        if self.plan is None:
            return []
        return sorted(self.plan.upgrades)


def plan_weights_array(plan: UpgradePlan) -> np.ndarray:
    """Plan weights as a float array (convenience for reporting)."""
    return np.asarray([float(x) for x in plan.weights])
