"""Budget-capped upgrade weights and the relaxation without a change-count
budget.

Under the max-norm cost budget ``K`` each edge can be raised independently to
``min(w(e) + K/c(e), u(e))``; doing that everywhere maximizes both the
distance sum and the shortest root-leaf distance at once, so the relaxed
problem is solved by one pass: infeasible iff the shortest root-leaf path is
still below ``M`` after capping every edge.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .plans import INFEASIBLE, OPTIMAL, SolveReport, UpgradePlan
from .tree import TreeInstance, leaf_control, srd

__all__ = ["UpperWeights", "upper_weights", "solve_dit_inf", "exact_edge_data", "root_distances"]


@dataclass(frozen=True)
class UpperWeights:
    """Per-edge capped weights under a max-norm budget.

    ``capped[e] = min(w(e) + K/c(e), u(e))``, ``slack = capped - w`` and
    ``increment = |L(e)| * slack`` (the distance-sum gain of upgrading just
    that edge).  Arrays in float runs, tuples of exact numbers in exact runs.
    """

    capped: object
    slack: object
    increment: object


def exact_edge_data(inst: TreeInstance) -> tuple[list[int], list[int], list[int]]:
    """The w/u/c vectors as Python ints; raises if any entry is non-integral.

    Exact runs keep all arithmetic in int/Fraction so solver-vs-oracle
    comparisons can use equality instead of tolerances.
    """
    out = []
    for arr, name in ((inst.w, "w"), (inst.u, "u"), (inst.c, "c")):
        vals = arr.tolist()
        if any(not float(x).is_integer() for x in vals[1:]):
            raise ValueError(f"exact mode needs integral {name} values")
        out.append([int(x) for x in vals])
    return tuple(out)


def upper_weights(inst: TreeInstance, K=None, exact: bool = False) -> UpperWeights:
    """Cap every edge at the largest weight reachable under budget ``K``."""
    if K is None:
        K = inst.K
    if K is None:
        raise ValueError("budget K not given and not set on the instance")
    if K < 0:
        raise ValueError("budget K must be nonnegative")
    counts = leaf_control(inst, materialize_sets=False).control_count
    if not exact:
        capped = np.minimum(inst.w + float(K) / inst.c, inst.u)
        capped[0] = 0.0
        slack = capped - inst.w
        slack[0] = 0.0
        increment = counts * slack
        for arr in (capped, slack, increment):
            arr.setflags(write=False)
        return UpperWeights(capped=capped, slack=slack, increment=increment)

    w, u, c = exact_edge_data(inst)
    if isinstance(K, float):
        if not K.is_integer():
            raise ValueError("exact mode needs an integral budget K")
        K = int(K)
    capped = [0]
    for e in range(1, inst.n + 1):
        raise_to = Fraction(K, c[e]) + w[e]
        cap = min(raise_to, u[e])
        if cap.denominator == 1:
            cap = int(cap)
        capped.append(cap)
    slack = [0] + [capped[e] - w[e] for e in range(1, inst.n + 1)]
    increment = [0] + [int(counts[e]) * slack[e] for e in range(1, inst.n + 1)]
    return UpperWeights(capped=tuple(capped), slack=tuple(slack), increment=tuple(increment))


def root_distances(inst: TreeInstance, weights) -> list:
    """Distance from the root to every node under the given edge weights."""
    dist = [0] * (inst.n + 1)
    for v in inst.postorder()[::-1]:  # parents first
        if v == 0:
            continue
        dist[v] = dist[int(inst.parent[v])] + weights[v]
    return dist


def solve_dit_inf(inst: TreeInstance, K=None, exact: bool = False) -> SolveReport:
    """Solve the relaxation that has no change-count budget.

    Raise every edge to its cap; if the shortest root-leaf path still falls
    short of ``M`` the problem is infeasible (the report carries the binding
    leaf), otherwise the capped vector is optimal.
    """
    t0 = time.perf_counter()
    if inst.M is None:
        raise ValueError("instance has no StRD bound M")
    ups = upper_weights(inst, K, exact=exact)
    lc = leaf_control(inst, materialize_sets=False)
    dist = root_distances(inst, ups.capped)
    short_leaf = min(lc.leaves, key=lambda t: (dist[t], t))
    shortest = dist[short_leaf]
    if shortest < inst.M:
        return SolveReport(problem="relax", status=INFEASIBLE, min_path=shortest,
                           witness_leaf=short_leaf, wall_time=time.perf_counter() - t0)
    upgraded = frozenset(e for e in inst.edges() if ups.slack[e] > 0)
    plan = UpgradePlan(upgrades=upgraded, weights=ups.capped)
    return SolveReport(problem="relax", status=OPTIMAL,
                       objective=srd(inst, ups.capped, lc), min_path=shortest,
                       plan=plan, wall_time=time.perf_counter() - t0)
