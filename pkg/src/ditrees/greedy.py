"""Linear-time solver for the single-upgrade case (N = 1, all r = 1).

Exactly one edge may be raised to its budget-capped weight.  When the path
bound already holds, the best edge is simply the one with the largest
distance-sum increment.  Otherwise any winning edge must sit on the currently
shortest root-leaf path, carry enough slack to lift that path to ``M``, and
control every deficient leaf; among those candidates the largest increment
wins.  If no edge qualifies the problem is infeasible.
"""

from __future__ import annotations

import time

import numpy as np

from .plans import INFEASIBLE, OPTIMAL, SolveReport, UpgradePlan
from .relax import exact_edge_data, root_distances, upper_weights
from .tree import TreeInstance, leaf_control, srd, subtree_intervals

__all__ = ["solve_dit_n1"]


def solve_dit_n1(inst: TreeInstance, exact: bool = False) -> SolveReport:
    """Pick the single best upgrade edge, or report infeasibility."""
    t0 = time.perf_counter()
    if inst.N != 1:
        raise ValueError("single-upgrade solver requires N == 1")
    if any(int(inst.r[e]) != 1 for e in inst.edges()):
        raise ValueError("single-upgrade solver requires r(e) == 1 on every edge")
    if inst.M is None or inst.K is None:
        raise ValueError("instance must set both M and K")

    ups = upper_weights(inst, exact=exact)
    lc = leaf_control(inst, materialize_sets=False)
    weights = exact_edge_data(inst)[0] if exact else inst.w
    dist = root_distances(inst, weights)
    M = inst.M

    short_leaf = min(lc.leaves, key=lambda t: (dist[t], t))
    case = None
    if dist[short_leaf] >= M:
        # Path bound already satisfied: any upgrade keeps it so.
        case = "bound_satisfied"
        best = max(inst.edges(), key=lambda e: (ups.increment[e], -e))
    else:
        path = []
        v = short_leaf
        while v != 0:
            path.append(v)
            v = int(inst.parent[v])
        need = M - dist[short_leaf]
        if max(ups.slack[e] for e in path) < need:
            return SolveReport(problem="dit1", status=INFEASIBLE, min_path=dist[short_leaf],
                               witness_leaf=short_leaf, wall_time=time.perf_counter() - t0,
                               notes={"case": "slack_insufficient"})
        deficient = [t for t in lc.leaves if dist[t] < M]
        # One edge must control every deficient leaf; test it in O(1) per edge
        # with preorder-interval prefix counts.
        tin, tout = subtree_intervals(inst)
        marks = np.zeros(inst.n + 2, dtype=np.int64)
        for t in deficient:
            marks[tin[t] + 1] = 1
        pref = np.cumsum(marks)
        covers = lambda e: pref[tout[e]] - pref[tin[e]] == len(deficient)
        bset = [e for e in path if ups.slack[e] >= need and covers(e)]
        if not bset:
            # len(deficient) > 1 here: with a single deficient leaf, any
            # slack-sufficient edge on its own path qualifies.
            return SolveReport(problem="dit1", status=INFEASIBLE, min_path=dist[short_leaf],
                               witness_leaf=short_leaf, wall_time=time.perf_counter() - t0,
                               notes={"case": "no_common_edge"})
        case = "single_deficient" if len(deficient) == 1 else "common_edge"
        best = max(sorted(bset), key=lambda e: (ups.increment[e], -e))

    if exact:
        new_w = tuple(ups.capped[e] if e == best else weights[e]
                      for e in range(inst.n + 1))
    else:
        new_w = np.array(inst.w)
        new_w[best] = ups.capped[best]
        new_w.setflags(write=False)
    plan = UpgradePlan(upgrades=frozenset({best}), weights=new_w)
    new_dist = root_distances(inst, new_w)
    return SolveReport(problem="dit1", status=OPTIMAL,
                       objective=srd(inst, new_w, lc),
                       min_path=min(new_dist[t] for t in lc.leaves),
                       plan=plan, wall_time=time.perf_counter() - t0,
                       notes={"case": case, "edge": best})
