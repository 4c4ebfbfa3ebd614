"""Bisection over the scalarization weight for the doubly-budgeted problem.

The combined-objective solver trades the shortest root-leaf path against the
distance sum as ``lam`` moves across [0, 1]: its optimal path value is
non-decreasing in ``lam`` and its distance sum non-increasing.  The maximum
distance sum subject to ``min_path >= M`` is therefore found by bisecting for
the smallest ``lam`` whose optimum clears the bound.  Feasibility at all is
decided at ``lam = 1`` (the pure max-min-path solve); the search interval is
narrowed until it is smaller than ``1/U^2`` where ``U`` bounds every
achievable path value and distance sum, so no further plan changes can hide
inside it.

The DP table is built once per call: its Pareto fronts do not depend on
``lam``, so every bisection step is a cheap root re-evaluation of the same
table (recomputing the table per step would return bit-identical states).
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .combine_dp import CitTable
from .plans import INFEASIBLE, OPTIMAL, SolveReport
from .relax import exact_edge_data, root_distances
from .tree import TreeInstance, leaf_control, srd

__all__ = ["BisectionTrace", "solve_dit"]

log = logging.getLogger(__name__)


@dataclass
class BisectionTrace:
    """Record of one bisection run.

    ``iterations`` holds one ``(lam_mid, min_path_mid, accepted)`` triple per
    loop step; a step is accepted (interval moves down) exactly when the mid
    optimum's path value strictly exceeds M.  ``cit_calls`` counts the
    feasibility check at lam=1 plus the loop evaluations; the final replay at
    ``lambda_star`` re-reads the same table and is not a fresh solve.
    """

    u_bound: float
    threshold: object
    iterations: list = field(default_factory=list)
    lambda_star: object = None
    cit_calls: int = 0
    early_exit: bool = False
    fallback_lambda: object = None


def _path_value_bound(inst: TreeInstance, exact: bool):
    """U = (shortest root-leaf path at the caps u) + (distance sum at u)."""
    weights = exact_edge_data(inst)[1] if exact else inst.u
    lc = leaf_control(inst, materialize_sets=False)
    dist = root_distances(inst, weights)
    return min(dist[t] for t in lc.leaves) + srd(inst, weights, lc)


def solve_dit(inst: TreeInstance, K=None, N=None, M=None, exact: bool = False,
              early_exit: bool = True, table: CitTable | None = None) -> SolveReport:
    """Maximize the distance sum under both budgets and the path bound M."""
    t0 = time.perf_counter()
    M = inst.M if M is None else M
    if M is None:
        raise ValueError("bound M not given and not set on the instance")
    N_val = inst.N if N is None else N
    if N_val is None or int(N_val) < 1:
        raise ValueError("bisection solver requires N >= 1")
    if table is None:
        table = CitTable(inst, K=K, N=N_val, exact=exact)

    u_bound = _path_value_bound(inst, exact)
    if exact:
        threshold = Fraction(1, max(int(u_bound), 2) ** 2)
        lo, hi = Fraction(0), Fraction(1)
    else:
        threshold = 1.0 / max(float(u_bound), 2.0) ** 2
        lo, hi = 0.0, 1.0
    trace = BisectionTrace(u_bound=float(u_bound), threshold=threshold)

    top = table.evaluate(1)
    trace.cit_calls += 1
    if top.min_path < M:
        # Even the pure max-min-path solve misses the bound.
        _, plan = table.plan(1)
        dist = root_distances(inst, plan.weights)
        lc = leaf_control(inst, materialize_sets=False)
        witness = min(lc.leaves, key=lambda t: (dist[t], t))
        return SolveReport(problem="dit", status=INFEASIBLE, min_path=top.min_path,
                           witness_leaf=witness, trace=trace,
                           iterations=len(trace.iterations),
                           wall_time=time.perf_counter() - t0)

    dist_cap = table.max_dist_sum() if early_exit else None
    lam_star = None
    while hi - lo > threshold:
        mid = (lo + hi) / 2
        state = table.evaluate(mid)
        trace.cit_calls += 1
        accepted = state.min_path > M
        trace.iterations.append((mid, state.min_path, accepted))
        if early_exit and state.min_path >= M and state.dist_sum >= dist_cap:
            # The mid plan is feasible and already attains the best distance
            # sum any plan can reach, so it is optimal.
            lam_star = mid
            trace.early_exit = True
            break
        if accepted:
            hi = mid
        else:
            lo = mid
    if lam_star is None:
        lam_star = hi
    trace.lambda_star = lam_star

    state, plan = table.plan(lam_star)
    if state.min_path < M:
        # Should be unreachable with a deterministic table replay; fall back
        # to the smallest lambda whose evaluation was feasible.
        candidates = [lam for lam, mp, _ in trace.iterations if mp >= M]
        fallback = min(candidates) if candidates else 1
        log.warning("plan at lambda*=%s misses the path bound; falling back to %s",
                    lam_star, fallback)
        trace.fallback_lambda = fallback
        state, plan = table.plan(fallback)
        lam_star = fallback
        trace.lambda_star = lam_star

    return SolveReport(problem="dit", status=OPTIMAL, objective=state.dist_sum,
                       min_path=state.min_path, plan=plan, lambda_star=lam_star,
                       iterations=len(trace.iterations), trace=trace,
                       wall_time=time.perf_counter() - t0,
                       notes={"early_exit": trace.early_exit})
