"""Minimum max-norm budget reaching a target distance sum.

The optimal distance sum of the doubly-budgeted problem is non-decreasing in
the cost budget K, so the smallest integer K whose optimum is feasible and
meets the target D is found by bisecting K over [0, ceil(max c(e)(u(e)-w(e)))].
K = 0 allows no weight change at all and is decided in closed form; the upper
end decides feasibility outright.  Every probed budget's solve is cached so
the boundary K1 never needs an extra solve after the loop.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .dit import solve_dit
from .plans import INFEASIBLE, OPTIMAL, SolveReport, UpgradePlan
from .relax import root_distances
from .tree import TreeInstance, leaf_control, srd

__all__ = ["BudgetSearchTrace", "solve_mcdit"]


@dataclass
class BudgetSearchTrace:
    """(K_mid, distance sum or None, predicate) per probe, plus call counts."""

    k_top: int
    probes: list = field(default_factory=list)
    dit_calls: int = 0
    k_star: int | None = None


def solve_mcdit(inst: TreeInstance, exact: bool = False, refine: bool = False) -> SolveReport:
    """Find the smallest budget K whose optimum meets both M and D."""
    t0 = time.perf_counter()
    for name in ("M", "N", "D"):
        if getattr(inst, name) is None:
            raise ValueError(f"instance must set {name}")
    if int(inst.N) < 1:
        raise ValueError("budget search requires N >= 1")

    k_top = 0.0
    for e in inst.edges():
        k_top = max(k_top, float(inst.c[e]) * (float(inst.u[e]) - float(inst.w[e])))
    k_top = math.ceil(k_top)
    trace = BudgetSearchTrace(k_top=k_top)
    cache: dict[int, SolveReport] = {}

    def probe(k: int) -> bool:
        if k not in cache:
            cache[k] = solve_dit(inst, K=k, exact=exact)
            trace.dit_calls += 1
        rep = cache[k]
        ok = rep.feasible and rep.objective >= inst.D
        trace.probes.append((k, rep.objective if rep.feasible else None, ok))
        return ok

    # K = 0 permits no change: decide it without a solve.
    lc = leaf_control(inst, materialize_sets=False)
    dist = root_distances(inst, inst.w)
    base_min = min(dist[t] for t in lc.leaves)
    base_sum = srd(inst, inst.w, lc)
    if base_min >= inst.M and base_sum >= inst.D:
        plan = UpgradePlan(upgrades=frozenset(), weights=inst.w)
        trace.k_star = 0
        return SolveReport(problem="mcdit", status=OPTIMAL, objective=base_sum,
                           min_path=base_min, plan=plan, k_star=0,
                           iterations=trace.dit_calls, trace=trace,
                           wall_time=time.perf_counter() - t0)

    if k_top == 0 or not probe(k_top):
        return SolveReport(problem="mcdit", status=INFEASIBLE, k_star=None,
                           iterations=trace.dit_calls, trace=trace,
                           wall_time=time.perf_counter() - t0)

    lo, hi = 0, k_top  # probe(lo) false, probe(hi) true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probe(mid):
            hi = mid
        else:
            lo = mid
    k_star = hi

    if refine and k_star >= 1:
        # Optional pass over the real-valued cap breakpoints inside
        # (k_star - 1, k_star]; off by default, integer budgets otherwise.
        criticals = sorted({float(inst.c[e]) * (float(inst.u[e]) - float(inst.w[e]))
                            for e in inst.edges()
                            if k_star - 1 < float(inst.c[e]) * (float(inst.u[e]) - float(inst.w[e])) <= k_star})
        for k_real in criticals:
            rep = solve_dit(inst, K=k_real, exact=False)
            trace.dit_calls += 1
            ok = rep.feasible and rep.objective >= inst.D
            trace.probes.append((k_real, rep.objective if rep.feasible else None, ok))
            if ok:
                cache[k_real] = rep
                k_star = k_real
                break

    trace.k_star = k_star
    final = cache[k_star]
    return SolveReport(problem="mcdit", status=OPTIMAL, objective=final.objective,
                       min_path=final.min_path, plan=final.plan,
                       lambda_star=final.lambda_star, k_star=k_star,
                       iterations=trace.dit_calls, trace=trace,
                       wall_time=time.perf_counter() - t0)
